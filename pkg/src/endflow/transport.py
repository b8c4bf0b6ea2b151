"""Mass-transport words and their flux accounting.

A word is a finite composition of two generator moves acting on a measure
state:

* ``BalloonMove`` transfers an amount across a single tree edge (into the
  tail when the child is an End leaf; negative amounts reverse direction).
* ``Rearrange`` replaces the masses on a connected set of block nodes,
  conserving their total.  It models an arbitrary compactly supported
  measure-preserving shuffle, so only its block-level effect is recorded.

A ``FluxField`` tracks, per edge, the cumulative net mass moved from the
parent side into the subtree below.  For a measure-preserving word the
flux on the edge into each End leaf is the net mass sent toward that end;
collecting these leaf values yields the word's end charge.  Two words are
considered equal extensionally: same final state and same flux field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Tuple, Union

from .charge import EndCharge
from .errors import (
    BadSupportError,
    ChargeUndefinedError,
    MassNotConservedError,
    NonPositiveBlockError,
    TreeMismatchError,
)
from .extmath import as_frac, is_inf
from .measure import MeasureState
from .tree import BalloonTree, Edge, frontier_edges


@dataclass(frozen=True)
class BalloonMove:
    """Transfer ``amount`` from the parent block across ``edge``."""

    edge: Edge
    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "edge", (self.edge[0], self.edge[1]))
        object.__setattr__(self, "amount", as_frac(self.amount))


@dataclass(frozen=True, eq=False)
class Rearrange:
    """Replace masses on a connected block support, conserving their sum."""

    support: frozenset
    masses: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        object.__setattr__(
            self, "masses", {k: as_frac(v) for k, v in self.masses.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, Rearrange):
            return NotImplemented
        return self.support == other.support and self.masses == other.masses


Move = Union[BalloonMove, Rearrange]


@dataclass(frozen=True, eq=False)
class MoveWord:
    """Ordered moves applied left to right from a base state."""

    tree: BalloonTree
    base: MeasureState
    moves: Tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        if self.base.tree != self.tree:
            raise TreeMismatchError("base state belongs to a different tree")

    def __len__(self):
        return len(self.moves)

    def __eq__(self, other):
        if not isinstance(other, MoveWord):
            return NotImplemented
        return (
            self.tree == other.tree
            and self.base == other.base
            and self.moves == other.moves
        )


@dataclass(frozen=True, eq=False)
class FluxField:
    """Cumulative net transfer per edge, parent side into child side."""

    tree: BalloonTree
    flux: Mapping[Edge, Fraction]

    def __post_init__(self):
        full = {e: Fraction(0) for e in self.tree.edges}
        for e, v in self.flux.items():
            if e not in full:
                raise TreeMismatchError(f"flux on unknown edge {e!r}")
            full[e] = as_frac(v)
        object.__setattr__(self, "flux", full)

    def __getitem__(self, edge: Edge) -> Fraction:
        return self.flux[edge]

    def leaf_flux(self, leaf: str) -> Fraction:
        return self.flux[self.tree.leaf_edge(leaf)]

    def divergence(self, node: str) -> Fraction:
        """Net inflow minus outflow at a block node (zero under Kirchhoff)."""
        t = self.tree
        total = Fraction(0)
        p = t.parent.get(node)
        if p is not None:
            total += self.flux[(p, node)]
        for c in t.child_map(node):
            total -= self.flux[(node, c)]
        return total

    def __eq__(self, other):
        if not isinstance(other, FluxField):
            return NotImplemented
        return self.tree == other.tree and self.flux == other.flux


def empty_word(mu: MeasureState) -> MoveWord:
    return MoveWord(mu.tree, mu, ())


class _Runner:
    """Mutable evaluation state shared by the appliers and the scheduler."""

    __slots__ = ("tree", "blocks", "tails", "flux")

    def __init__(self, mu: MeasureState):
        self.tree = mu.tree
        self.blocks = dict(mu.blocks)
        self.tails = dict(mu.tails)
        self.flux = {e: Fraction(0) for e in mu.tree.edges}

    # node mass with infinity passthrough
    def node_mass(self, v: str):
        if v in self.tails:
            return self.tails[v]
        return self.blocks[v]

    def state(self) -> MeasureState:
        return MeasureState(self.tree, dict(self.blocks), dict(self.tails))

    def flux_field(self) -> FluxField:
        return FluxField(self.tree, dict(self.flux))

    def region_mass(self, region):
        total = Fraction(0)
        for v in region:
            m = self.node_mass(v)
            if is_inf(m):
                return m
            total += m
        return total

    def region_transfer(self, region) -> Fraction:
        total = Fraction(0)
        for (e, sign) in frontier_edges(self.tree, region):
            total += sign * self.flux[e]
        return total

    def apply(self, move: Move):
        if isinstance(move, BalloonMove):
            self._apply_balloon(move)
        elif isinstance(move, Rearrange):
            self._apply_rearrange(move)
        else:
            raise TypeError(f"unknown move {move!r}")

    def _apply_balloon(self, move: BalloonMove):
        p, c = move.edge
        d = move.amount
        t = self.tree
        if (p, c) not in self.flux:
            raise TreeMismatchError(f"no edge {move.edge!r} in the tree")
        if p in self.tails:
            raise BadSupportError(f"parent {p!r} is a tail")
        new_p = self.blocks[p] - d
        if new_p <= 0:
            raise NonPositiveBlockError(
                f"block {p!r} would drop to {new_p} on {move}"
            )
        if c in self.tails:
            m = self.tails[c]
            if is_inf(m):
                new_c = m
            else:
                new_c = m + d
                if new_c <= 0:
                    raise NonPositiveBlockError(
                        f"tail {c!r} would drop to {new_c} on {move}"
                    )
            self.tails[c] = new_c
        else:
            new_c = self.blocks[c] + d
            if new_c <= 0:
                raise NonPositiveBlockError(
                    f"block {c!r} would drop to {new_c} on {move}"
                )
            self.blocks[c] = new_c
        self.blocks[p] = new_p
        self.flux[(p, c)] += d

    def _apply_rearrange(self, move: Rearrange):
        t = self.tree
        sup = move.support
        if not sup:
            raise BadSupportError("empty rearrangement support")
        if set(move.masses) != set(sup):
            raise BadSupportError("masses must cover exactly the support")
        for v in sup:
            if v in self.tails:
                raise BadSupportError(f"support touches tail {v!r}")
            if v not in self.blocks:
                raise BadSupportError(f"support node {v!r} not in tree")
        # connectivity: every support node except one must have its parent
        # in the support
        tops = [v for v in sup if t.parent.get(v) not in sup]
        if len(tops) != 1:
            raise BadSupportError("support is not connected")
        for v, m in move.masses.items():
            if m <= 0:
                raise NonPositiveBlockError(
                    f"rearranged mass at {v!r} is {m}"
                )
        old_total = sum((self.blocks[v] for v in sup), Fraction(0))
        new_total = sum(move.masses.values(), Fraction(0))
        if old_total != new_total:
            raise MassNotConservedError(
                f"support mass {old_total} != rearranged mass {new_total}"
            )
        delta = {v: move.masses[v] - self.blocks[v] for v in sup}
        # Kirchhoff-consistent attribution: each edge picks up the total
        # mass change strictly below it (nonzero only inside the support).
        below: dict = {}
        for v in reversed(self.tree.nodes):
            s = delta.get(v, Fraction(0))
            for c in t.child_map(v):
                s += below.get(c, Fraction(0))
            below[v] = s
        for (p, c) in t.edges:
            b = below.get(c, Fraction(0))
            if b:
                self.flux[(p, c)] += b
        for v in sup:
            self.blocks[v] = move.masses[v]


def apply_move(
    mu: MeasureState, flux: FluxField, move: Move
) -> Tuple[MeasureState, FluxField]:
    """Apply one move to a state and flux field, returning new values."""
    r = _Runner(mu)
    r.flux = dict(flux.flux)
    r.apply(move)
    return r.state(), r.flux_field()


def apply_word(word: MoveWord) -> Tuple[MeasureState, FluxField]:
    """Left fold of the moves from the base state and zero flux.

    Errors raised by a move carry the failing index in ``move_index``.
    """
    r = _Runner(word.base)
    for i, m in enumerate(word.moves):
        try:
            r.apply(m)
        except Exception as e:
            e.move_index = i
            raise
    return r.state(), r.flux_field()


def is_measure_preserving(word: MoveWord) -> bool:
    """Final blocks equal the base blocks and no net flux enters any
    finite tail."""
    state, flux = apply_word(word)
    if state.blocks != word.base.blocks:
        return False
    for leaf in word.tree.end_leaves:
        if not is_inf(word.base.tails[leaf]) and flux.leaf_flux(leaf) != 0:
            return False
    return True


def charge_of_word(word: MoveWord) -> EndCharge:
    """End charge of a measure-preserving word: its leaf-edge fluxes."""
    state, flux = apply_word(word)
    if state.blocks != word.base.blocks or any(
        not is_inf(word.base.tails[v]) and flux.leaf_flux(v) != 0
        for v in word.tree.end_leaves
    ):
        raise ChargeUndefinedError(
            "word does not preserve its base measure; charge undefined"
        )
    return EndCharge(
        word.tree, {v: flux.leaf_flux(v) for v in word.tree.end_leaves}
    )


def concat(w1: MoveWord, w2: MoveWord) -> MoveWord:
    if w1.tree != w2.tree:
        raise TreeMismatchError("words live on different trees")
    return MoveWord(w1.tree, w1.base, w1.moves + w2.moves)


def invert_word(word: MoveWord) -> MoveWord:
    """Reverse the moves: amounts negate, rearrangements restore the
    masses recorded just before they were applied.  The inverse is based
    at the word's final state, so ``concat(w, invert_word(w))`` returns
    to the base with zero flux."""
    r = _Runner(word.base)
    inv: List[Move] = []
    for m in word.moves:
        if isinstance(m, Rearrange):
            old = {v: r.blocks[v] for v in m.support}
            inv.append(Rearrange(m.support, old))
        else:
            inv.append(BalloonMove(m.edge, -m.amount))
        r.apply(m)
    return MoveWord(word.tree, r.state(), tuple(reversed(inv)))


def region_transfer(word: MoveWord, region: Iterable[str]) -> Fraction:
    """Net mass the word moves into a region: signed flux over its
    frontier edges, oriented inward."""
    _, flux = apply_word(word)
    total = Fraction(0)
    for (e, sign) in frontier_edges(word.tree, region):
        total += sign * flux[e]
    return total


def extensionally_equal(w1: MoveWord, w2: MoveWord) -> bool:
    """Same tree, base, final state and flux field."""
    if w1.tree != w2.tree or w1.base != w2.base:
        return False
    s1, f1 = apply_word(w1)
    s2, f2 = apply_word(w2)
    return s1 == s2 and f1 == f2


def rearrange_to_moves(
    tree: BalloonTree,
    state: MeasureState,
    support: Iterable[str],
    new_masses: Mapping[str, Fraction],
) -> List[BalloonMove]:
    """Decompose a rearrangement into edge moves with the same flux effect.

    Surpluses are routed to the support's top node first, then deficits are
    served from there; every intermediate stop receives before it sends, so
    positivity never breaks.
    """
    sup = frozenset(support)
    top = [v for v in sup if tree.parent.get(v) not in sup]
    if len(top) != 1:
        raise BadSupportError("support is not connected")
    anchor = top[0]
    cur = {v: state.blocks[v] for v in sup}
    new = {v: as_frac(new_masses[v]) for v in sup}
    if sum(cur.values(), Fraction(0)) != sum(new.values(), Fraction(0)):
        raise MassNotConservedError("rearrangement changes the support mass")
    moves: List[BalloonMove] = []

    def route(src: str, dst: str, amount: Fraction):
        path = tree.path(src, dst)
        for a, b in zip(path, path[1:]):
            if tree.parent.get(b) == a:
                moves.append(BalloonMove((a, b), amount))
            else:
                moves.append(BalloonMove((b, a), -amount))
            cur[a] -= amount
            cur[b] += amount

    order = [v for v in tree.nodes if v in sup]
    for v in order:
        surplus = cur[v] - new[v]
        if v != anchor and surplus > 0:
            route(v, anchor, surplus)
    for v in order:
        deficit = new[v] - cur[v]
        if v != anchor and deficit > 0:
            route(anchor, v, deficit)
    return moves
