"""Constructive section of the end-charge map, and its consequences.

Given an admissible charge, :func:`build_section` produces a
measure-preserving word whose charge is exactly that charge, with the
zero charge mapping to the empty word.  The construction alternates two
words f and g along an exhaustion by depth cuts; at each level
:func:`align_step` corrects one word against the other outside the inner
cut, scheduling mass transfers whose feasibility is guaranteed by the
admissibility of the charge (the open-interval check in
:func:`solve_balloon_parameter` is a bug sentinel, never a runtime
branch).  The section yields the kernel factorization
(:func:`factorize`) and the charge-linear retraction (:func:`retract`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .charge import EndCharge, charge_eval, scale_charge, validate_charge
from .errors import (
    AlignPreconditionError,
    BadDecompositionError,
    InfeasibleTransferError,
    InvalidChargeError,
    RangeError,
    TreeMismatchError,
)
from .extmath import INF, NEG_INF, ExtMass, as_frac, is_inf
from .measure import MeasureState, base_state, mass
from .transport import (
    BalloonMove,
    FluxField,
    MoveWord,
    Rearrange,
    _Runner,
    apply_word,
    charge_of_word,
    concat,
    empty_word,
    invert_word,
)
from .tree import (
    BalloonTree,
    Region,
    check_region,
    components_outside,
    frontier_edges,
    region_ends,
)


@dataclass(frozen=True)
class FeasibilityInterval:
    """Open interval of admissible transfers into a balloon region."""

    low: ExtMass  # negative rational or -inf
    high: ExtMass  # positive rational or +inf

    def contains_strict(self, x: Fraction) -> bool:
        below = self.low is NEG_INF or self.low < x
        above = self.high is INF or x < self.high
        return below and above


@dataclass(frozen=True)
class Exhaustion:
    """Increasing chain of compact, downward-closed block regions ending
    at the full block set."""

    tree: BalloonTree
    levels: Tuple[Region, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "levels", tuple(frozenset(l) for l in self.levels)
        )

    @classmethod
    def from_depths(cls, tree: BalloonTree, depths: Sequence[int]) -> "Exhaustion":
        levels = []
        for d in depths:
            levels.append(
                frozenset(
                    v for v in tree.block_nodes if tree.depth[v] < d
                )
            )
        return cls(tree, tuple(levels))

    @classmethod
    def default(cls, tree: BalloonTree) -> "Exhaustion":
        """Depth cuts at 1, 2, ... until every block is covered."""
        max_depth = max(tree.depth[v] for v in tree.block_nodes)
        return cls.from_depths(tree, range(1, max_depth + 2))

    def validate(self) -> list:
        out = []
        t = self.tree
        blocks = set(t.block_nodes)
        prev: frozenset = frozenset()
        for i, lv in enumerate(self.levels):
            if not lv <= blocks:
                out.append(f"level {i} contains non-block nodes")
            if not prev <= lv:
                out.append(f"level {i} does not contain level {i - 1}")
            for v in lv:
                p = t.parent.get(v)
                if p is not None and p not in lv:
                    out.append(f"level {i} not downward closed at {v!r}")
            prev = lv
        if not self.levels or self.levels[-1] != frozenset(blocks):
            out.append("exhaustion does not cover all block nodes")
        return out


def forced_flux(t: BalloonTree, a: EndCharge) -> FluxField:
    """The unique conservative flux field with the charge's leaf values.

    On a tree the flux across every edge is forced: it is the charge of
    the ends below that edge.
    """
    if a.tree != t:
        raise TreeMismatchError("charge lives on a different tree")
    if not validate_charge(base_state(t), a):
        raise InvalidChargeError("charge is not admissible for this tree")
    below = {}
    for v in reversed(t.nodes):
        s = a.values.get(v, Fraction(0)) if t.is_end_leaf(v) else Fraction(0)
        for c in t.child_map(v):
            s += below[c]
        below[v] = s
    return FluxField(t, {(p, c): below[c] for (p, c) in t.edges})


def feasibility_interval(
    sigma: MeasureState, balloon, complement
) -> FeasibilityInterval:
    """Open interval of mass transferable into the balloon from the
    complement region."""
    b = check_region(sigma.tree, balloon)
    n = check_region(sigma.tree, complement)
    if b & n:
        raise BadDecompositionError("balloon and complement overlap")
    mb = mass(sigma, b)
    mn = mass(sigma, n)
    low = NEG_INF if is_inf(mb) else -mb
    high = INF if is_inf(mn) else mn
    return FeasibilityInterval(low, high)


def solve_balloon_parameter(
    sigma: MeasureState, balloon, complement, target
) -> Fraction:
    """Invert the transfer gauge: the unique t in (-1, 1) moving exactly
    ``target`` into the balloon.

    Gauge: t >= 0 maps to t * mass(complement) when finite, else
    t / (1 - t); symmetrically for t < 0 with the balloon mass.  Raises
    InfeasibleTransferError when the target is not strictly inside the
    feasibility interval; on inputs derived from an admissible charge
    this cannot happen.
    """
    target = as_frac(target)
    iv = feasibility_interval(sigma, balloon, complement)
    if not iv.contains_strict(target):
        raise InfeasibleTransferError(
            f"target {target} outside open interval ({iv.low}, {iv.high})"
        )
    if target == 0:
        return Fraction(0)
    if target > 0:
        if is_inf(iv.high):
            return target / (1 + target)
        return target / iv.high
    if iv.low is NEG_INF:
        return target / (1 - target)
    return target / (-iv.low)


def _donor_order(tree: BalloonTree, runner: _Runner, donors, dest: str):
    """Donors sorted blocks first, then finite tails, then infinite tails,
    nearest to the destination first."""
    index = {v: i for i, v in enumerate(tree.nodes)}

    def key(v):
        if v in runner.tails:
            kind = 2 if is_inf(runner.tails[v]) else 1
        else:
            kind = 0
        return (kind, len(tree.path(v, dest)), index[v])

    return sorted(donors, key=key)


def _route(tree, runner, out_moves: List, src: str, dst: str, amount: Fraction):
    path = tree.path(src, dst)
    for a, b in zip(path, path[1:]):
        if tree.parent.get(b) == a:
            mv = BalloonMove((a, b), amount)
        else:
            mv = BalloonMove((b, a), -amount)
        runner.apply(mv)
        out_moves.append(mv)


def _transfer(tree, runner, out_moves: List, donors, dest: str, amount: Fraction):
    """Drain ``amount`` from the donor region onto ``dest``.

    Installments are capped at half the donor's current mass (all of it
    for infinite tails), so strict positivity holds at every step; the
    residual closes in finitely many passes because the feasibility check
    guarantees the donors strictly cover the amount.
    """
    remaining = amount
    order = _donor_order(tree, runner, donors, dest)
    while remaining > 0:
        progressed = False
        for donor in order:
            if remaining == 0:
                break
            m = runner.node_mass(donor)
            if is_inf(m):
                take = remaining
            else:
                take = min(remaining, m / 2)
                if take <= 0:
                    continue
            _route(tree, runner, out_moves, donor, dest, take)
            remaining -= take
            progressed = True
        if remaining > 0 and not progressed:
            raise InfeasibleTransferError(
                f"donors exhausted with {remaining} still to move"
            )


def _check_cut(tree: BalloonTree, cut: Region, name: str):
    blocks = set(tree.block_nodes)
    if not cut <= blocks:
        raise AlignPreconditionError(f"{name} cut contains non-block nodes")
    for v in cut:
        p = tree.parent.get(v)
        if p is not None and p not in cut:
            raise AlignPreconditionError(f"{name} cut not downward closed")


def align_step(
    mu: MeasureState,
    inner: Region,
    outer: Region,
    word: MoveWord,
    target_word: MoveWord,
    charge: EndCharge,
) -> MoveWord:
    """One correction level: a word h supported outside the inner cut
    such that word+h matches the target word's state on the outer cut and
    hits the charge's transfer targets on every component beyond it.

    Hypotheses (checked): the two words share the base measure, agree on
    the inner cut, and their transfer difference already equals the
    charge on every component outside the inner cut.  Inside each
    component the deep balloons are settled one at a time, drawing mass
    from the not-yet-settled remainder through the feasibility gauge,
    and a final rearrangement fixes the core to the target state.
    """
    tree = mu.tree
    if word.tree != tree or target_word.tree != tree or charge.tree != tree:
        raise TreeMismatchError("alignment inputs live on different trees")
    if word.base != mu or target_word.base != mu:
        raise AlignPreconditionError("words must be based at the given measure")
    inner = check_region(tree, inner)
    outer = check_region(tree, outer)
    _check_cut(tree, inner, "inner")
    _check_cut(tree, outer, "outer")
    if not inner <= outer:
        raise AlignPreconditionError("inner cut must lie inside the outer cut")

    fstate, fflux = apply_word(word)
    gstate, gflux = apply_word(target_word)

    for v in inner:
        if fstate.blocks[v] != gstate.blocks[v]:
            raise AlignPreconditionError(
                f"states disagree on inner cut at {v!r}"
            )

    def transfer_into(flux: FluxField, region) -> Fraction:
        return sum(
            (sign * flux[e] for (e, sign) in frontier_edges(tree, region)),
            Fraction(0),
        )

    comps = components_outside(tree, inner)
    for A in comps:
        want = charge_eval(charge, region_ends(tree, A))
        have = transfer_into(fflux, A) - transfer_into(gflux, A)
        if have != want:
            raise AlignPreconditionError(
                f"transfer mismatch on a component outside the inner cut: "
                f"{have} != {want}"
            )

    runner = _Runner(fstate)
    runner.flux = dict(fflux.flux)
    h_moves: List = []
    deep_comps = components_outside(tree, outer)

    for A in comps:
        core = A & outer
        if not core:
            # the component lies entirely beyond the outer cut; its target
            # is already met by the hypothesis check above
            needed = charge_eval(charge, region_ends(tree, A)) + transfer_into(
                gflux, A
            )
            if runner.region_transfer(A) != needed:
                raise AlignPreconditionError(
                    "untouched component drifted from its target"
                )
            continue
        deeps = [B for B in deep_comps if B <= A]
        for j, B in enumerate(deeps):
            needed = charge_eval(charge, region_ends(tree, B)) + transfer_into(
                gflux, B
            )
            target = needed - runner.region_transfer(B)
            rest = core.union(*deeps[j + 1 :])
            solve_balloon_parameter(runner.state(), B, rest, target)
            if target == 0:
                continue
            root_b = next(v for v in B if tree.parent.get(v) not in B)
            if target > 0:
                _transfer(tree, runner, h_moves, rest, root_b, target)
            else:
                _transfer(
                    tree, runner, h_moves, B, tree.parent[root_b], -target
                )
        tau = {v: gstate.blocks[v] for v in core}
        if any(runner.blocks[v] != tau[v] for v in core):
            mv = Rearrange(frozenset(core), tau)
            runner.apply(mv)
            h_moves.append(mv)

    return MoveWord(tree, fstate, tuple(h_moves))


def build_section(
    tree: BalloonTree,
    mu: MeasureState,
    a: EndCharge,
    exhaustion: Optional[Exhaustion] = None,
) -> MoveWord:
    """A measure-preserving word with charge exactly ``a``; the zero
    charge yields the empty word.

    Two words grow alternately along the exhaustion: at each level f is
    corrected against g out to the next cut, then g against f with the
    negated charge.  Once the cuts exhaust the blocks the two words agree
    everywhere and differ in transfer by exactly ``a``; the result is f
    followed by the inverse of g.
    """
    if mu.tree != tree or a.tree != tree:
        raise TreeMismatchError("tree, measure and charge must match")
    if not validate_charge(mu, a):
        raise InvalidChargeError("charge is not admissible for the measure")
    if a.is_zero():
        return empty_word(mu)
    ex = exhaustion if exhaustion is not None else Exhaustion.default(tree)
    problems = ex.validate()
    if problems:
        raise ValueError("invalid exhaustion: " + "; ".join(problems))

    levels = list(ex.levels)
    if len(levels) % 2:
        levels.append(levels[-1])
    neg_a = scale_charge(Fraction(-1), a)

    f = empty_word(mu)
    g = empty_word(mu)
    prev: Region = frozenset()
    for k in range(0, len(levels), 2):
        K, L = levels[k], levels[k + 1]
        f = concat(f, align_step(mu, prev, K, f, g, a))
        g = concat(g, align_step(mu, K, L, g, f, neg_a))
        prev = L
    return concat(f, invert_word(g))


def factorize(
    word: MoveWord, exhaustion: Optional[Exhaustion] = None
) -> Tuple[MoveWord, EndCharge]:
    """Split a preserving word into a zero-charge kernel word and its
    charge: word = section(charge) followed by the kernel, extensionally."""
    a = charge_of_word(word)
    s = build_section(word.tree, word.base, a, exhaustion)
    kernel = concat(invert_word(s), word)
    return kernel, a


def retract(
    word: MoveWord, tau, exhaustion: Optional[Exhaustion] = None
) -> MoveWord:
    """Slide a preserving word toward the kernel: the result has charge
    (1 - tau) times the word's; tau = 0 returns the word, tau = 1 lands
    in the kernel, and kernel words are fixed for every tau."""
    tau = as_frac(tau)
    if not 0 <= tau <= 1:
        raise RangeError(f"retraction parameter {tau} outside [0, 1]")
    a = charge_of_word(word)
    s = build_section(word.tree, word.base, scale_charge(tau, a), exhaustion)
    return concat(invert_word(s), word)
