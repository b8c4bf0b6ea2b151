"""JSON schemas for trees, states, charges, words, morphisms and stars.

Rationals are strings "p/q" (reduced; plain "p" when integral) and "inf"
is the only infinity token.  Loaders raise SchemaError on malformed
documents; semantic validation stays with the domain types.
"""

from __future__ import annotations

from .charge import EndCharge
from .extmath import frac_str, mass_str, parse_frac, parse_mass
from .measure import MeasureState
from .morphism import TreeMorphism
from .raystar import RayStar
from .transport import BalloonMove, MoveWord, Rearrange
from .tree import BalloonTree


class SchemaError(ValueError):
    """Document does not match the expected JSON shape."""


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{where}: key {key!r} has the wrong type")
    return val


# -- trees --------------------------------------------------------------------


def tree_to_json(t: BalloonTree) -> dict:
    nodes = []
    for v in t.nodes:
        entry = {"id": v, "children": list(t.child_map(v))}
        if t.is_end_leaf(v):
            entry["leaf"] = {"kind": "end", "tail": mass_str(t.tails[v])}
        else:
            entry["weight"] = frac_str(t.weights[v])
            entry["leaf"] = {"kind": "closed"} if v in t.closed else None
        nodes.append(entry)
    return {"root": t.root, "nodes": nodes}


def tree_from_json(doc: dict) -> BalloonTree:
    root = _need(doc, "root", str, "tree")
    nodes = _need(doc, "nodes", list, "tree")
    children = {}
    weights = {}
    tails = {}
    closed = set()
    for entry in nodes:
        vid = _need(entry, "id", str, "tree node")
        kids = entry.get("children", [])
        if not isinstance(kids, list) or not all(isinstance(c, str) for c in kids):
            raise SchemaError(f"tree node {vid!r}: bad children list")
        children[vid] = tuple(kids)
        leaf = entry.get("leaf")
        if leaf is not None and not isinstance(leaf, dict):
            raise SchemaError(f"tree node {vid!r}: bad leaf tag")
        kind = leaf.get("kind") if leaf else None
        if kind == "end":
            try:
                tails[vid] = parse_mass(_need(leaf, "tail", str, "end leaf"))
            except ValueError as e:
                raise SchemaError(f"tree node {vid!r}: {e}") from None
            # a weight on an End leaf carries no block; ignored if present
        elif kind == "closed" or kind is None:
            if kind == "closed":
                closed.add(vid)
            if "weight" in entry:
                try:
                    weights[vid] = parse_frac(entry["weight"])
                except ValueError as e:
                    raise SchemaError(f"tree node {vid!r}: {e}") from None
        else:
            raise SchemaError(f"tree node {vid!r}: unknown leaf kind {kind!r}")
    return BalloonTree(
        root=root,
        children=children,
        weights=weights,
        tails=tails,
        closed=frozenset(closed),
    )


# -- measure states -----------------------------------------------------------


def state_to_json(mu: MeasureState) -> dict:
    return {
        "blocks": {v: frac_str(m) for v, m in sorted(mu.blocks.items())},
        "tails": {v: mass_str(m) for v, m in sorted(mu.tails.items())},
    }


def state_from_json(tree: BalloonTree, doc: dict) -> MeasureState:
    blocks = _need(doc, "blocks", dict, "measure")
    tails = _need(doc, "tails", dict, "measure")
    try:
        return MeasureState(
            tree,
            {v: parse_frac(m) for v, m in blocks.items()},
            {v: parse_mass(m) for v, m in tails.items()},
        )
    except ValueError as e:
        raise SchemaError(f"measure: {e}") from None


# -- charges ------------------------------------------------------------------


def charge_to_json(c: EndCharge) -> dict:
    return {"values": {v: frac_str(x) for v, x in sorted(c.values.items())}}


def charge_from_json(tree: BalloonTree, doc: dict) -> EndCharge:
    values = doc.get("values", doc)
    if not isinstance(values, dict):
        raise SchemaError("charge: expected a values mapping")
    try:
        return EndCharge(tree, {v: parse_frac(x) for v, x in values.items()})
    except ValueError as e:
        raise SchemaError(f"charge: {e}") from None


# -- words --------------------------------------------------------------------


def word_to_json(w: MoveWord) -> dict:
    moves = []
    for mv in w.moves:
        if isinstance(mv, BalloonMove):
            moves.append(
                {
                    "balloon": {
                        "edge": list(mv.edge),
                        "amount": frac_str(mv.amount),
                    }
                }
            )
        else:
            moves.append(
                {
                    "rearrange": {
                        "support": sorted(mv.support),
                        "masses": {
                            v: frac_str(m) for v, m in sorted(mv.masses.items())
                        },
                    }
                }
            )
    return {"moves": moves}


def word_from_json(tree: BalloonTree, base: MeasureState, doc: dict) -> MoveWord:
    moves = []
    for i, entry in enumerate(_need(doc, "moves", list, "word")):
        if not isinstance(entry, dict):
            raise SchemaError(f"word move {i}: not an object")
        if "balloon" in entry:
            b = entry["balloon"]
            edge = _need(b, "edge", list, f"word move {i}")
            if len(edge) != 2:
                raise SchemaError(f"word move {i}: edge needs two node ids")
            try:
                amount = parse_frac(_need(b, "amount", str, f"word move {i}"))
            except ValueError as e:
                raise SchemaError(f"word move {i}: {e}") from None
            moves.append(BalloonMove((edge[0], edge[1]), amount))
        elif "rearrange" in entry:
            r = entry["rearrange"]
            support = _need(r, "support", list, f"word move {i}")
            masses = _need(r, "masses", dict, f"word move {i}")
            try:
                moves.append(
                    Rearrange(
                        frozenset(support),
                        {v: parse_frac(m) for v, m in masses.items()},
                    )
                )
            except ValueError as e:
                raise SchemaError(f"word move {i}: {e}") from None
        else:
            raise SchemaError(f"word move {i}: unknown move kind")
    return MoveWord(tree, base, tuple(moves))


# -- morphisms ----------------------------------------------------------------


def morphism_to_json(pi: TreeMorphism) -> dict:
    return {
        "source": tree_to_json(pi.source),
        "target": tree_to_json(pi.target),
        "map": dict(sorted(pi.node_map.items())),
    }


def morphism_from_json(doc: dict) -> TreeMorphism:
    source = tree_from_json(_need(doc, "source", dict, "morphism"))
    target = tree_from_json(_need(doc, "target", dict, "morphism"))
    node_map = _need(doc, "map", dict, "morphism")
    if not all(
        isinstance(k, str) and isinstance(v, str) for k, v in node_map.items()
    ):
        raise SchemaError("morphism: map must be id to id")
    return TreeMorphism(source, target, dict(node_map))


# -- ray stars ----------------------------------------------------------------


def star_to_json(star: RayStar) -> dict:
    doc = tree_to_json(star.to_tree())
    doc["star"] = {"rays": star.ray_count, "depth": star.depth}
    return doc


def star_from_json(doc: dict) -> RayStar:
    header = _need(doc, "star", dict, "star")
    rays = _need(header, "rays", int, "star header")
    depth = _need(header, "depth", int, "star header")
    tree = tree_from_json(doc)
    try:
        return RayStar.from_tree(tree, rays, depth)
    except ValueError as e:
        raise SchemaError(f"star: {e}") from None
