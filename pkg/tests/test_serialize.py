from fractions import Fraction
from random import Random

import pytest

from endflow.charge import EndCharge
from endflow.extmath import INF, parse_frac, parse_mass
from endflow.gen import (
    random_morphism,
    random_preserving_word,
    random_star,
    random_tree,
)
from endflow.measure import base_state
from endflow.serialize import (
    SchemaError,
    charge_from_json,
    charge_to_json,
    morphism_from_json,
    morphism_to_json,
    star_from_json,
    star_to_json,
    state_from_json,
    state_to_json,
    tree_from_json,
    tree_to_json,
    word_from_json,
    word_to_json,
)


def test_rational_parsing():
    assert parse_frac("3/4") == Fraction(3, 4)
    assert parse_frac("-3") == Fraction(-3)
    assert parse_mass("inf") is INF
    assert parse_mass("7/2") == Fraction(7, 2)
    with pytest.raises(ValueError):
        parse_frac("inf")
    with pytest.raises(ValueError):
        parse_frac("1.5e3")
    with pytest.raises(ValueError):
        parse_frac("1/0")


def test_tree_round_trip(star_tree):
    doc = tree_to_json(star_tree)
    assert doc["root"] == "r"
    back = tree_from_json(doc)
    assert back == star_tree


def test_tree_schema_example():
    doc = {
        "root": "a",
        "nodes": [
            {"id": "a", "weight": "4", "children": ["e1", "k"]},
            {"id": "e1", "children": [], "leaf": {"kind": "end", "tail": "inf"}},
            {"id": "k", "weight": "1/2", "children": [], "leaf": {"kind": "closed"}},
        ],
    }
    t = tree_from_json(doc)
    assert t.weights["a"] == 4
    assert t.tails["e1"] is INF
    assert "k" in t.closed


def test_tree_schema_errors():
    with pytest.raises(SchemaError):
        tree_from_json({"nodes": []})
    with pytest.raises(SchemaError):
        tree_from_json({"root": "a", "nodes": [{"id": "a", "weight": "x"}]})
    with pytest.raises(SchemaError):
        tree_from_json(
            {
                "root": "a",
                "nodes": [{"id": "a", "leaf": {"kind": "mystery"}}],
            }
        )


def test_state_and_charge_round_trip(star_tree):
    mu = base_state(star_tree)
    assert state_from_json(star_tree, state_to_json(mu)) == mu
    c = EndCharge(star_tree, {"l1": Fraction(3, 2), "l2": Fraction(-3, 2)})
    assert charge_from_json(star_tree, charge_to_json(c)) == c
    # flat spelling is accepted as well
    assert charge_from_json(star_tree, {"l1": "3/2", "l2": "-3/2"}) == c


def test_word_round_trip():
    rng = Random(71)
    for _ in range(20):
        t = random_tree(rng)
        mu = base_state(t)
        w = random_preserving_word(rng, t, mu)
        doc = word_to_json(w)
        assert word_from_json(t, mu, doc) == w


def test_word_schema_errors(star_tree):
    mu = base_state(star_tree)
    with pytest.raises(SchemaError):
        word_from_json(star_tree, mu, {"moves": [{"teleport": {}}]})
    with pytest.raises(SchemaError):
        word_from_json(
            star_tree,
            mu,
            {"moves": [{"balloon": {"edge": ["r"], "amount": "1"}}]},
        )


def test_morphism_round_trip():
    rng = Random(72)
    for _ in range(10):
        pi = random_morphism(rng)
        back = morphism_from_json(morphism_to_json(pi))
        assert back.source == pi.source
        assert back.target == pi.target
        assert back.node_map == pi.node_map


def test_star_round_trip():
    rng = Random(73)
    for _ in range(10):
        star = random_star(rng)
        doc = star_to_json(star)
        assert doc["star"] == {"rays": star.ray_count, "depth": star.depth}
        back = star_from_json(doc)
        assert back.cells == star.cells
        assert back.tails == star.tails
        assert back.center_mass == star.center_mass
