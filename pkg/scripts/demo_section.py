#!/usr/bin/env python3
"""End-to-end walkthrough on a small fixture.

Builds the canonical three-tail tree, constructs the section word for a
charge pushing 3 units from one infinite end to the other, checks it
against the forced flux and the 1-D realization, then factorizes a word
and slides it toward the kernel.  All printed numbers are exact.
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from endflow import (
    INF,
    BalloonMove,
    BalloonTree,
    EndCharge,
    MoveWord,
    RayStar,
    apply_word,
    base_state,
    build_section,
    charge_of_word,
    charge_from_definition,
    factorize,
    forced_flux,
    realize_word,
    retract,
)


def show_flux(label, flux):
    parts = ", ".join(f"{p}->{c}: {flux[(p, c)]}" for (p, c) in flux.tree.edges)
    print(f"{label}: {parts}")


def main():
    tree = BalloonTree(
        root="r",
        children={"r": ("u", "v", "l3"), "u": ("l1",), "v": ("l2",)},
        weights={"r": Fraction(4), "u": Fraction(2), "v": Fraction(1)},
        tails={"l1": INF, "l2": INF, "l3": Fraction(5)},
    )
    mu = base_state(tree)
    a = EndCharge(tree, {"l1": Fraction(3), "l2": Fraction(-3)})
    print("charge:", {k: str(v) for k, v in a.values.items()})

    word = build_section(tree, mu, a)
    print(f"section word: {len(word)} moves")
    state, flux = apply_word(word)
    show_flux("final flux", flux)
    show_flux("forced flux", forced_flux(tree, a))
    print("charge of section:", {k: str(v) for k, v in charge_of_word(word).values.items()})
    print("state restored:", state == mu)

    hand = MoveWord(
        tree,
        mu,
        (
            BalloonMove(("r", "u"), Fraction(3)),
            BalloonMove(("u", "l1"), Fraction(3)),
            BalloonMove(("v", "l2"), Fraction(-3)),
            BalloonMove(("r", "v"), Fraction(-3)),
        ),
    )
    kernel, c = factorize(hand)
    print("factorized charge:", {k: str(v) for k, v in c.values.items()})
    print("kernel charge zero:", charge_of_word(kernel).is_zero())
    half = retract(hand, Fraction(1, 2))
    print(
        "retract 1/2 charge:",
        {k: str(v) for k, v in charge_of_word(half).values.items()},
    )

    star = RayStar(
        Fraction(4),
        ((Fraction(1),), (Fraction(1),), (Fraction(1),)),
        (INF, INF, INF),
    )
    stree = star.to_tree()
    push = MoveWord(
        stree,
        base_state(stree),
        (
            BalloonMove(("r1c0", "r1e"), Fraction(-3)),
            BalloonMove(("c", "r1c0"), Fraction(-3)),
            BalloonMove(("c", "r0c0"), Fraction(3)),
            BalloonMove(("r0c0", "r0e"), Fraction(3)),
        ),
    )
    h = realize_word(star, push)
    print(
        "eventual translations:",
        [str(h.eventual_shift(i)) for i in range(3)],
    )
    for cut in (h.last_breakpoint() + 1, h.last_breakpoint() + 8):
        d = charge_from_definition(star, h, cut)
        print(
            f"definition charge at cut {cut}:",
            {k: str(v) for k, v in d.values.items()},
        )


if __name__ == "__main__":
    main()
