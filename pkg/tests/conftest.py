import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from endflow.extmath import INF  # noqa: E402
from endflow.tree import BalloonTree  # noqa: E402

# immutable value fixtures are safe to share across generated examples
settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("suite")


@pytest.fixture
def star_tree() -> BalloonTree:
    """Root of weight 4 with two weighted branches ending in infinite
    tails and one finite tail hanging directly off the root."""
    return BalloonTree(
        root="r",
        children={"r": ("u", "v", "l3"), "u": ("l1",), "v": ("l2",)},
        weights={"r": Fraction(4), "u": Fraction(2), "v": Fraction(1)},
        tails={"l1": INF, "l2": INF, "l3": Fraction(5)},
    )
