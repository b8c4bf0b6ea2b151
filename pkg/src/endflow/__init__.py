"""Exact end-charge calculus on balloon trees.

Blocks of a rooted weighted tree model a compact exhaustion of a
noncompact space; End leaves model tails toward the ends.  Words of mass
moves stand in for measure-preserving transformations, their leaf fluxes
form finitely additive end charges, and every admissible charge is hit
constructively by :func:`build_section`, giving the kernel factorization
and retraction.  A piecewise-linear star-of-rays model cross-checks the
flux calculus against the raw set-difference definition of the charge.
"""

from .charge import (
    EndCharge,
    charge_eval,
    linear_combine,
    scale_charge,
    validate_charge,
    zero_charge,
)
from .extmath import INF, Inf, NEG_INF, as_frac, parse_frac, parse_mass
from .measure import (
    MeasureState,
    base_state,
    j_value,
    mass,
    mu_equivalent,
    omega_finite_ends,
)
from .morphism import (
    TreeMorphism,
    check_diagram,
    compose,
    identity_morphism,
    lift_section,
    pull_charge,
    pull_measure,
    push_charge,
    push_measure,
    push_word,
)
from .raystar import (
    PLMap,
    RayStar,
    charge_from_definition,
    compare_oracle,
    realize_word,
)
from .section import (
    Exhaustion,
    FeasibilityInterval,
    align_step,
    build_section,
    factorize,
    feasibility_interval,
    forced_flux,
    retract,
    solve_balloon_parameter,
)
from .transport import (
    BalloonMove,
    FluxField,
    MoveWord,
    Rearrange,
    apply_move,
    apply_word,
    charge_of_word,
    concat,
    empty_word,
    extensionally_equal,
    invert_word,
    is_measure_preserving,
    region_transfer,
)
from .tree import (
    BalloonTree,
    compactly_equivalent,
    end_complement,
    end_intersection,
    end_union,
    ends_disjoint,
    region_ends,
    validate_tree,
)

__all__ = [name for name in dir() if not name.startswith("_")]
