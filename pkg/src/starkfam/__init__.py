"""Equivariant Dirichlet L-values for abelian fields over Q and their congruences."""

__version__ = "0.1.0"

from .gring import (  # noqa: E402
    GroupRingElement,
    ResidueRing,
    characters,
    idempotent,
    parity_idempotent,
    project,
    twist,
    unit_group,
)
from .lfunctions import delta_T, euler_factor_group, gen_bernoulli, l_value, theta  # noqa: E402

__all__ = [
    "GroupRingElement",
    "ResidueRing",
    "characters",
    "idempotent",
    "parity_idempotent",
    "project",
    "twist",
    "unit_group",
    "delta_T",
    "euler_factor_group",
    "gen_bernoulli",
    "l_value",
    "theta",
]
