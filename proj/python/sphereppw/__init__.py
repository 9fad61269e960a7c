"""Dirichlet eigenvalue inequalities on spherical domains."""

from ._core import (
    InvalidArgument,
    NumericalError,
    ball_spectrum,
    cap_volume,
    chiti_ball,
    criterion,
    domain,
    gap_profile,
    perturbation,
    radius_for_lambda1,
    rearrange,
    scan,
    theta_of_volume,
)

__all__ = [
    "InvalidArgument",
    "NumericalError",
    "ball_spectrum",
    "cap_volume",
    "chiti_ball",
    "criterion",
    "domain",
    "gap_profile",
    "perturbation",
    "radius_for_lambda1",
    "rearrange",
    "scan",
    "theta_of_volume",
]
