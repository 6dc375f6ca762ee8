"""Python access to the spectre toolkit."""

from fractions import Fraction

from ._spectre import (
    DisconnectedGraph,
    JetExhausted,
    connes_distance,
    dixmier_estimate,
    gravity_action,
    integrand,
    quadratic_form_coeff,
    real_structure,
    run_cli,
    spinor_dim,
    volume_constant,
    volume_constant_exact,
)

__all__ = [
    "DisconnectedGraph",
    "JetExhausted",
    "connes_distance",
    "dixmier_estimate",
    "gravity_action",
    "gravity_coefficients",
    "integrand",
    "quadratic_form_coeff",
    "real_structure",
    "run_cli",
    "spinor_dim",
    "volume_constant",
    "volume_constant_exact",
]


def gravity_coefficients(p, torsion=True):
    """(coeff_R, coeff_t2) as Fractions, in units of c(p)."""
    g = gravity_action(p, torsion)
    return Fraction(g["coeff_R"]), Fraction(g["coeff_t2"])
