"""Numerical tolerances shared by every module.

All comparisons against zero or between floats go through one
:class:`Tolerances` instance.  The environment variable ``TCQ_TOL``
overrides the absolute comparison tolerance.
"""
import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    atol: float = 1e-9
    rtol: float = 1e-9
    # accept a candidate TCP solution when its residual is below this
    solution: float = 1e-8
    # merge solutions closer than this in the infinity norm
    dedupe: float = 1e-6
    # smallest/largest singular value ratio for linear independence
    independence: float = 1e-12
    bisection: float = 1e-12
    newton_iterations: int = 50
    damping: float = 0.5
    # structural equalities such as y1 == -x1 on canonical generators
    structural: float = 1e-9


DEFAULT = Tolerances()


def get_tolerances():
    """Return the active tolerances, honouring ``TCQ_TOL`` if set."""
    raw = os.environ.get("TCQ_TOL")
    if not raw:
        return DEFAULT
    value = float(raw)
    if not value > 0:
        raise ValueError(f"TCQ_TOL must be positive, got {raw!r}")
    return replace(DEFAULT, atol=value)
