"""Structure of zero-expansions at the golden ratio.

A leak-free GRE run started from (0, 0), or a beta encoder at beta = phi with
input 0, emits bits in blocks of three: (s, -s, -s) with s free each block
(the dead-band resolution picks it). The coefficient polynomial of such a
stream therefore factors exactly as (1 - t - t^2) * R(t) with R a sparse
+-t^{3j} polynomial, which pins the first positive root at phi^-1 and gives
explicit margins: |R(t)| >= 1 - t^3/(1-t^3) below the root and
|P'(phi^-1)| >= (1 + 2 phi^-1) * 0.691 >= 1.545. These margins are what make
base recovery from zero-expansions far better conditioned than the generic
transversality constants suggest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoders import PHI_INV
from .errors import ParameterError, StructureViolationError
from .recovery import TernaryPolynomial, poly_eval

__all__ = [
    "FactoredZeroPoly",
    "check_period3",
    "factor_zero_poly",
    "rn_magnitude_bound",
    "derivative_bound_at_root",
]

DERIVATIVE_FLOOR = 1.545


@dataclass(frozen=True)
class FactoredZeroPoly:
    """Quotient R(t) = sum_j s_j t^{3j} with s_j in {-1, +1}: nonzero entries
    only at indices divisible by 3."""

    r_coeffs: np.ndarray
    n_blocks: int

    def __post_init__(self):
        r = np.ascontiguousarray(np.asarray(self.r_coeffs, dtype=np.int64))
        object.__setattr__(self, "r_coeffs", r)
        if len(r) % 3 != 1:
            raise StructureViolationError("quotient degree must be divisible by 3")
        if not np.all(r[np.arange(len(r)) % 3 != 0] == 0):
            raise StructureViolationError("quotient has entries off the t^{3j} lattice")
        heads = r[::3]
        if not np.all(np.isin(heads, (-1, 1))):
            raise StructureViolationError("t^{3j} coefficients must be +-1")
        if self.n_blocks != len(heads):
            raise StructureViolationError("n_blocks inconsistent with coefficients")

    def eval(self, t: float) -> float:
        acc = 0.0
        for c in self.r_coeffs[::-1]:
            acc = acc * t + float(c)
        return acc


def check_period3(bits) -> bool:
    """True iff some block alignment (offset 0, 1 or 2) has at least one
    complete 3-block and every complete block matches (s, -s, -s).

    Leading bits before the first complete block are unconstrained boundary
    terms; the alignment search absorbs the ambiguity of where the stream's
    first full block starts.
    """
    bits = np.asarray(bits, dtype=np.int64)
    n = len(bits)
    for offset in (0, 1, 2):
        m = (n - offset) // 3
        if m < 1:
            continue
        blocks = bits[offset:offset + 3 * m].reshape(m, 3)
        if np.all(blocks[:, 1] == -blocks[:, 0]) and np.all(blocks[:, 2] == -blocks[:, 0]):
            return True
    return False


def factor_zero_poly(p: TernaryPolynomial) -> FactoredZeroPoly:
    """Exact integer synthetic division of p by (1 - t - t^2).

    The quotient recursion is r_k = c_k + r_{k-1} + r_{k-2}; divisibility is
    exactly the vanishing of the two formal top terms. Raises
    StructureViolationError on a nonzero remainder or a quotient off the
    sparse +-t^{3j} pattern.
    """
    c = [int(v) for v in p.coeffs]
    deg = len(c) - 1
    if deg < 2 or deg % 3 != 2:
        raise StructureViolationError(
            f"zero-expansion polynomial must have degree = 2 mod 3, got {deg}"
        )
    r = [0] * (deg + 1)
    for k in range(deg + 1):
        r[k] = c[k] + (r[k - 1] if k >= 1 else 0) + (r[k - 2] if k >= 2 else 0)
    if r[deg] != 0 or r[deg - 1] != 0:
        raise StructureViolationError(
            f"nonzero remainder ({r[deg - 1]}, {r[deg]}): stream is not a "
            "period-3 zero-expansion"
        )
    quotient = np.asarray(r[: deg - 1], dtype=np.int64)
    return FactoredZeroPoly(quotient, n_blocks=(deg - 2) // 3 + 1)


def rn_magnitude_bound(r: FactoredZeroPoly, t: float) -> tuple[float, float]:
    """(|R(t)|, 1 - t^3/(1-t^3)) for t in [0, phi^-1).

    The head coefficient is +-1 and the remaining +-t^{3j} tail is dominated
    by the geometric series, so the first component always dominates the
    second on the admissible interval.
    """
    if not (math.isfinite(t) and 0.0 <= t < PHI_INV):
        raise ParameterError(f"t must lie in [0, phi^-1), got {t}")
    value = abs(r.eval(t))
    t3 = t ** 3
    bound = 1.0 - t3 / (1.0 - t3)
    if value < bound - 1e-9:
        raise StructureViolationError(
            f"|R({t})| = {value} below its lattice bound {bound}"
        )
    return value, bound


def derivative_bound_at_root(p: TernaryPolynomial) -> float:
    """|p'(phi^-1)| for a factorable zero-expansion polynomial; always at
    least 1.545 = (1 + 2 phi^-1) * (1 - phi^-3/(1-phi^-3))."""
    factor_zero_poly(p)  # validates class membership
    _, der = poly_eval(p, PHI_INV)
    mag = abs(der)
    if mag < DERIVATIVE_FLOOR - 1e-9:
        raise StructureViolationError(
            f"|p'(phi^-1)| = {mag} below the structural floor {DERIVATIVE_FLOOR}"
        )
    return mag
