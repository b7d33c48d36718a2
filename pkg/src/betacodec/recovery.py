"""Recovering the unknown expansion base from bitstreams.

A base-gamma expansion of zero (or the difference stream of an encoded
(x, -x) pair) yields a polynomial with coefficients in {-1, 0, +1} and
constant term +-1 whose first positive root is gamma. Transversality of that
coefficient class on [0, 0.6491] makes the root unique there and turns a
small residual |P(g)| into a proven bound |g - gamma| <= |P(g)| / delta, so
truncated streams recover gamma with exponentially decaying error.

Known transversality constants: delta = 0.07 on [0, 0.63] and
delta = 0.00008 on [0, 0.6491]; contexts between the anchors take the
smaller (conservative) value. Above 0.6491 recovery still works empirically
(double zeros only appear near 0.68) but nothing is proven; results there
are flagged EMPIRICAL_ONLY.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .encoders import PHI, PHI_INV
from .errors import NoRootError, NoSignalError, ParameterError

__all__ = [
    "ROOT_WINDOW_HIGH",
    "NEWTON_MARGIN",
    "DELTA_063",
    "DELTA_06491",
    "TernaryPolynomial",
    "TransversalityContext",
    "Guarantee",
    "RecoveryResult",
    "TransversalityReport",
    "difference_stream",
    "poly_eval",
    "first_root",
    "required_bits",
    "recover_gamma_from_zero",
    "recover_gamma_from_pair",
    "transversality_oracle",
]

ROOT_WINDOW_HIGH = 0.6491     # transversality holds up to here
NEWTON_MARGIN = 0.05          # Newton iterates may roam this far past the window
NEWTON_STEPS = 10
NEWTON_START = 0.618
DERIV_FLOOR = 1e-9
SCAN_RESOLUTION = 1e-4
DELTA_063 = 0.07              # transversality constant on [0, 0.63]
DELTA_06491 = 0.00008         # transversality constant on [0, 0.6491]

# Below this, double precision cannot certify a residual even at an exact
# root of a +-1 coefficient polynomial.
RESIDUAL_TOL_FLOOR = 1e-13


@dataclass(frozen=True)
class TernaryPolynomial:
    """Coefficients in {-1, 0, +1}, index 0 the constant term, constant +-1."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.int8))
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.ndim != 1 or len(coeffs) == 0:
            raise ParameterError("coeffs must be a non-empty 1-d sequence")
        if not np.all(np.isin(coeffs, (-1, 0, 1))):
            raise ParameterError("coefficients must lie in {-1, 0, +1}")
        if coeffs[0] not in (-1, 1):
            raise ParameterError("constant term must be -1 or +1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


class Guarantee(Enum):
    PROVEN = "proven"
    EMPIRICAL_ONLY = "empirical-only"


@dataclass(frozen=True)
class TransversalityContext:
    """Window [gamma_low, gamma_high] with a transversality constant delta
    valid on [0, gamma_high]; epsilon = 0.6491 - gamma_high is the headroom
    the root-existence argument needs. gamma_high must not exceed 0.6491.
    """

    gamma_high: float
    delta: float
    gamma_low: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if not (0.0 < self.gamma_high <= ROOT_WINDOW_HIGH + 1e-12):
            raise ParameterError(
                f"gamma_high must lie in (0, {ROOT_WINDOW_HIGH}], got {self.gamma_high}"
            )
        if self.gamma_low is not None and not (0.0 < self.gamma_low <= self.gamma_high):
            raise ParameterError("need 0 < gamma_low <= gamma_high")
        if not (self.delta > 0.0):
            raise ParameterError("delta must be positive")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", ROOT_WINDOW_HIGH - self.gamma_high)
        if self.epsilon < 0.0:
            raise ParameterError("epsilon must be >= 0")

    @classmethod
    def for_gamma_high(cls, gamma_high: float,
                       gamma_low: float | None = None) -> "TransversalityContext":
        """Context with the known transversality anchor constants: 0.07 up to
        0.63, the conservative 0.00008 between 0.63 and 0.6491."""
        delta = DELTA_063 if gamma_high <= 0.63 else DELTA_06491
        return cls(gamma_high=gamma_high, delta=delta, gamma_low=gamma_low)


@dataclass(frozen=True)
class RecoveryResult:
    gamma_estimate: float
    poly_degree_used: int
    residual: float
    shift_k: int | None
    guarantee: Guarantee


def poly_eval(p: TernaryPolynomial, t: float) -> tuple[float, float]:
    """Horner evaluation of p and p' at t."""
    if not math.isfinite(t):
        raise ValueError(f"evaluation point must be finite, got {t!r}")
    val = 0.0
    der = 0.0
    for c in p.coeffs[::-1]:
        der = der * t + val
        val = val * t + float(c)
    return val, der


def _values_on_grid(coeffs: np.ndarray, grid: np.ndarray) -> np.ndarray:
    vals = np.zeros_like(grid)
    for c in coeffs[::-1]:
        vals = vals * grid + float(c)
    return vals


def _bisect(coeffs: np.ndarray, lo: float, hi: float, iters: int = 100) -> float:
    flo = float(_values_on_grid(coeffs, np.array([lo]))[0])
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = float(_values_on_grid(coeffs, np.array([mid]))[0])
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def difference_stream(b, c) -> tuple[TernaryPolynomial, int]:
    """Difference polynomial of an encoded (x, -x) pair.

    d_j = b_j + c_j lies in {-2, 0, 2}; with k the number of leading zeros,
    the halved shifted sequence starts at +-1 and is returned as polynomial
    coefficients (constant term = first nonzero d, halved). Streams of
    different lengths are truncated to the shorter one.

    Raises NoSignalError when d is identically zero, which is forced when an
    ideal quantizer makes the pair exactly antisymmetric.
    """
    b = np.asarray(b, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64)
    n = min(len(b), len(c))
    d = b[:n] + c[:n]
    nonzero = np.nonzero(d)[0]
    if len(nonzero) == 0:
        raise NoSignalError(
            "difference stream is identically zero; use a flaky quantizer or "
            "another (x, -x) pair"
        )
    k = int(nonzero[0])
    coeffs = (d[k:] // 2).astype(np.int8)
    return TernaryPolynomial(coeffs), k


def first_root(p: TernaryPolynomial, ctx: TransversalityContext, tol: float,
               search_high: float | None = None) -> float:
    """First positive root of p, to residual tolerance |p(root)| <= tol.

    Ten Newton steps from 0.618; a step that leaves [0, window + 0.05] or
    meets a near-zero derivative falls back to a bisection on the first
    sign-change bracket found by scanning [0, window] at 1e-4 resolution.
    ``search_high`` widens the window past its default 0.6491 for empirical
    runs with larger bases. Raises NoRootError when no sign change exists in
    the window and Newton did not land on an acceptable residual.
    """
    if tol <= 0.0:
        raise ParameterError("tol must be positive")
    hi = ROOT_WINDOW_HIGH if search_high is None else float(search_high)
    newton_hi = hi + NEWTON_MARGIN
    tol_eff = max(tol, RESIDUAL_TOL_FLOOR)
    coeffs = p.coeffs

    x = NEWTON_START
    newton_ok = True
    for _ in range(NEWTON_STEPS):
        val, der = poly_eval(p, x)
        if abs(der) < DERIV_FLOOR:
            newton_ok = False
            break
        x = x - val / der
        if not (0.0 <= x <= newton_hi):
            newton_ok = False
            break
    if newton_ok:
        val, _ = poly_eval(p, x)
        if abs(val) <= tol_eff:
            return x

    # Sign-change scan over [0, hi]; coefficient class has no roots below 1/2
    # but the scan covers the whole window regardless (it is cheap).
    grid = np.arange(0.0, hi + SCAN_RESOLUTION / 2.0, SCAN_RESOLUTION)
    grid[-1] = min(grid[-1], hi)
    vals = _values_on_grid(coeffs, grid)
    exact = np.nonzero(vals == 0.0)[0]
    signs = vals < 0.0
    flips = np.nonzero(signs[1:] != signs[:-1])[0]
    root = None
    if len(exact) > 0 and (len(flips) == 0 or exact[0] <= flips[0]):
        root = float(grid[exact[0]])
    elif len(flips) > 0:
        i = int(flips[0])
        root = _bisect(coeffs, float(grid[i]), float(grid[i + 1]))
    if root is None:
        raise NoRootError(
            f"no sign change on [0, {hi}]; the truncation may be too short"
        )
    val, _ = poly_eval(p, root)
    if abs(val) > tol_eff:
        raise NoRootError(
            f"bracketed root has residual {abs(val):.3g} > tolerance {tol_eff:.3g}"
        )
    return root


def required_bits(ctx: TransversalityContext, gamma: float) -> int:
    """Smallest n with gamma^(n+1) <= (1 - gamma) * epsilon * delta: beyond
    this degree the truncated polynomial provably has a root in the window."""
    if not (0.0 < gamma <= ctx.gamma_high + 1e-12):
        raise ParameterError(f"gamma must lie in (0, gamma_high], got {gamma}")
    target = (1.0 - gamma) * ctx.epsilon * ctx.delta
    if target <= 0.0:
        raise ParameterError("context has epsilon = 0; no finite degree suffices")
    n = 0
    while gamma ** (n + 1) > target:
        n += 1
        if n > 100_000:
            raise ParameterError("degree bound did not converge")
    return n


def _acceptance_tol(ctx: TransversalityContext, degree: int) -> float:
    if ctx.gamma_low is not None:
        return max(ctx.gamma_low ** degree, RESIDUAL_TOL_FLOOR)
    return max(PHI ** (-degree), RESIDUAL_TOL_FLOOR)


def _classify(ctx: TransversalityContext, degree: int, estimate: float) -> Guarantee:
    lo = ctx.gamma_low if ctx.gamma_low is not None else PHI_INV - 1e-12
    in_window = lo - 1e-12 <= estimate <= ctx.gamma_high + 1e-12
    if not in_window or ctx.gamma_high > ROOT_WINDOW_HIGH:
        return Guarantee.EMPIRICAL_ONLY
    try:
        needed = required_bits(ctx, ctx.gamma_high)
    except ParameterError:
        return Guarantee.EMPIRICAL_ONLY
    return Guarantee.PROVEN if degree >= needed else Guarantee.EMPIRICAL_ONLY


def _recover_from_poly(poly: TernaryPolynomial, ctx: TransversalityContext,
                       shift_k: int | None,
                       search_high: float | None) -> RecoveryResult:
    degree = poly.degree
    tol = _acceptance_tol(ctx, degree)
    estimate = first_root(poly, ctx, tol, search_high=search_high)
    residual = abs(poly_eval(poly, estimate)[0])
    return RecoveryResult(
        gamma_estimate=estimate,
        poly_degree_used=degree,
        residual=residual,
        shift_k=shift_k,
        guarantee=_classify(ctx, degree, estimate),
    )


def recover_gamma_from_zero(bits, ctx: TransversalityContext,
                            search_high: float | None = None) -> RecoveryResult:
    """Recover the base from a bitstream encoding zero.

    The bits are the polynomial coefficients directly: P(t) = b_1 + b_2 t +
    ... The residual acceptance tolerance is gamma_low^degree (phi^-degree
    when the context has no gamma_low), floored at what double precision can
    certify.
    """
    bits = np.asarray(bits)
    return _recover_from_poly(
        TernaryPolynomial(bits), ctx, shift_k=None, search_high=search_high
    )


def recover_gamma_from_pair(b, c, ctx: TransversalityContext,
                            search_high: float | None = None) -> RecoveryResult:
    """Recover the base from the bitstreams of an encoded (x, -x) pair."""
    poly, k = difference_stream(b, c)
    return _recover_from_poly(poly, ctx, shift_k=k, search_high=search_high)


@dataclass(frozen=True)
class TransversalityReport:
    max_degree: int
    rho: float
    resolution: float
    total_instances: int
    violations: tuple
    """Tuple of (coeffs tuple, roots tuple) for polynomials with >= 2 roots."""


def transversality_oracle(max_degree: int, rho: float = ROOT_WINDOW_HIGH,
                          resolution: float = SCAN_RESOLUTION,
                          chunk: int = 4096) -> TransversalityReport:
    """Exhaustively scan every polynomial +-1 + sum_{j=1}^{d} c_j t^j with
    c_j in {-1, 0, 1} and d = max_degree for multiple roots in (0, rho].

    Root counting is a sign-change scan at the given resolution refined by
    bisection; candidates on the grid are re-checked in float64. Since
    |constant| = 1 and the tail is bounded by t/(1-t), no polynomial of the
    class has a root below 1/2, so the scan starts just under 0.5. Expected
    outcome for rho <= 0.6491: no violations (uniqueness). Tangential double
    roots without a sign change are invisible to the scan, as inherent to
    the method.
    """
    if max_degree > 14:
        raise ParameterError("max_degree above 14 is not enumerable in reason")
    if max_degree < 0:
        raise ParameterError("max_degree must be >= 0")
    d = max_degree
    total = 2 * 3 ** d
    grid = np.arange(0.4999, rho + resolution / 2.0, resolution)
    violations = []
    if len(grid) >= 2:
        n_tail = 3 ** d
        powers = 3 ** np.arange(d, dtype=np.int64) if d else np.empty(0, np.int64)
        for sign in (1, -1):
            for start in range(0, n_tail, chunk):
                idx = np.arange(start, min(start + chunk, n_tail), dtype=np.int64)
                # base-3 digits -> coefficients in {-1, 0, 1}
                coeffs = np.empty((len(idx), d + 1), dtype=np.int8)
                coeffs[:, 0] = sign
                if d:
                    coeffs[:, 1:] = (idx[:, None] // powers[None, :]) % 3 - 1
                vals = np.broadcast_to(
                    coeffs[:, d, None].astype(np.float64), (len(idx), len(grid))
                ).copy()
                for j in range(d - 1, -1, -1):
                    np.multiply(vals, grid, out=vals)
                    np.add(vals, coeffs[:, j, None], out=vals)
                neg = vals < 0.0
                flips = neg[:, 1:] != neg[:, :-1]
                n_flips = np.count_nonzero(flips, axis=1)
                n_zeros = np.count_nonzero(vals == 0.0, axis=1)
                candidates = np.nonzero((n_flips + n_zeros) >= 2)[0]
                for row in candidates:
                    roots = _refine_roots(coeffs[row], grid, vals[row], rho)
                    if len(roots) >= 2:
                        violations.append(
                            (tuple(int(c) for c in coeffs[row]), tuple(roots))
                        )
    return TransversalityReport(
        max_degree=max_degree,
        rho=rho,
        resolution=resolution,
        total_instances=total,
        violations=tuple(violations),
    )


def _refine_roots(coeffs: np.ndarray, grid: np.ndarray, vals: np.ndarray,
                  rho: float) -> list[float]:
    roots = []
    for i in np.nonzero(vals == 0.0)[0]:
        roots.append(float(grid[i]))
    neg = vals < 0.0
    for i in np.nonzero((neg[1:] != neg[:-1]) & (vals[1:] != 0.0) & (vals[:-1] != 0.0))[0]:
        roots.append(_bisect(coeffs, float(grid[i]), float(grid[i + 1])))
    roots = sorted(r for r in roots if 1e-12 < r <= rho + 1e-9)
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    return deduped
