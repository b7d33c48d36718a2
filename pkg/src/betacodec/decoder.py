"""Reconstruction from bitstreams: partial sums in a (possibly approximate)
base, with the geometric-tail error bound.

The decoding convention throughout is x ~ sum_{j>=1} b_j gamma^j (positive
powers of gamma = 1/beta); an ideal-beta stream's sum b_j beta^-j is the same
thing. Leaky-beta streams index from gamma^0, so their reconstruction is
``partial_sum(bits, gamma, n) / gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = ["ReconstructionReport", "partial_sum", "error_bound", "decode_with_estimate"]


@dataclass(frozen=True)
class ReconstructionReport:
    estimate: float
    bits_used: int
    base_used: float
    bound: float


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and 0.0 < gamma < 1.0):
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma}")


def partial_sum(bits, gamma: float, n: int | None = None) -> float:
    """sum_{j=1}^{n} b_j gamma^j by Horner's rule."""
    _check_gamma(gamma)
    bits = np.asarray(bits)
    if n is None:
        n = len(bits)
    if n > len(bits):
        raise ParameterError(f"asked for {n} bits but only {len(bits)} available")
    acc = 0.0
    for j in range(n - 1, -1, -1):
        acc = gamma * (float(bits[j]) + acc)
    return acc


def error_bound(gamma: float, n: int) -> float:
    """Geometric tail bound gamma^(n+1) / (1 - gamma) on |x - partial_sum|,
    valid whenever the bits are a genuine base-gamma expansion of x."""
    _check_gamma(gamma)
    return gamma ** (n + 1) / (1.0 - gamma)


def decode_with_estimate(bits, gamma_tilde: float, n: int | None = None,
                         gamma_err: float | None = None) -> ReconstructionReport:
    """Reconstruct with an approximate base gamma_tilde.

    The reported bound is the tail bound at gamma_tilde plus a first-order
    perturbation term |d(partial_sum)/d(gamma)| * gamma_err, with gamma_err
    defaulting to gamma_tilde^n (an exponentially accurate base estimate).
    The true constant tying |x - estimate| to gamma^n exists but has no
    closed form, so this bound is monitored, not guaranteed; what is
    guaranteed is the gamma^n decay rate.
    """
    bits = np.asarray(bits)
    if n is None:
        n = len(bits)
    est = partial_sum(bits, gamma_tilde, n)
    j = np.arange(1, n + 1, dtype=np.float64)
    sensitivity = float(np.sum(j * gamma_tilde ** (j - 1.0)))
    eta = gamma_tilde ** n if gamma_err is None else gamma_err
    bound = error_bound(gamma_tilde, n) + eta * sensitivity
    return ReconstructionReport(est, n, gamma_tilde, bound)
