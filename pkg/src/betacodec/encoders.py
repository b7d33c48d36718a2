"""Encoding recursions: ideal/leaky beta encoders and golden-ratio encoders.

All four encoders return an :class:`EncodeResult` with the bit sequence, the
full state trace u_0 .. u_{N+1}, and the base ``effective_gamma`` in which the
bits reconstruct the input:

* ``beta_encode``        x ~ sum_{j>=1} b_j beta^{-j}         (u_1 = beta*x)
* ``beta_encode_leaky``  x ~ sum_{i>=0} b_{i+1} gamma^i       (u_1 = x,
  gamma = 1/(lam*beta); the leak shifts the base, it does not destroy the
  expansion as long as lam*beta > 1)
* ``gre_encode``         x ~ sum_{n>=1} b_n phi^{-n}          (two delays, no
  multiplier; exploits phi^2 = phi + 1)
* ``gre_encode_leaky``   x ~ sum_{n>=1} b_n gamma^n with gamma the positive
  root of  l1*l2*g^2 + l1*g - 1 = 0.

The GRE bit rule is b_{n+1} = Q(u_n, u_{n+1}), i.e. the recursion is exactly
the iteration of the piecewise-affine map (v, l1*l2*u + l1*v - Q(u, v)) on
state pairs; the leak-free case l1 = l2 = 1 is the same code path.

Scalar encoders use the ideal sign quantizer (tie at 0 -> -1) when nu == 0
and the flaky form otherwise; the two-input form needs no special case since
its nu = 0 limit is already the ideal two-input quantizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, UnboundedStateError
from .quantizers import QuantizerSpec, q2_flaky, q_flaky, q_ideal

__all__ = [
    "PHI",
    "PHI_INV",
    "STATE_CEILING",
    "LeakParams",
    "EncodeResult",
    "beta_encode",
    "beta_encode_leaky",
    "gre_encode",
    "gre_encode_leaky",
    "effective_gamma",
    "leak_for_gamma",
]

PHI = (1.0 + math.sqrt(5.0)) / 2.0
PHI_INV = PHI - 1.0

# Far above any certified invariant rectangle (those have O(1) extent); a
# state beyond this ceiling means the quantizer parameters are uncertified.
STATE_CEILING = 100.0


@dataclass(frozen=True)
class LeakParams:
    """Per-timestep attenuation of the two GRE delay elements, in (0, 1]."""

    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name, lam in (("lambda1", self.lambda1), ("lambda2", self.lambda2)):
            if not (math.isfinite(lam) and 0.0 < lam <= 1.0):
                raise ParameterError(f"{name} must be in (0, 1], got {lam}")


@dataclass(frozen=True)
class EncodeResult:
    """Bits b_1..b_N, states u_0..u_{N+1}, and the reconstruction base.

    For GRE runs states[0] = 0 and states[1] = x. For leaky beta runs
    states[1] = x; for ideal beta runs states[1] = beta*x (the recursion's
    own initial condition) and states[0] is a 0.0 placeholder.
    """

    bits: np.ndarray
    states: np.ndarray
    effective_gamma: float

    @property
    def n_bits(self) -> int:
        return len(self.bits)


def _check_input(x: float) -> None:
    if not math.isfinite(x):
        raise ParameterError(f"input must be finite, got {x!r}")
    if abs(x) > 1.0:
        raise ParameterError(f"input must lie in [-1, 1], got {x}")


def _scalar_bit(u: float, q: QuantizerSpec, state) -> int:
    if q.nu == 0.0:
        return q_ideal(u)
    return q_flaky(u, q, state)


def _beta_run(u1: float, factor: float, n_bits: int, q: QuantizerSpec,
              gamma: float) -> EncodeResult:
    policy_state = q.new_policy_state()
    bits = np.empty(n_bits, dtype=np.int8)
    states = np.empty(n_bits + 2, dtype=np.float64)
    states[0] = 0.0
    u = u1
    states[1] = u
    for i in range(n_bits):
        b = _scalar_bit(u, q, policy_state)
        bits[i] = b
        u = factor * (u - b)
        states[i + 2] = u
    return EncodeResult(bits, states, gamma)


def beta_encode(x: float, beta: float, n_bits: int, q: QuantizerSpec) -> EncodeResult:
    """Beta-expansion of x in base beta in (1, 2]: u_1 = beta*x, then
    u_{j+1} = beta*(u_j - b_j) with b_j the quantized state.

    With dead-band tolerance nu <= eps and beta < (2+eps)/(eps+1) the partial
    sums satisfy |x - sum b_j beta^-j| <= (eps+1) beta^-N for every dead-band
    resolution (not enforced here; violating it costs the guarantee only).
    """
    _check_input(x)
    if not (math.isfinite(beta) and 1.0 < beta <= 2.0):
        raise ParameterError(f"beta must be in (1, 2], got {beta}")
    return _beta_run(beta * x, beta, n_bits, q, 1.0 / beta)


def beta_encode_leaky(x: float, beta: float, lam: float, n_bits: int,
                      q: QuantizerSpec) -> EncodeResult:
    """Beta encoder with a leaky delay: u_1 = x, u_{j+1} = lam*beta*(u_j - b_j).

    The bits expand x in the shifted base gamma = 1/(lam*beta), indexed from
    gamma^0: with bt = lam*beta and states bounded (ideal quantizer, or dead
    band within the scalar robustness condition),
    |x - sum_{i=0}^{N-1} b_{i+1} gamma^i| <= bt^-(N-1) / (bt - 1).
    """
    _check_input(x)
    if not (math.isfinite(beta) and 1.0 < beta <= 2.0):
        raise ParameterError(f"beta must be in (1, 2], got {beta}")
    if not (math.isfinite(lam) and 0.0 < lam <= 1.0):
        raise ParameterError(f"lam must be in (0, 1], got {lam}")
    if lam * beta <= 1.0:
        raise ParameterError(
            f"lam*beta must exceed 1 for the expansion to converge, got {lam * beta}"
        )
    return _beta_run(x, lam * beta, n_bits, q, 1.0 / (lam * beta))


def gre_encode_leaky(x: float, leak: LeakParams, n_bits: int, q: QuantizerSpec,
                     state_ceiling: float = STATE_CEILING) -> EncodeResult:
    """Golden-ratio encoder with leaky delays.

    u_0 = 0, u_1 = x, b_1 = Q(u_0, u_1), then
    u_{n+1} = l1*u_n + l1*l2*u_{n-1} - b_n and b_{n+1} = Q(u_n, u_{n+1}).

    Raises UnboundedStateError if any |u_n| exceeds ``state_ceiling``, which
    signals (alpha, nu) outside a certified boundedness range.
    """
    _check_input(x)
    l1, l2 = leak.lambda1, leak.lambda2
    l12 = l1 * l2
    policy_state = q.new_policy_state()
    bits = np.empty(n_bits, dtype=np.int8)
    states = np.empty(n_bits + 2, dtype=np.float64)
    u_prev = 0.0
    u_cur = x
    states[0] = u_prev
    states[1] = u_cur
    for i in range(n_bits):
        b = q2_flaky(u_prev, u_cur, q, policy_state)
        bits[i] = b
        u_next = l1 * u_cur + l12 * u_prev - b
        states[i + 2] = u_next
        if abs(u_next) > state_ceiling:
            raise UnboundedStateError(
                f"|u_{i + 2}| = {abs(u_next):.3g} exceeded ceiling {state_ceiling}; "
                f"quantizer parameters (alpha={q.alpha}, nu={q.nu}) look uncertified"
            )
        u_prev, u_cur = u_cur, u_next
    return EncodeResult(bits, states, effective_gamma(l1, l2))


def gre_encode(x: float, n_bits: int, q: QuantizerSpec,
               state_ceiling: float = STATE_CEILING) -> EncodeResult:
    """Ideal golden-ratio encoder (leak-free): bits expand x in base phi."""
    return gre_encode_leaky(x, LeakParams(1.0, 1.0), n_bits, q, state_ceiling)


def effective_gamma(lambda1: float, lambda2: float) -> float:
    """Positive root of l1*l2*g^2 + l1*g - 1 = 0: the base in which a leaky
    GRE bitstream is a valid expansion. Equals phi^-1 at (1, 1) and grows as
    the leaks shrink."""
    if not (lambda1 > 0.0 and lambda2 > 0.0):
        raise ParameterError("leak factors must be positive")
    return (-lambda1 + math.sqrt(lambda1 * lambda1 + 4.0 * lambda1 * lambda2)) / (
        2.0 * lambda1 * lambda2
    )


def leak_for_gamma(gamma: float) -> LeakParams:
    """Equal leak pair realizing a target base: lambda = phi^-1 / gamma.

    Only gamma >= phi^-1 is realizable with leaks in (0, 1].
    """
    if not math.isfinite(gamma) or gamma < PHI_INV - 1e-12:
        raise ParameterError(
            f"gamma must be >= phi^-1 ~= {PHI_INV:.6f}, got {gamma}"
        )
    lam = min(1.0, PHI_INV / gamma)
    return LeakParams(lam, lam)
