"""One-bit quantizer models.

Bits are plain ints in {-1, +1}; nothing else is ever produced. Three
quantizer forms are provided:

* ``q_ideal`` -- the sign function, -1 for u <= 0 and +1 for u > 0;
* ``q_flaky`` -- a sign function with a dead band: on [-nu, nu) the output is
  unspecified and a :class:`FlakyPolicy` resolves it (the boundary +nu is
  deterministically +1 so the three branches partition the line);
* ``q2_flaky`` -- the two-input amplified form used by golden-ratio encoders,
  which quantizes u + alpha*v. Its nu = 0 case is the ideal two-input
  quantizer, whose tie at 0 resolves to +1 (unlike the scalar ideal form).

Robustness claims downstream must hold for *every* dead-band resolution, so
the policy is a first-class parameter: adversarial constants, a toggle, or a
seeded generator. A :class:`PolicyState` carries the per-run mutable part and
must not be shared between concurrent encoders.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError

__all__ = [
    "PolicyKind",
    "FlakyPolicy",
    "PolicyState",
    "QuantizerSpec",
    "q_ideal",
    "q_flaky",
    "q2_flaky",
]


class PolicyKind(Enum):
    ALWAYS_MINUS = "always-minus"
    ALWAYS_PLUS = "always-plus"
    TOGGLE = "toggle"
    SEEDED_RANDOM = "seeded-random"


@dataclass(frozen=True)
class FlakyPolicy:
    """How a flaky quantizer resolves inputs inside its dead band.

    The decision sequence is a pure function of (kind, seed): two runs with
    identical inputs and seed produce identical bits.
    """

    kind: PolicyKind
    seed: int = 0

    def new_state(self) -> "PolicyState":
        return PolicyState(self)


class PolicyState:
    """Mutable decision stream for a single encoder run (single-owner).

    Toggle alternates -1, +1, -1, ... per dead-band event. Seeded-random
    draws one bit per event from ``random.Random(seed)``.
    """

    def __init__(self, policy: FlakyPolicy):
        self.policy = policy
        self._last = 1  # toggle starts at -1
        self._rng = (
            random.Random(policy.seed)
            if policy.kind is PolicyKind.SEEDED_RANDOM
            else None
        )

    def decide(self) -> int:
        kind = self.policy.kind
        if kind is PolicyKind.ALWAYS_MINUS:
            return -1
        if kind is PolicyKind.ALWAYS_PLUS:
            return 1
        if kind is PolicyKind.TOGGLE:
            self._last = -self._last
            return self._last
        return 1 if self._rng.getrandbits(1) else -1


@dataclass(frozen=True)
class QuantizerSpec:
    """Dead-band half-width nu, two-input amplifier alpha, and the policy.

    ``alpha`` is ignored by the scalar forms.
    """

    nu: float = 0.0
    alpha: float = 2.0
    policy: FlakyPolicy = FlakyPolicy(PolicyKind.ALWAYS_PLUS)

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu >= 0.0):
            raise ParameterError(f"nu must be finite and >= 0, got {self.nu}")
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ParameterError(f"alpha must be finite and > 0, got {self.alpha}")

    def new_policy_state(self) -> PolicyState:
        return self.policy.new_state()


def _require_finite(u: float) -> None:
    if not math.isfinite(u):
        raise ValueError(f"quantizer input must be finite, got {u!r}")


def q_ideal(u: float) -> int:
    """Sign quantizer: -1 for u <= 0, +1 for u > 0."""
    _require_finite(u)
    return -1 if u <= 0.0 else 1


def q_flaky(u: float, spec: QuantizerSpec, policy_state: PolicyState) -> int:
    """Flaky sign quantizer: +1 for u >= nu, -1 for u < -nu, policy on [-nu, nu)."""
    _require_finite(u)
    if u >= spec.nu:
        return 1
    if u < -spec.nu:
        return -1
    return policy_state.decide()


def q2_flaky(u: float, v: float, spec: QuantizerSpec, policy_state: PolicyState) -> int:
    """Two-input flaky quantizer: q_flaky applied to u + alpha*v.

    With nu = 0 this is the ideal two-input quantizer (tie at 0 gives +1).
    """
    _require_finite(u)
    _require_finite(v)
    return q_flaky(u + spec.alpha * v, spec, policy_state)
