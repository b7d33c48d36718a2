"""Invariant-rectangle geometry for the leaky golden-ratio encoder.

One encoding step is the piecewise-affine map

    T(u, v) = (v, l1*l2*u + l1*v - Q(u, v)),

i.e. the linear part A = [[0, 1], [l1*l2, l1]] plus a bit-dependent vertical
shift of -+1. A has eigenvalues e1 > 1 (expanding) and -e2 with 0 < e2 < 1
(contracting, orientation-reversing); in the frame of its unit eigenvectors
Phi1 = (1, e1)/s1 and Phi2 = (-1, e2)/s2 each branch acts diagonally plus a
constant shift (a, -+b) with a = s1/(e1+e2), b = s2/(e1+e2).

The certified region is a frame-aligned box R = [-(h-d), h-d] x [-r, r]
(a parallelogram in standard coordinates). Its construction is tight: the
preimage box of the +1 branch is right/top-aligned with R, the -1 branch
mirrored, their overlap is H = [-d, d] x [-r, r], and both branches map
their preimage boxes exactly onto R deflated by mu along the frame axes.
Consequently T(R) plus any per-step disturbance of frame size mu stays in R,
provided the quantizer's dead-band strip F = {|u + alpha*v| < nu} meets R
only inside H (where either bit keeps the orbit in R). ``check_invariance``
verifies the vertex mapping identities, the strip condition, and runs
perturbed orbits.

The closed forms for h, d, l, r contain 1/(1-e1) factors with e1 > 1; they
are evaluated verbatim (the negative terms encode that growing mu shrinks
the overlap) and are cross-checked in the test suite against the tightness
equations solved directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import LineString, Point, Polygon

from .encoders import PHI, PHI_INV, LeakParams
from .errors import ParameterError
from .quantizers import PolicyKind, QuantizerSpec, q2_flaky

__all__ = [
    "DELTA_TOL_MAX",
    "Eigensystem",
    "InvariantRectangle",
    "InvarianceCheck",
    "InvarianceReport",
    "eigensystem",
    "rectangle_params",
    "mu_max",
    "input_cover_bound",
    "input_cover_uniform_bound",
    "alpha_bounds",
    "alpha_bounds_worst_case",
    "uniform_alpha_range",
    "map_T",
    "check_invariance",
    "simulate_orbits",
]

# Tolerance endpoint where the uniform amplifier interval collapses.
DELTA_TOL_MAX = 0.5037

_GEOM_TOL = 1e-9
_AREA_TOL = 1e-10

_POLICY_CODES = {
    PolicyKind.ALWAYS_MINUS: 0,
    PolicyKind.ALWAYS_PLUS: 1,
    PolicyKind.TOGGLE: 2,
    PolicyKind.SEEDED_RANDOM: 3,
}


@dataclass(frozen=True)
class Eigensystem:
    """Eigen-data of the delay matrix [[0, 1], [l1*l2, l1]]."""

    eps1: float
    eps2: float
    s1: float
    s2: float

    def basis(self) -> np.ndarray:
        """Columns are the unit eigenvectors Phi1, Phi2."""
        return np.array(
            [[1.0 / self.s1, -1.0 / self.s2],
             [self.eps1 / self.s1, self.eps2 / self.s2]]
        )

    def frame_sin(self) -> float:
        """Sine of the angle between the eigenvectors (= |det basis|); 1 at
        the leak-free point, where the frame is orthonormal."""
        return float(abs(np.linalg.det(self.basis())))

    def shift(self) -> tuple[float, float]:
        """Frame coordinates (a, b) of the unit vertical translation."""
        denom = self.eps1 + self.eps2
        return self.s1 / denom, self.s2 / denom


def eigensystem(leak: LeakParams) -> Eigensystem:
    l1, l2 = leak.lambda1, leak.lambda2
    disc = math.sqrt(l1 * l1 + 4.0 * l1 * l2)
    eps1 = (l1 + disc) / 2.0
    eps2 = (-l1 + disc) / 2.0
    return Eigensystem(
        eps1=eps1,
        eps2=eps2,
        s1=math.sqrt(1.0 + eps1 * eps1),
        s2=math.sqrt(1.0 + eps2 * eps2),
    )


@dataclass(frozen=True)
class InvariantRectangle:
    """Certified region R with its construction lengths.

    h is the frame width of each one-bit preimage box, d the half-width of
    their overlap, l the preimage boxes' far-side frame height, r the half
    height of R. R's own half width is h - d.
    """

    h: float
    d: float
    l: float
    r: float
    mu: float
    leak: LeakParams
    eigs: Eigensystem
    vertices: np.ndarray = field(repr=False)

    @property
    def half_width(self) -> float:
        return self.h - self.d

    def frame_box(self, name: str) -> tuple[float, float, float, float]:
        """(p_lo, p_hi, q_lo, q_hi) along (Phi1, Phi2) for a named region:
        'R', the branch preimages 'A1'/'A2', their overlap 'H', and 'core'
        (the common image of both branches, R deflated by mu)."""
        w = self.half_width
        boxes = {
            "R": (-w, w, -self.r, self.r),
            "A1": (-self.d, w, -self.l, self.r),
            "A2": (-w, self.d, -self.r, self.l),
            "H": (-self.d, self.d, -self.r, self.r),
            "core": (-(w - self.mu), w - self.mu,
                     -(self.r - self.mu), self.r - self.mu),
        }
        return boxes[name]

    def to_standard(self, pq: np.ndarray) -> np.ndarray:
        return np.asarray(pq, dtype=float) @ self.eigs.basis().T

    def to_frame(self, xy: np.ndarray) -> np.ndarray:
        return np.asarray(xy, dtype=float) @ np.linalg.inv(self.eigs.basis()).T

    def polygon(self, name: str) -> np.ndarray:
        p_lo, p_hi, q_lo, q_hi = self.frame_box(name)
        corners = np.array(
            [[p_lo, q_lo], [p_hi, q_lo], [p_hi, q_hi], [p_lo, q_hi]]
        )
        return self.to_standard(corners)


def rectangle_params(leak: LeakParams, mu: float) -> InvariantRectangle:
    """Construction lengths h, d, l, r and the vertices of R for a leak pair
    and disturbance radius mu. Raises when mu kills the overlap (d <= 0)."""
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ParameterError(f"mu must be finite and >= 0, got {mu}")
    eigs = eigensystem(leak)
    e1, e2, s1, s2 = eigs.eps1, eigs.eps2, eigs.s1, eigs.s2
    h = 2.0 * mu / (1.0 - e1) + 2.0 * s1 / (e1 * (e1 - 1.0) * (e1 + e2))
    d = mu / (1.0 - e1) + s1 * (2.0 - e1) / (e1 * (e1 - 1.0) * (e1 + e2))
    l = mu / (1.0 - e2) + s2 * (2.0 - e2) / (e2 * (1.0 - e2) * (e1 + e2))
    r = mu / (1.0 - e2) + s2 / ((1.0 - e2) * (e1 + e2))
    if d <= 0.0:
        raise ParameterError(
            f"mu = {mu} at or above mu_max = {mu_max(leak):.6f}: branch overlap vanishes"
        )
    w = h - d
    basis = eigs.basis()
    corners = np.array([[-w, -r], [w, -r], [w, r], [-w, r]])
    vertices = corners @ basis.T
    return InvariantRectangle(h=h, d=d, l=l, r=r, mu=mu, leak=leak,
                              eigs=eigs, vertices=vertices)


def mu_max(leak: LeakParams) -> float:
    """Largest disturbance radius with a nonempty branch overlap:
    s1 (2 - e1) / (e1 (e1 + e2)); ~0.2008 at the leak-free point, where it
    is smallest over [.9, 1]^2."""
    eigs = eigensystem(leak)
    return eigs.s1 * (2.0 - eigs.eps1) / (eigs.eps1 * (eigs.eps1 + eigs.eps2))


def input_cover_bound(leak: LeakParams) -> float:
    """Largest mu for which the input segment {0} x [-1, 1] fits in R:
    s1 (2 - e1) / (e1 + e2). Equals e1 * mu_max, so every admissible mu
    automatically satisfies it."""
    eigs = eigensystem(leak)
    return eigs.s1 * (2.0 - eigs.eps1) / (eigs.eps1 + eigs.eps2)


def input_cover_uniform_bound() -> float:
    """Factor-wise lower bound of the cover bound over leaks in [.9, 1]^2,
    ~0.301: each factor minimized separately (s1 at e1 = .9 phi, 2 - e1 at
    e1 = phi, the denominator at e1 + e2 = sqrt 5). The pointwise minimum
    over the square is larger (~0.325, at the leak-free corner)."""
    e1_lo = 0.9 * PHI
    return math.sqrt(1.0 + e1_lo * e1_lo) * (2.0 - PHI) / math.sqrt(5.0)


def _upper_bound_fn(x: float, y: float, delta: float) -> float:
    return (2.0 + x * y - 2.0 * y - delta * x * y * (x - 1.0) * (1.0 - y + x)) / (
        x * (y - 2.0)
    )


def _lower_bound_num(x: float, y: float, delta: float) -> float:
    return (
        x * (x - 1.0)
        - (2.0 - x) * (1.0 - y)
        + delta * x * (x - 1.0) * (x + y) * (1.0 - y)
    )


def _lower_bound_den(x: float, y: float) -> float:
    return x * ((2.0 - x) * (1.0 - y) + y * (x - 1.0))


def alpha_bounds(leak: LeakParams, delta_tol: float) -> tuple[float, float]:
    """Admissible amplifier interval [L, U] for one leak pair at dead-band
    tolerance delta_tol: the dead-band anchor (delta, 0) must see the
    overlap region H on both sides, giving slope constraints through the
    overlap corners. L is evaluated at (e1, e2), U at (e1, e1 + e2)."""
    if not (math.isfinite(delta_tol) and delta_tol >= 0.0):
        raise ParameterError(f"delta_tol must be finite and >= 0, got {delta_tol}")
    eigs = eigensystem(leak)
    e1, e2 = eigs.eps1, eigs.eps2
    lo = _lower_bound_num(e1, e2, delta_tol) / _lower_bound_den(e1, e2)
    hi = _upper_bound_fn(e1, e1 + e2, delta_tol)
    if lo > hi:
        raise ParameterError(
            f"tolerance {delta_tol} inadmissible for leak {leak}: L = {lo:.4f} "
            f"> U = {hi:.4f}"
        )
    return lo, hi


def alpha_bounds_worst_case(delta_tol: float) -> tuple[float, float]:
    """Corner evaluation of the amplifier bounds uniformly over leaks in
    [.9, 1]^2: the lower bound's numerator peaks at e1 = phi, e2 = phi^-1
    while its denominator bottoms at e1 = .9 phi; the upper bound bottoms at
    (e1, e1 + e2) = (.9 phi, sqrt 5). Numerically ~1.198 (1 + delta) and
    ~2.281 - 0.952 delta."""
    e1_lo = 0.9 * PHI
    lo = _lower_bound_num(PHI, PHI_INV, delta_tol) / _lower_bound_den(e1_lo, PHI_INV)
    hi = _upper_bound_fn(e1_lo, PHI + PHI_INV, delta_tol)
    return lo, hi


def uniform_alpha_range(delta_tol: float) -> tuple[float, float]:
    """Amplifier interval certified for every leak pair in [.9, 1]^2 at
    dead-band tolerance delta_tol: (1.198 (1 + d), 2.281 - 0.952 d). The
    interval collapses at d ~ 0.5037, beyond which no uniform choice exists.
    """
    if not (0.0 <= delta_tol <= DELTA_TOL_MAX + 1e-12):
        raise ParameterError(
            f"delta_tol must lie in [0, {DELTA_TOL_MAX}], got {delta_tol}"
        )
    return 1.198 * (1.0 + delta_tol), 2.281 - 0.952 * delta_tol


def map_T(state: tuple[float, float], leak: LeakParams, q: QuantizerSpec,
          policy_state) -> tuple[float, float]:
    """One step of the encoding dynamical system on a state pair."""
    u, v = state
    b = q2_flaky(u, v, q, policy_state)
    return v, leak.lambda1 * leak.lambda2 * u + leak.lambda1 * v - float(b)


# ---------------------------------------------------------------------------
# vectorized orbit engine (shared by check_invariance and the CLI sweep)
# ---------------------------------------------------------------------------

def simulate_orbits(lambda1, lambda2, alpha, nu, policy_codes, x0, n_steps: int,
                    seed: int, mu: float = 0.0,
                    frame: tuple[np.ndarray, float, float] | None = None,
                    ) -> tuple[np.ndarray, np.ndarray | None]:
    """Run many encoder orbits (u, v) <- (v, l1*l2*u + l1*v - b) in lockstep.

    All per-orbit parameters broadcast together. Policy codes: 0 always -1,
    1 always +1, 2 toggle (per dead-band event, starting -1), 3 seeded
    random. The random policy here draws one seeded sign per step per orbit
    (consumed only inside the dead band), a distributionally equivalent
    stand-in for the scalar per-event stream. ``mu`` is a per-step
    disturbance radius (Euclidean, applied to the new state pair).

    Returns (max |u_n| per orbit, max frame-box excess per orbit or None);
    ``frame`` is (inverse basis, p half width, q half height).
    """
    l1, l2, alpha, nu, pol, x0 = np.broadcast_arrays(
        np.asarray(lambda1, dtype=float), np.asarray(lambda2, dtype=float),
        np.asarray(alpha, dtype=float), np.asarray(nu, dtype=float),
        np.asarray(policy_codes, dtype=np.int8), np.asarray(x0, dtype=float),
    )
    m = l1.shape[0] if l1.ndim else 1
    l12 = (l1 * l2).ravel()
    l1 = np.ravel(l1).astype(float)
    alpha = np.ravel(alpha)
    nu = np.ravel(nu)
    pol = np.ravel(pol)
    u = np.zeros(m)
    v = np.ravel(x0).astype(float).copy()
    toggle_last = np.ones(m)
    rng = np.random.default_rng(seed)
    use_random = bool(np.any(pol == 3))
    max_abs = np.abs(v).copy()
    excess = None
    if frame is not None:
        binv, p_half, q_half = frame
        excess = np.full(m, -np.inf)

    for _ in range(n_steps):
        inp = u + alpha * v
        b = np.where(inp >= nu, 1.0, -1.0)
        flaky = (inp < nu) & (inp >= -nu)
        if use_random:
            draws = rng.random(m)
        if flaky.any():
            sel = flaky & (pol == 1)
            b[sel] = 1.0
            sel = flaky & (pol == 2)
            b[sel] = -toggle_last[sel]
            toggle_last[sel] = b[sel]
            if use_random:
                sel = flaky & (pol == 3)
                b[sel] = np.where(draws[sel] < 0.5, -1.0, 1.0)
        u, v = v, l12 * u + l1 * v - b
        if mu > 0.0:
            radius = mu * np.sqrt(rng.random(m))
            angle = (2.0 * math.pi) * rng.random(m)
            u = u + radius * np.cos(angle)
            v = v + radius * np.sin(angle)
        np.maximum(max_abs, np.abs(u), out=max_abs)
        np.maximum(max_abs, np.abs(v), out=max_abs)
        if frame is not None:
            p = binv[0, 0] * u + binv[0, 1] * v
            qq = binv[1, 0] * u + binv[1, 1] * v
            step_excess = np.maximum(np.abs(p) - p_half, np.abs(qq) - q_half)
            np.maximum(excess, step_excess, out=excess)
    return max_abs, excess


# ---------------------------------------------------------------------------
# invariance verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvarianceCheck:
    name: str
    passed: bool
    detail: str = ""
    witness: tuple[float, float] | None = None


@dataclass(frozen=True)
class InvarianceReport:
    leak: LeakParams
    mu: float
    alpha: float
    nu: float
    checks: tuple[InvarianceCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[InvarianceCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _halfplane_quad(c: float, alpha: float, sign: int, extent: float) -> Polygon:
    """Quad covering {u + alpha*v >= c} (sign=+1) or {<= c} (sign=-1)."""
    s = math.hypot(1.0, alpha)
    normal = np.array([1.0, alpha]) / s
    tangent = np.array([-alpha, 1.0]) / s
    base = (c / s) * normal  # the point where u + alpha*v = c meets the normal
    pts = [
        base - extent * tangent,
        base + extent * tangent,
        base + extent * tangent + sign * extent * normal,
        base - extent * tangent + sign * extent * normal,
    ]
    return Polygon(pts)


def _strip_quad(nu: float, alpha: float, extent: float) -> Polygon:
    s = math.hypot(1.0, alpha)
    normal = np.array([1.0, alpha]) / s
    tangent = np.array([-alpha, 1.0]) / s
    lo = (-nu / s) * normal
    hi = (nu / s) * normal
    return Polygon([
        lo - extent * tangent, lo + extent * tangent,
        hi + extent * tangent, hi - extent * tangent,
    ])


def check_invariance(leak: LeakParams, mu: float, q: QuantizerSpec,
                     orbit_steps: int = 10_000, orbit_starts: int = 100,
                     seed: int = 0) -> InvarianceReport:
    """Verify that R(leak, mu) certifies the quantizer (q.alpha, q.nu).

    Geometric checks: both branch maps send the overlap-extended halves of R
    onto R deflated by mu along the frame axes (vertex identities, exact up
    to 1e-9); R is covered by the two branch preimage boxes; the dead-band
    strip meets R only inside the overlap, with each certain-sign part of R
    on the correct side of the strip; the input segment {0} x [-1, 1] lies
    in R. Empirical check: perturbed orbits started across the input segment
    under all four built-in policies stay inside R for ``orbit_steps`` steps.

    Disturbances are injected with Euclidean radius mu * sin(frame angle),
    which is exactly the radius the frame-aligned construction absorbs (and
    equals mu at the leak-free point).
    """
    rect = rectangle_params(leak, mu)
    eigs = rect.eigs
    e1, e2 = eigs.eps1, eigs.eps2
    a, b = eigs.shift()
    w, r = rect.half_width, rect.r
    checks: list[InvarianceCheck] = []

    # Branch maps in frame coordinates; bit +1 shifts by (-a, -b), bit -1 by
    # (+a, +b); the contracting axis flips sign each step.
    def t1(p, qq):
        return e1 * p - a, -e2 * qq - b

    def t2(p, qq):
        return e1 * p + a, -e2 * qq + b

    core = rect.frame_box("core")
    for name, tmap, box in (("vertex_images_plus", t1, rect.frame_box("A1")),
                            ("vertex_images_minus", t2, rect.frame_box("A2"))):
        p_lo, p_hi, q_lo, q_hi = box
        q_lo_r, q_hi_r = max(q_lo, -r), min(q_hi, r)  # clip to R
        worst = -np.inf
        witness = None
        for p in (p_lo, p_hi):
            for qq in (q_lo_r, q_hi_r):
                ip, iq = tmap(p, qq)
                over = max(core[0] - ip, ip - core[1], core[2] - iq, iq - core[3])
                if over > worst:
                    worst = over
                    witness = tuple(rect.to_standard(np.array([ip, iq])))
        checks.append(InvarianceCheck(
            name, worst <= _GEOM_TOL,
            detail=f"max overshoot into the mu margin {worst:.3e}",
            witness=witness if worst > _GEOM_TOL else None,
        ))

    # Strip and orientation conditions, in standard coordinates.
    r_poly = Polygon(rect.polygon("R"))
    a1_poly = Polygon(rect.polygon("A1"))
    a2_poly = Polygon(rect.polygon("A2"))
    h_poly = Polygon(rect.polygon("H"))
    extent = 10.0 * (float(np.abs(rect.vertices).max()) + 1.0)
    alpha = q.alpha
    nu = q.nu

    uncovered = r_poly.difference(a1_poly.union(a2_poly).buffer(_GEOM_TOL))
    checks.append(_region_check("branch_preimages_cover", uncovered))

    if nu > 0.0:
        f_in_r = _strip_quad(nu, alpha, extent).intersection(r_poly)
        stray = f_in_r.difference(h_poly.buffer(_GEOM_TOL))
        checks.append(_region_check("strip_inside_overlap", stray))
    else:
        checks.append(InvarianceCheck("strip_inside_overlap", True,
                                      detail="dead band is empty"))

    plus_bad = r_poly.difference(a1_poly.buffer(_GEOM_TOL)).difference(
        _halfplane_quad(-nu + _GEOM_TOL, alpha, -1, extent)
    )
    checks.append(_region_check("minus_certain_region", plus_bad))
    minus_bad = r_poly.difference(a2_poly.buffer(_GEOM_TOL)).difference(
        _halfplane_quad(nu - _GEOM_TOL, alpha, +1, extent)
    )
    checks.append(_region_check("plus_certain_region", minus_bad))

    segment = LineString([(0.0, -1.0), (0.0, 1.0)])
    seg_ok = r_poly.buffer(_GEOM_TOL).covers(segment)
    checks.append(InvarianceCheck(
        "input_segment", seg_ok,
        detail="" if seg_ok else "input segment leaves R",
        witness=None if seg_ok else (0.0, 1.0),
    ))

    if all(c.passed for c in checks):
        binv = np.linalg.inv(eigs.basis())
        mu_eff = mu * eigs.frame_sin()
        starts = np.linspace(-1.0, 1.0, orbit_starts)
        codes = np.repeat(np.arange(4, dtype=np.int8), orbit_starts)
        x0 = np.tile(starts, 4)
        max_abs, excess = simulate_orbits(
            leak.lambda1, leak.lambda2, alpha, nu, codes, x0,
            n_steps=orbit_steps, seed=seed, mu=mu_eff,
            frame=(binv, w, r),
        )
        worst = float(excess.max())
        idx = int(excess.argmax())
        checks.append(InvarianceCheck(
            "perturbed_orbits", worst <= _GEOM_TOL,
            detail=(f"{len(x0)} orbits x {orbit_steps} steps, worst frame "
                    f"excess {worst:.3e}, max |u| {float(max_abs.max()):.3f}"),
            witness=None if worst <= _GEOM_TOL else
            (float(starts[idx % orbit_starts]), float(codes[idx])),
        ))
    else:
        checks.append(InvarianceCheck(
            "perturbed_orbits", False,
            detail="skipped: geometric checks already failed"))

    return InvarianceReport(leak=leak, mu=mu, alpha=alpha, nu=nu,
                            checks=tuple(checks))


def _region_check(name: str, offending) -> InvarianceCheck:
    area = offending.area
    if area <= _AREA_TOL:
        return InvarianceCheck(name, True, detail="")
    pt: Point = offending.representative_point()
    return InvarianceCheck(name, False,
                           detail=f"offending area {area:.3e}",
                           witness=(pt.x, pt.y))
