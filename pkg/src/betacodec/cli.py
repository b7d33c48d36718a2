"""Config-driven command line: encode/decode/recover single cases, run the
experiments, verify parameter ranges, and emit CSV/JSON outputs.

Determinism contract: a (config, seed) pair produces byte-identical output
files. Per-trial randomness derives from numpy SeedSequence entropy
[seed, bit_length, trial, attempt], so results do not depend on execution
order; floats serialize with 17 significant digits.

Exit codes: 0 success, 2 malformed config/usage, 3 numerical failure
(no root, no signal, unbounded state, structural violation).

Bitstream files are one '+'/'-' character per bit, one stream per line; an
encode writes `<out>.bits` plus a `<out>.meta.json` sidecar that records the
commanded quantizer parameters but deliberately not the expansion base --
the base is the unknown the recovery subcommand estimates from streams.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decoder import decode_with_estimate, partial_sum
from .encoders import (
    PHI_INV,
    LeakParams,
    beta_encode,
    beta_encode_leaky,
    effective_gamma,
    gre_encode,
    gre_encode_leaky,
    leak_for_gamma,
)
from .errors import (
    ConfigError,
    NoRootError,
    NoSignalError,
    ParameterError,
    StructureViolationError,
    UnboundedStateError,
)
from .invariant_geometry import (
    alpha_bounds,
    input_cover_bound,
    mu_max,
    simulate_orbits,
    uniform_alpha_range,
)
from .quantizers import FlakyPolicy, PolicyKind, QuantizerSpec
from .recovery import (
    RESIDUAL_TOL_FLOOR,
    ROOT_WINDOW_HIGH,
    NEWTON_MARGIN,
    TernaryPolynomial,
    TransversalityContext,
    _values_on_grid,
    first_root,
    recover_gamma_from_pair,
    recover_gamma_from_zero,
    transversality_oracle,
)
from .zero_structure import (
    check_period3,
    derivative_bound_at_root,
    factor_zero_poly,
    rn_magnitude_bound,
)

__all__ = [
    "ExperimentConfig",
    "load_config",
    "run_decay_recovery",
    "run_poly_family",
    "run_boundedness_sweep",
    "run_zero_structure",
    "run_transversality_scan",
    "run_experiment",
    "read_bitstream",
    "write_bitstream",
    "main",
]

_POLICY_BY_NAME = {k.value: k for k in PolicyKind}
_BOUND_LIMIT = 5.0     # |u_n| threshold the boundedness sweep certifies
_K_PROBE = 64          # extra bits encoded to locate the difference shift k

_EXPERIMENT_KINDS = (
    "decay-recovery",
    "poly-family",
    "boundedness-sweep",
    "zero-structure",
    "transversality-scan",
)


@dataclass
class ExperimentConfig:
    kind: str
    trials: int = 100
    bit_lengths: tuple[int, ...] = (8, 16, 24, 32, 40)
    gamma_range: tuple[float, float] = (0.618, 0.65)
    alpha_range: tuple[float, float] = (1.7, 2.0)
    nu: float = 0.3
    policy: str = "seeded-random"
    seed: int = 0
    output_path: str | None = None
    # kind-specific knobs
    gamma: float | None = None            # poly-family: fixed base
    curve_points: int = 500
    max_degree: int = 12                  # transversality-scan
    rho: float = ROOT_WINDOW_HIGH
    leak_grid: int = 11                   # boundedness-sweep
    alpha_grid: int = 9
    epsilon: float | None = None
    orbit_steps: int = 10_000
    inputs: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    n_streams: int = 10                   # zero-structure
    stream_bits: int = 300
    max_redraws: int = 10

    def validate(self) -> None:
        if self.kind not in _EXPERIMENT_KINDS:
            raise ConfigError(
                f"config: kind must be one of {_EXPERIMENT_KINDS}, got {self.kind!r}"
            )
        if self.trials < 1:
            raise ConfigError("config: trials must be >= 1")
        if len(self.bit_lengths) == 0 or any(n < 0 for n in self.bit_lengths):
            raise ConfigError("config: bit_lengths must be non-empty, entries >= 0")
        for name, rng in (("gamma_range", self.gamma_range),
                          ("alpha_range", self.alpha_range)):
            if len(rng) != 2 or not (rng[0] <= rng[1]):
                raise ConfigError(f"config: {name} must be an ordered [low, high]")
        if self.policy not in _POLICY_BY_NAME:
            raise ConfigError(
                f"config: policy must be one of {sorted(_POLICY_BY_NAME)}, "
                f"got {self.policy!r}"
            )
        if self.nu < 0:
            raise ConfigError("config: nu must be >= 0")


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse a JSON experiment config; unknown keys are rejected."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(raw) - fields
    if unknown:
        raise ConfigError(f"config {path}: unknown keys {sorted(unknown)}")
    if "kind" not in raw:
        raise ConfigError(f"config {path}: missing required key 'kind'")
    for key in ("bit_lengths", "gamma_range", "alpha_range", "inputs"):
        if key in raw:
            raw[key] = tuple(raw[key])
    try:
        cfg = ExperimentConfig(**raw)
    except TypeError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# bitstream files
# ---------------------------------------------------------------------------

def write_bitstream(path: str | Path, bits) -> None:
    line = "".join("+" if int(b) > 0 else "-" for b in bits)
    Path(path).write_text(line + "\n")


def read_bitstream(path: str | Path) -> np.ndarray:
    line = Path(path).read_text().strip().splitlines()
    if not line:
        raise ConfigError(f"{path}: empty bitstream file")
    chars = line[0].strip()
    if any(ch not in "+-" for ch in chars):
        raise ConfigError(f"{path}: bitstream lines must contain only '+'/'-'")
    return np.array([1 if ch == "+" else -1 for ch in chars], dtype=np.int8)


# ---------------------------------------------------------------------------
# deterministic seeding helpers
# ---------------------------------------------------------------------------

def _spawn(*entropy: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence([int(e) for e in entropy]).spawn(n)


def _seed_int(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, np.uint64)[0])


def _policy_for(cfg_policy: str, seq: np.random.SeedSequence) -> FlakyPolicy:
    kind = _POLICY_BY_NAME[cfg_policy]
    return FlakyPolicy(kind, _seed_int(seq))


# ---------------------------------------------------------------------------
# decay-recovery experiment
# ---------------------------------------------------------------------------

def _best_effort_root(poly: TernaryPolynomial, hi: float) -> float:
    """|P| grid-argmin over [0.55, hi]: keeps worst-case error columns
    defined when the truncation has no admissible root (short streams)."""
    grid = np.arange(0.55, hi + 1e-3, 1e-3)
    vals = np.abs(_values_on_grid(poly.coeffs, grid))
    coarse = float(grid[int(np.argmin(vals))])
    fine = np.arange(coarse - 1e-3, coarse + 1e-3, 1e-6)
    vals = np.abs(_values_on_grid(poly.coeffs, fine))
    return float(fine[int(np.argmin(vals))])


def _decay_trial(cfg: ExperimentConfig, ctx: TransversalityContext,
                 n_bits: int, trial: int,
                 search_high: float | None) -> dict | None:
    """One calibrate-then-decode trial; None when all redraws ran out of
    difference signal."""
    gamma_low = ctx.gamma_low if ctx.gamma_low is not None else PHI_INV
    for attempt in range(cfg.max_redraws + 1):
        rng_seq, pol_seq, fresh_seq = _spawn(cfg.seed, n_bits, trial, attempt, n=3)
        rng = np.random.default_rng(rng_seq)
        x = float(rng.uniform(-1.0, 1.0))
        gamma = float(rng.uniform(*cfg.gamma_range))
        alpha = float(rng.uniform(*cfg.alpha_range))
        leak = leak_for_gamma(gamma)
        # One shared policy seed per pair: both streams see the same decision
        # sequence, so the first dead-band event already desynchronizes the
        # pair and the difference shift k stays small.
        policy = _policy_for(cfg.policy, pol_seq)
        q = QuantizerSpec(nu=cfg.nu, alpha=alpha, policy=policy)
        length = n_bits + 1 + _K_PROBE
        b = gre_encode_leaky(x, leak, length, q).bits
        c = gre_encode_leaky(-x, leak, length, q).bits
        nonzero = np.nonzero(b.astype(np.int16) + c)[0]
        if len(nonzero) == 0 or int(nonzero[0]) > _K_PROBE:
            continue
        k = int(nonzero[0])
        coeffs = ((b[k:k + n_bits + 1].astype(np.int16)
                   + c[k:k + n_bits + 1]) // 2).astype(np.int8)
        poly = TernaryPolynomial(coeffs)
        tol = max(gamma_low ** poly.degree, RESIDUAL_TOL_FLOOR)
        fallback = False
        try:
            root = first_root(poly, ctx, tol, search_high=search_high)
        except NoRootError:
            hi = (ROOT_WINDOW_HIGH if search_high is None else search_high)
            root = _best_effort_root(poly, hi + NEWTON_MARGIN)
            fallback = True
        x_cal = partial_sum(b, root, n_bits) if n_bits else 0.0
        x2 = float(rng.uniform(-1.0, 1.0))
        q_fresh = QuantizerSpec(nu=cfg.nu, alpha=alpha,
                                policy=_policy_for(cfg.policy, fresh_seq))
        fresh_bits = gre_encode_leaky(x2, leak, max(n_bits, 1), q_fresh).bits
        x_fresh = partial_sum(fresh_bits, root, n_bits) if n_bits else 0.0
        return {
            "n_bits": n_bits,
            "trial": trial,
            "x": x,
            "gamma": gamma,
            "alpha": alpha,
            "shift_k": k,
            "degree": poly.degree,
            "gamma_estimate": root,
            "gamma_error": abs(gamma - root),
            "x_error_calibration": abs(x - x_cal),
            "x_error_fresh": abs(x2 - x_fresh),
            "newton_fallback": fallback,
            "attempts": attempt + 1,
        }
    return None


def run_decay_recovery(cfg: ExperimentConfig):
    """Worst-case base/sample recovery error versus bit budget.

    Per bit length N: ``trials`` trials each draw x, a base gamma (realized
    through an equal leak pair), and an amplifier alpha; encode (x, -x) with
    N+k+1 bits so the difference polynomial has degree exactly N; recover
    the base from its first root; decode the calibration sample and a fresh
    sample with the recovered base. Pairs whose difference stream stays zero
    are redrawn (up to max_redraws) and then counted in the failures column.

    Returns (summary_rows, trial_rows).
    """
    lo = min(cfg.gamma_range[0], 0.63)
    ctx = TransversalityContext.for_gamma_high(0.63, gamma_low=max(lo, 0.5))
    search_high = None
    if cfg.gamma_range[1] > ROOT_WINDOW_HIGH:
        search_high = cfg.gamma_range[1] + 0.05
    summary = []
    details = []
    for n_bits in cfg.bit_lengths:
        worst_g = 0.0
        worst_cal = 0.0
        worst_fresh = 0.0
        failures = 0
        for trial in range(cfg.trials):
            row = _decay_trial(cfg, ctx, n_bits, trial, search_high)
            if row is None:
                failures += 1
                continue
            details.append(row)
            worst_g = max(worst_g, row["gamma_error"])
            worst_cal = max(worst_cal, row["x_error_calibration"])
            worst_fresh = max(worst_fresh, row["x_error_fresh"])
        summary.append({
            "n_bits": n_bits,
            "worst_gamma_error": worst_g,
            "worst_x_error_calibration": worst_cal,
            "worst_x_error_fresh": worst_fresh,
            "failures": failures,
        })
    return summary, details


# ---------------------------------------------------------------------------
# difference-polynomial curve family
# ---------------------------------------------------------------------------

def run_poly_family(cfg: ExperimentConfig):
    """Sampled difference-polynomial curves on t in [0, 1] for several
    seeded (x, -x) pairs at one fixed base; rows (pair_id, n_bits, t, value).
    """
    gamma = cfg.gamma if cfg.gamma is not None else cfg.gamma_range[0]
    leak = leak_for_gamma(gamma)
    ts = np.linspace(0.0, 1.0, cfg.curve_points)
    n_max = max(cfg.bit_lengths)
    rows = []
    for pair in range(cfg.trials):
        coeffs_full = None
        for attempt in range(cfg.max_redraws + 1):
            rng_seq, pol_seq = _spawn(cfg.seed, pair, attempt, n=2)
            rng = np.random.default_rng(rng_seq)
            x = float(rng.uniform(-1.0, 1.0))
            alpha = float(rng.uniform(*cfg.alpha_range))
            q = QuantizerSpec(nu=cfg.nu, alpha=alpha,
                              policy=_policy_for(cfg.policy, pol_seq))
            length = n_max + 1 + _K_PROBE
            b = gre_encode_leaky(x, leak, length, q).bits
            c = gre_encode_leaky(-x, leak, length, q).bits
            nonzero = np.nonzero(b.astype(np.int16) + c)[0]
            if len(nonzero) == 0 or int(nonzero[0]) > _K_PROBE:
                continue
            k = int(nonzero[0])
            coeffs_full = ((b[k:k + n_max + 1].astype(np.int16)
                            + c[k:k + n_max + 1]) // 2).astype(np.int8)
            break
        if coeffs_full is None:
            continue
        for n_bits in cfg.bit_lengths:
            vals = _values_on_grid(coeffs_full[: n_bits + 1], ts)
            for t, v in zip(ts, vals):
                rows.append({"pair_id": pair, "n_bits": n_bits,
                             "t": float(t), "value": float(v)})
    return rows


# ---------------------------------------------------------------------------
# boundedness sweep
# ---------------------------------------------------------------------------

def run_boundedness_sweep(cfg: ExperimentConfig):
    """Orbit boundedness over a leak grid x amplifier grid x inputs x all
    policies; the amplifier grid spans the uniform certified interval at
    tolerance epsilon (defaults to nu)."""
    eps = cfg.epsilon if cfg.epsilon is not None else cfg.nu
    a_lo, a_hi = uniform_alpha_range(eps)
    lams = np.linspace(0.9, 1.0, cfg.leak_grid)
    alphas = np.linspace(a_lo, a_hi, cfg.alpha_grid)
    policies = [k.value for k in PolicyKind]
    grids = np.meshgrid(lams, lams, alphas, np.arange(4), np.asarray(cfg.inputs),
                        indexing="ij")
    l1, l2, alpha, codes, x0 = (g.ravel() for g in grids)
    max_abs, _ = simulate_orbits(l1, l2, alpha, cfg.nu, codes.astype(np.int8),
                                 x0, cfg.orbit_steps, seed=cfg.seed)
    rows = []
    for i in range(len(max_abs)):
        rows.append({
            "lambda1": float(l1[i]),
            "lambda2": float(l2[i]),
            "alpha": float(alpha[i]),
            "policy": policies[int(codes[i])],
            "x0": float(x0[i]),
            "max_abs_u": float(max_abs[i]),
            "bounded": bool(max_abs[i] < _BOUND_LIMIT),
        })
    return rows


# ---------------------------------------------------------------------------
# zero-expansion structure report
# ---------------------------------------------------------------------------

def run_zero_structure(cfg: ExperimentConfig):
    """Period-3 / factorization / margin report for seeded leak-free
    zero-expansions."""
    rows = []
    grid = np.linspace(0.0, PHI_INV, 1000, endpoint=False)
    for i in range(cfg.n_streams):
        rng_seq, pol_seq = _spawn(cfg.seed, i, n=2)
        rng = np.random.default_rng(rng_seq)
        alpha = float(rng.uniform(*cfg.alpha_range))
        q = QuantizerSpec(nu=cfg.nu, alpha=alpha,
                          policy=_policy_for(cfg.policy, pol_seq))
        bits = gre_encode(0.0, cfg.stream_bits, q).bits
        period3 = check_period3(bits)
        poly = TernaryPolynomial(bits)
        try:
            fact = factor_zero_poly(poly)
            deriv = derivative_bound_at_root(poly)
            margins = [rn_magnitude_bound(fact, float(t)) for t in grid]
            min_value = min(v for v, _ in margins)
            min_margin = min(v - bnd for v, bnd in margins)
            factored = True
        except StructureViolationError:
            factored, deriv, min_value, min_margin = False, 0.0, 0.0, 0.0
        rows.append({
            "stream": i,
            "alpha": alpha,
            "period3": period3,
            "factored": factored,
            "derivative_at_root": deriv,
            "min_abs_R": min_value,
            "min_margin": min_margin,
        })
    return rows


# ---------------------------------------------------------------------------
# transversality scan
# ---------------------------------------------------------------------------

def run_transversality_scan(cfg: ExperimentConfig):
    report = transversality_oracle(cfg.max_degree, cfg.rho)
    rows = [{
        "max_degree": report.max_degree,
        "rho": report.rho,
        "resolution": report.resolution,
        "total_instances": report.total_instances,
        "n_violations": len(report.violations),
        "violations": json.dumps(
            [{"coeffs": list(c), "roots": list(r)} for c, r in report.violations]
        ),
    }]
    return rows


# ---------------------------------------------------------------------------
# output serialization
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows(path: str | Path | None, rows: list[dict], fmt: str = "csv") -> str:
    """Serialize rows; returns the text (and writes it when path given)."""
    if fmt == "json":
        text = json.dumps(rows, indent=1, sort_keys=True) + "\n"
    else:
        if rows:
            header = list(rows[0].keys())
            lines = [",".join(header)]
            lines += [",".join(_fmt(row[h]) for h in header) for row in rows]
        else:
            lines = []
        text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


_EXPERIMENT_RUNNERS = {
    "decay-recovery": lambda cfg: run_decay_recovery(cfg)[0],
    "poly-family": run_poly_family,
    "boundedness-sweep": run_boundedness_sweep,
    "zero-structure": run_zero_structure,
    "transversality-scan": run_transversality_scan,
}


def run_experiment(cfg: ExperimentConfig, out: str | None = None,
                   fmt: str = "csv") -> str:
    runner = _EXPERIMENT_RUNNERS[cfg.kind]
    rows = runner(cfg)
    path = out if out is not None else cfg.output_path
    return write_rows(path, rows, fmt)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_encode(args) -> int:
    policy = FlakyPolicy(_POLICY_BY_NAME[args.policy], args.seed)
    q = QuantizerSpec(nu=args.nu, alpha=args.alpha, policy=policy)
    if args.kind == "beta":
        result = beta_encode(args.x, args.beta, args.n_bits, q)
    elif args.kind == "beta-leaky":
        result = beta_encode_leaky(args.x, args.beta, args.lam, args.n_bits, q)
    elif args.kind == "gre":
        result = gre_encode(args.x, args.n_bits, q)
    else:
        leak = LeakParams(args.lambda1, args.lambda2)
        result = gre_encode_leaky(args.x, leak, args.n_bits, q)
    line = "".join("+" if b > 0 else "-" for b in result.bits)
    if args.out is None:
        print(line)
        return 0
    base = Path(args.out)
    write_bitstream(base.with_suffix(".bits"), result.bits)
    meta = {
        "kind": args.kind,
        "n_bits": args.n_bits,
        "nu": args.nu,
        "alpha": args.alpha,
        "policy": args.policy,
        "policy_seed": args.seed,
        "note": "expansion base deliberately unrecorded; estimate it with 'recover'",
    }
    base.with_suffix(".meta.json").write_text(json.dumps(meta, indent=1,
                                                         sort_keys=True) + "\n")
    print(f"wrote {base.with_suffix('.bits')} and {base.with_suffix('.meta.json')}")
    return 0


def _cmd_decode(args) -> int:
    bits = read_bitstream(args.bits)
    n = args.n if args.n is not None else len(bits)
    report = decode_with_estimate(bits, args.gamma, n, gamma_err=args.gamma_err)
    payload = {
        "estimate": report.estimate,
        "bound": report.bound,
        "bits_used": report.bits_used,
        "base_used": report.base_used,
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"estimate={_fmt(report.estimate)} bound={_fmt(report.bound)} "
              f"bits_used={report.bits_used} base={_fmt(report.base_used)}")
    return 0


def _cmd_recover(args) -> int:
    if (args.pair is None) == (args.zero is None):
        raise ConfigError("recover: give exactly one of --pair or --zero")
    if args.delta is not None:
        ctx = TransversalityContext(gamma_high=args.gamma_high, delta=args.delta,
                                    gamma_low=args.gamma_low)
    else:
        ctx = TransversalityContext.for_gamma_high(args.gamma_high,
                                                   gamma_low=args.gamma_low)
    if args.pair is not None:
        b = read_bitstream(args.pair[0])
        c = read_bitstream(args.pair[1])
        result = recover_gamma_from_pair(b, c, ctx, search_high=args.search_high)
    else:
        bits = read_bitstream(args.zero)
        result = recover_gamma_from_zero(bits, ctx, search_high=args.search_high)
    payload = {
        "gamma_estimate": result.gamma_estimate,
        "residual": result.residual,
        "poly_degree_used": result.poly_degree_used,
        "shift_k": result.shift_k,
        "guarantee": result.guarantee.value,
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"gamma_estimate={_fmt(result.gamma_estimate)} "
              f"residual={_fmt(result.residual)} "
              f"degree={result.poly_degree_used} shift_k={result.shift_k} "
              f"guarantee={result.guarantee.value}")
    return 0


def _cmd_verify_range(args) -> int:
    lo, hi = uniform_alpha_range(args.delta)
    payload = {"delta": args.delta, "alpha_min": lo, "alpha_max": hi}
    if args.lambda1 is not None or args.lambda2 is not None:
        leak = LeakParams(args.lambda1 or 1.0, args.lambda2 or 1.0)
        llo, lhi = alpha_bounds(leak, args.delta)
        payload.update({
            "leak_alpha_min": llo,
            "leak_alpha_max": lhi,
            "mu_max": mu_max(leak),
            "input_cover_bound": input_cover_bound(leak),
            "effective_gamma": effective_gamma(leak.lambda1, leak.lambda2),
        })
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"[{lo:.4f}, {hi:.4f}]")
        if "leak_alpha_min" in payload:
            print(f"leak-specific: [{payload['leak_alpha_min']:.4f}, "
                  f"{payload['leak_alpha_max']:.4f}] "
                  f"mu_max={payload['mu_max']:.4f} "
                  f"gamma={payload['effective_gamma']:.6f}")
    return 0


def _cmd_experiment(args) -> int:
    if args.config is None:
        raise ConfigError("experiment: --config is required")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    text = run_experiment(cfg, out=args.out, fmt=args.format)
    if args.out is None and cfg.output_path is None:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="seed override (u64)")
    common.add_argument("--config", type=str, default=None,
                        help="experiment config path (JSON)")
    common.add_argument("--out", type=str, default=None, help="output path")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="betacodec",
        description="Beta/golden-ratio encoders, base recovery, range "
                    "certification, and experiments.",
        epilog="exit codes: 0 ok, 2 malformed config/usage, 3 numerical failure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", parents=[common], help="encode one sample")
    enc.add_argument("--kind", choices=("beta", "beta-leaky", "gre", "gre-leaky"),
                     required=True)
    enc.add_argument("--x", type=float, required=True)
    enc.add_argument("--n-bits", type=int, default=32)
    enc.add_argument("--beta", type=float, default=1.8)
    enc.add_argument("--lam", type=float, default=0.95,
                     help="single delay leak (beta-leaky)")
    enc.add_argument("--lambda1", type=float, default=0.95)
    enc.add_argument("--lambda2", type=float, default=0.95)
    enc.add_argument("--nu", type=float, default=0.0)
    enc.add_argument("--alpha", type=float, default=2.0)
    enc.add_argument("--policy", choices=sorted(_POLICY_BY_NAME),
                     default="seeded-random")
    enc.set_defaults(func=_cmd_encode, seed=0)

    dec = sub.add_parser("decode", parents=[common],
                         help="partial-sum reconstruction in a given base")
    dec.add_argument("--bits", type=str, required=True)
    dec.add_argument("--gamma", type=float, required=True)
    dec.add_argument("--n", type=int, default=None)
    dec.add_argument("--gamma-err", type=float, default=None)
    dec.set_defaults(func=_cmd_decode)

    rec = sub.add_parser("recover", parents=[common],
                         help="estimate the base from stream(s)")
    rec.add_argument("--pair", nargs=2, metavar=("B", "C"), default=None)
    rec.add_argument("--zero", type=str, default=None)
    rec.add_argument("--gamma-low", type=float, default=None)
    rec.add_argument("--gamma-high", type=float, default=ROOT_WINDOW_HIGH)
    rec.add_argument("--delta", type=float, default=None)
    rec.add_argument("--search-high", type=float, default=None)
    rec.set_defaults(func=_cmd_recover)

    ver = sub.add_parser("verify-range", parents=[common],
                         help="certified amplifier interval for a tolerance")
    ver.add_argument("--delta", type=float, required=True)
    ver.add_argument("--lambda1", type=float, default=None)
    ver.add_argument("--lambda2", type=float, default=None)
    ver.set_defaults(func=_cmd_verify_range)

    exp = sub.add_parser("experiment", parents=[common],
                         help="run a configured experiment")
    exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (NoRootError, NoSignalError, UnboundedStateError,
            StructureViolationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
