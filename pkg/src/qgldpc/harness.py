"""Monte Carlo engine: sample, decode, degeneracy-aware success check,
BLER curves with Wilson intervals, pseudothreshold and convergence studies.

All randomness is keyed by (master seed, error rate, trial index), so
curves are bit-reproducible and trials are paired across decoder variants
and iteration budgets (common random numbers).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import channel as ch
from .codes import GldpcCode, builtin_code, load_code
from .gldpc import DecodeResult, SideResult, decode_correlated, decode_independent
from .minsum import BpConfig, minsum_decode
from .osd import OsdConfig, osd_postprocess
from .sogrand import SograndParams

DECODERS = ("bp", "bp-osd", "sogrand", "sogrand-osd", "sogrand-osd-corr")

CSV_HEADER = ["p", "decoder", "trials", "failures", "bler",
              "ci_low", "ci_high", "mean_iters", "osd_rate", "seed"]


@dataclass(frozen=True)
class ExperimentConfig:
    code: str                      # path or "builtin:NAME"
    decoder: str = "sogrand"
    p_grid: tuple[float, ...] = (0.05,)
    trials: int = 1000
    n_iter: int | None = None      # default: 20 for sogrand variants, 100 for bp
    sog_params: SograndParams = SograndParams()
    osd_config: OsdConfig = OsdConfig()
    alpha: float = 0.625
    master_seed: int = 0
    out_path: str | None = None
    max_failures: int | None = None  # optional early stop per grid point

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {DECODERS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for p in self.p_grid:
            if not 0.0 < p < 0.75:
                raise ValueError(f"p grid values must lie in (0, 3/4), got {p}")

    def resolved_n_iter(self) -> int:
        if self.n_iter is not None:
            return self.n_iter
        return 100 if self.decoder.startswith("bp") else 20


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    converged: bool
    osd_invoked: bool
    iterations_used: int
    logical_failure: bool


@dataclass
class CurvePoint:
    p: float
    decoder_id: str
    trials: int
    failures: int
    bler: float
    wilson_ci_low: float
    wilson_ci_high: float
    mean_iterations: float
    osd_rate: float
    seed: int


def resolve_code(source: str) -> GldpcCode:
    if source.startswith("builtin:"):
        return builtin_code(source.split(":", 1)[1])
    return load_code(source)


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval; stays informative at zero failures."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials
                         + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _decode(code: GldpcCode, decoder: str, priors: ch.ChannelPrior,
            s_x, s_z, n_iter: int, sog: SograndParams, alpha: float) -> DecodeResult:
    if decoder.startswith("bp"):
        cfg = BpConfig(alpha=alpha, n_iter=n_iter)
        z_side = minsum_decode(code.h_x, priors.llr_z, s_z, cfg)
        x_side = minsum_decode(code.h_z, priors.llr_x, s_x, cfg)
        return DecodeResult(z_side=z_side, x_side=x_side)
    if decoder == "sogrand-osd-corr":
        return decode_correlated(code, priors.pauli_prior, s_x, s_z, n_iter, sog)
    return decode_independent(code, priors, s_x, s_z, n_iter, sog)


def _maybe_osd(code: GldpcCode, decoder: str, result: DecodeResult,
               s_x, s_z, osd_cfg: OsdConfig, p: float) -> bool:
    """Post-process non-converged sides in place; returns True if OSD ran."""
    if not decoder.endswith("osd") and not decoder.endswith("corr"):
        return False
    q = 2.0 * p / 3.0
    ran = False
    if not result.z_side.converged:
        e = osd_postprocess(code.h_x, s_z, result.z_side.app, osd_cfg, q)
        result.z_side.e_hat = e
        result.z_side.converged = True
        result.z_side.osd_invoked = True
        ran = True
    if not result.x_side.converged:
        e = osd_postprocess(code.h_z, s_x, result.x_side.app, osd_cfg, q)
        result.x_side.e_hat = e
        result.x_side.converged = True
        result.x_side.osd_invoked = True
        ran = True
    return ran


def _side_success(code: GldpcCode, side: SideResult, e_true, s, h, z_side: bool) -> bool:
    e_hat = side.e_hat
    if not np.array_equal((h.astype(np.int64) @ e_hat) % 2, s):
        return False
    residual = (e_true ^ e_hat).astype(np.uint8)
    if z_side:
        return code.z_residual_is_stabilizer(residual)
    return code.x_residual_is_stabilizer(residual)


def run_trial(code: GldpcCode, cfg: ExperimentConfig, p: float,
              trial_index: int) -> TrialRecord:
    """One sample -> syndrome -> decode -> degeneracy-aware success check."""
    params = ch.DepolarizingParams(p)
    rng = ch.trial_rng(cfg.master_seed, p, trial_index)
    e = ch.sample_error(params, code.n, rng)
    s_x, s_z = ch.syndromes(code, e)
    priors = ch.make_priors(params, code.n)

    result = _decode(code, cfg.decoder, priors, s_x, s_z,
                     cfg.resolved_n_iter(), cfg.sog_params, cfg.alpha)
    iterations = result.iterations_used
    converged_before_osd = result.converged
    osd_ran = _maybe_osd(code, cfg.decoder, result, s_x, s_z, cfg.osd_config, p)

    ok = (_side_success(code, result.z_side, e.e_z, s_z, code.h_x, z_side=True)
          and _side_success(code, result.x_side, e.e_x, s_x, code.h_z, z_side=False))
    return TrialRecord(trial_index=trial_index, seed=cfg.master_seed,
                       converged=converged_before_osd,
                       osd_invoked=osd_ran, iterations_used=iterations,
                       logical_failure=not ok)


def run_point(code: GldpcCode, cfg: ExperimentConfig, p: float) -> CurvePoint:
    failures = 0
    iters_sum = 0
    osd_count = 0
    trials_run = 0
    for t in range(cfg.trials):
        rec = run_trial(code, cfg, p, t)
        trials_run += 1
        failures += rec.logical_failure
        iters_sum += rec.iterations_used
        osd_count += rec.osd_invoked
        if cfg.max_failures is not None and failures >= cfg.max_failures:
            break
    lo, hi = wilson_interval(failures, trials_run)
    return CurvePoint(p=p, decoder_id=cfg.decoder, trials=trials_run,
                      failures=failures, bler=failures / trials_run,
                      wilson_ci_low=lo, wilson_ci_high=hi,
                      mean_iterations=iters_sum / trials_run,
                      osd_rate=osd_count / trials_run, seed=cfg.master_seed)


def run_sweep(cfg: ExperimentConfig, code: GldpcCode | None = None) -> list[CurvePoint]:
    if code is None:
        code = resolve_code(cfg.code)
    points = [run_point(code, cfg, p) for p in cfg.p_grid]
    if cfg.out_path:
        write_csv(points, cfg.out_path)
        write_metadata(cfg, cfg.out_path + ".meta.json")
    return points


def write_csv(points: list[CurvePoint], path: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for pt in points:
                writer.writerow([
                    f"{pt.p:.12g}", pt.decoder_id, pt.trials, pt.failures,
                    f"{pt.bler:.12g}", f"{pt.wilson_ci_low:.12g}",
                    f"{pt.wilson_ci_high:.12g}", f"{pt.mean_iterations:.12g}",
                    f"{pt.osd_rate:.12g}", pt.seed,
                ])
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_csv(path: str) -> list[CurvePoint]:
    points = []
    try:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                points.append(CurvePoint(
                    p=float(row["p"]), decoder_id=row["decoder"],
                    trials=int(row["trials"]), failures=int(row["failures"]),
                    bler=float(row["bler"]), wilson_ci_low=float(row["ci_low"]),
                    wilson_ci_high=float(row["ci_high"]),
                    mean_iterations=float(row["mean_iters"]),
                    osd_rate=float(row["osd_rate"]), seed=int(row["seed"])))
    except OSError as exc:
        raise OSError(f"cannot read results from {path}: {exc}") from exc
    return points


def write_metadata(cfg: ExperimentConfig, path: str) -> None:
    obj = asdict(cfg)
    obj["n_iter_resolved"] = cfg.resolved_n_iter()
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, default=str)
        fh.write("\n")


def uncoded_bler(p: float, k: int) -> float:
    """Reference failure rate of k idle qubits: 1 - (1-p)^k."""
    return -math.expm1(k * math.log1p(-p))


def pseudothreshold(curve: list[CurvePoint], k: int) -> float | None:
    """Crossing of bler(p) with the uncoded reference, by log-log interpolation.

    Returns None when the curve never brackets a crossing (points with
    bler = 0 cannot enter the interpolation and are skipped).
    """
    pts = sorted((c for c in curve if c.bler > 0.0), key=lambda c: c.p)
    if len(pts) < 2:
        return None
    logs = [(math.log(c.p), math.log(c.bler) - math.log(uncoded_bler(c.p, k)))
            for c in pts]
    for (x0, f0), (x1, f1) in zip(logs, logs[1:]):
        if f0 == 0.0:
            return math.exp(x0)
        if f0 * f1 < 0.0:
            x = x0 - f0 * (x1 - x0) / (f1 - f0)
            return math.exp(x)
    if logs[-1][1] == 0.0:
        return math.exp(logs[-1][0])
    return None


@dataclass
class ConvergenceRow:
    n_iter: int
    point: CurvePoint


def convergence_study(cfg: ExperimentConfig, iters_grid: list[int],
                      code: GldpcCode | None = None) -> list[ConvergenceRow]:
    """BLER versus iteration budget, under common random numbers."""
    if code is None:
        code = resolve_code(cfg.code)
    rows = []
    for n_iter in iters_grid:
        sub = ExperimentConfig(
            code=cfg.code, decoder=cfg.decoder, p_grid=cfg.p_grid[:1],
            trials=cfg.trials, n_iter=n_iter, sog_params=cfg.sog_params,
            osd_config=cfg.osd_config, alpha=cfg.alpha,
            master_seed=cfg.master_seed)
        rows.append(ConvergenceRow(n_iter=n_iter,
                                   point=run_point(code, sub, cfg.p_grid[0])))
    return rows
