"""Experiment configurations, replication runner and on-disk outputs.

Output directory layout (schema version ``SCHEMA_VERSION``):

``trace_NNN.csv``     thinned chain: ``iteration, x0..x{d-1}, accepted, loops``
                      (block chains: ``accepted_b{j}, loops_b{j}`` per block);
                      ``accepted``/``loops`` refer to the step that produced
                      the row and are empty on row 0.
``density_NNN.csv``   ``bin_center, density`` for one coordinate.
``acf_NNN.csv``       ``lag, acf`` up to lag 100 for the same coordinate.
``summary.csv``       one row per replication plus a ``mean`` row; only
                      seed-determined statistics, so reruns are byte-identical.
``timing.csv``        wall time and ESS per second (machine dependent).
``loops_by_block.csv``  block chains only: mean and max loops per block.
``alpha_report.csv``  discrete-oracle only: brute-force vs empirical Barker
                      acceptance for every ordered pair.
``data_*.csv``        simulated datasets (sensor pairs / Cox events).
``manifest.json``     config echo, seeds, tuning, versions, checksums.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .diagnostics import (
    SUMMARY_COLUMNS,
    TIMING_COLUMNS,
    SummaryTable,
    acceptance_rate,
    autocorrelation,
    min_ess,
)
from .distributions import RngStream
from .kernels import ChainTrace, run_block_chain, run_chain, tune_scale, two_coin_pair
from .models import cox as cox_mod
from .models import discrete, sensor
from .models.targets import gamma_target, mixture_target
from .proposals import GaussianRandomWalk, RamProposal, TruncGauss1D, default_log_epsilon

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
DATA_STREAM = 2**63
TUNE_STREAM = 2**63 + 1

EXPERIMENT_KERNELS = {
    "gamma-trunc": ("barker-bf", "mh-exact", "barker-exact"),
    "ram-mixture": ("barker-bf", "ram-aux", "barker-exact"),
    "ram-sensor": ("barker-bf", "ram-aux"),
    "cox-gp": ("barker-bf", "mh-inexact-cox", "mh-exact"),
    "discrete-oracle": ("barker-bf", "barker-exact", "mh-exact"),
}

# Acceptance goals: MH 44% (1-d) / 23% (high-d), Barker 25% (1-d) / 16% (high-d).
GOAL_RATES = {
    ("gamma-trunc", "mh-exact"): 0.44,
    ("gamma-trunc", "barker-exact"): 0.25,
    ("gamma-trunc", "barker-bf"): 0.25,
    ("cox-gp", "barker-bf"): 0.16,
    ("cox-gp", "mh-inexact-cox"): 0.23,
    ("cox-gp", "mh-exact"): 0.23,
}

PRESETS = {
    "desk": {
        "gamma-trunc": dict(n_iter=10**5, n_replications=10),
        "ram-mixture": dict(n_iter=10**5, n_replications=4),
        "ram-sensor": dict(n_iter=10**4, n_replications=4),
        "cox-gp": dict(n_iter=2 * 10**4, n_replications=4, m=10),
        "discrete-oracle": dict(n_iter=10**5, n_replications=4),
    },
    "paper": {
        "gamma-trunc": dict(n_iter=10**6, n_replications=100),
        "ram-mixture": dict(n_iter=10**6, n_replications=100),
        "ram-sensor": dict(n_iter=2 * 10**5, n_replications=100),
        "cox-gp": dict(n_iter=2 * 10**5, n_replications=100, m=100),
        "discrete-oracle": dict(n_iter=10**6, n_replications=100),
    },
}

# Inner kernel variance of the RAM proposal when ``tuning`` is not given.
DEFAULT_RAM_VARIANCE = {"ram-mixture": 1.2**2, "ram-sensor": 1.08}


@dataclass
class ExperimentConfig:
    experiment: str
    kernel: str = "barker-bf"
    n_iter: int = 10**5
    n_replications: int = 10
    tuning: float | None = None
    seed: int = 0
    output_dir: str = "runs/out"
    burn_in: int = 10**4
    thin: int = 10
    workers: int = 1
    preset: str | None = None
    # model overrides
    m: int = 10
    n0: int = 10
    epsilon: float | None = None
    sigma2: float = 1.0
    lengthscale: float = 5.0
    mc_samples: int = 200
    zero_policy: str = "raise"
    alpha: float = 2.0
    beta: float = 1.0
    # tuning / outputs
    pilot_n: int = 5000
    density_bins: int = 50
    density_coordinate: int = -1
    max_lag: int = 100
    start: list | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_KERNELS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.kernel not in EXPERIMENT_KERNELS[self.experiment]:
            raise ValueError(
                f"kernel {self.kernel!r} is not available for {self.experiment}; "
                f"choose from {EXPERIMENT_KERNELS[self.experiment]}"
            )
        if self.n_iter < 1 or self.n_replications < 1 or self.thin < 1:
            raise ValueError("n_iter, n_replications and thin must be positive")
        if self.experiment == "cox-gp" and self.kernel == "mh-exact":
            log.info("cox-gp mh-exact uses the untruncated random-walk proposal")


_SECTION_KEYS = {"run", "model", "output", "tuning_options"}


def load_config_file(path) -> dict:
    """Flatten a TOML config with optional ``[run]``, ``[model]``, ``[output]`` tables."""
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    flat: dict = {}
    for k, v in raw.items():
        if isinstance(v, dict):
            if k not in _SECTION_KEYS:
                raise ValueError(f"unknown config section [{k}]")
            for kk, vv in v.items():
                flat["output_dir" if (k == "output" and kk == "dir") else kk] = vv
        else:
            flat[k] = v
    return flat


def build_config(file_values: dict | None = None, **overrides) -> ExperimentConfig:
    """Preset sizes, then file values, then non-None overrides (later wins)."""
    given = dict(file_values or {})
    given.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(given) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    preset = given.get("preset")
    merged = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ValueError(f"unknown preset {preset!r}")
        merged.update(PRESETS[preset].get(given.get("experiment"), {}))
        # file values override the preset, flags override both
        merged.update(file_values or {})
        merged.update({k: v for k, v in overrides.items() if v is not None})
    else:
        merged = given
    return ExperimentConfig(**merged)


# --------------------------------------------------------------------------- setups


@dataclass
class Setup:
    log_target: Callable
    proposal_family: Callable[[float], object]
    center: object
    default_scale: float | None
    goal_rate: float | None = None
    kernel: object = None
    blocks: list | None = None
    datasets: dict = field(default_factory=dict)

    def initial_state(self, scale: float, rng: RngStream):
        if self.blocks is not None:
            return np.asarray(self.center, dtype=float) + math.sqrt(scale) * rng.normals(
                len(self.center)
            )
        return self.proposal_family(scale).sample(self.center, rng)


def _gamma_setup(cfg: ExperimentConfig) -> Setup:
    target = gamma_target(cfg.alpha, cfg.beta)
    center = float(cfg.start[0]) if cfg.start else (cfg.alpha - 1) / cfg.beta or 1.0
    return Setup(
        target.log_unnorm,
        lambda h: TruncGauss1D(h, 0.0, math.inf),
        center,
        default_scale=16.0,
        goal_rate=GOAL_RATES[("gamma-trunc", cfg.kernel)],
        kernel=cfg.kernel,
    )


def _mixture_setup(cfg: ExperimentConfig) -> Setup:
    target = mixture_target()
    center = float(cfg.start[0]) if cfg.start else 5.0
    if cfg.epsilon is not None:
        log_eps = math.log(cfg.epsilon)
    else:
        log_eps = default_log_epsilon(target.log_unnorm, center)
    if cfg.kernel == "barker-exact":
        family = GaussianRandomWalk
    else:
        def family(v):
            return RamProposal(target.log_unnorm, v, log_epsilon=log_eps)
    return Setup(target.log_unnorm, family, center, DEFAULT_RAM_VARIANCE["ram-mixture"],
                 kernel=cfg.kernel)


def _sensor_setup(cfg: ExperimentConfig) -> Setup:
    data = sensor.simulate_sensor_data(sensor.TRUE_LOCATIONS, RngStream(cfg.seed, DATA_STREAM))

    def log_target(x):
        return sensor.sensor_log_posterior(data, x)

    k = data.unknown_count
    center = np.asarray(cfg.start, dtype=float) if cfg.start else np.zeros(2 * k)
    blocks = [slice(2 * i, 2 * i + 2) for i in range(k)]
    eps_holder: dict = {}

    def family(v):
        def make(cond):
            if "log_eps" not in eps_holder:
                eps_holder["log_eps"] = (
                    math.log(cfg.epsilon) if cfg.epsilon is not None
                    else default_log_epsilon(log_target, cond.base)
                )
            return RamProposal(cond, v * np.eye(2), log_epsilon=eps_holder["log_eps"])
        return make

    def write(out: Path):
        sensor.write_sensor_csv(data, out / "data_sensor_pairs.csv")
        with (out / "data_sensor_anchors.csv").open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sensor", "x1", "x2"])
            for i, loc in enumerate(data.known_locations):
                w.writerow([k + i, repr(float(loc[0])), repr(float(loc[1]))])

    return Setup(log_target, family, center, DEFAULT_RAM_VARIANCE["ram-sensor"],
                 kernel=cfg.kernel, blocks=blocks, datasets={"sensor": write})


def cox_model_from_config(cfg: ExperimentConfig) -> cox_mod.CoxModel:
    obs = cox_mod.simulate_cox_data(cox_mod.benchmark_intensity, RngStream(cfg.seed, DATA_STREAM),
                                    n0=cfg.n0)
    return cox_mod.CoxModel(cfg.m, obs, sigma2=cfg.sigma2, lengthscale=cfg.lengthscale)


def _cox_setup(cfg: ExperimentConfig) -> Setup:
    model = cox_model_from_config(cfg)
    if cfg.start:
        center = np.asarray(cfg.start, dtype=float)
    else:
        level = max(model.n_events, 1) / (model.n_replicates * model.domain_length)
        center = np.full(model.m, level)

    def random_walk(eta):
        return GaussianRandomWalk(model.proposal(eta).Sigma)

    def plug_in_mh(log_target, proposal, rng):
        return cox_mod.InexactCoxMH(log_target, proposal, rng, cfg.mc_samples, cfg.zero_policy)

    family = random_walk if cfg.kernel == "mh-exact" else model.proposal
    kernel = plug_in_mh if cfg.kernel == "mh-inexact-cox" else cfg.kernel
    return Setup(
        model.log_posterior, family, center, default_scale=0.01,
        goal_rate=GOAL_RATES[("cox-gp", cfg.kernel)], kernel=kernel,
        datasets={"events": lambda out: cox_mod.write_events_csv(model.observations,
                                                                 out / "data_cox_events.csv")},
    )


def _discrete_setup(cfg: ExperimentConfig) -> Setup:
    target = discrete.discrete_target()
    prop = discrete.DiscreteProposal(discrete.QTILDE)
    center = int(cfg.start[0]) if cfg.start else 0
    setup = Setup(target.log_unnorm, lambda _: prop, center, default_scale=1.0,
                  kernel=cfg.kernel)
    setup.initial_state = lambda scale, rng: center  # type: ignore[method-assign]
    return setup


_SETUPS = {
    "gamma-trunc": _gamma_setup,
    "ram-mixture": _mixture_setup,
    "ram-sensor": _sensor_setup,
    "cox-gp": _cox_setup,
    "discrete-oracle": _discrete_setup,
}


def build_setup(cfg: ExperimentConfig) -> Setup:
    return _SETUPS[cfg.experiment](cfg)


def resolve_tuning(cfg: ExperimentConfig, setup: Setup) -> tuple[float, str]:
    if cfg.tuning is not None:
        return float(cfg.tuning), "config"
    if setup.goal_rate is None:
        return float(setup.default_scale), "default"
    rng = RngStream(cfg.seed, TUNE_STREAM)
    x0 = setup.initial_state(setup.default_scale, rng)
    scale = tune_scale(setup.log_target, setup.proposal_family, setup.kernel, setup.goal_rate,
                       cfg.pilot_n, rng, x0, scale0=setup.default_scale)
    return scale, "tuned"


# --------------------------------------------------------------------------- replications


def run_replication(cfg: ExperimentConfig, rep: int, scale: float) -> ChainTrace:
    setup = build_setup(cfg)
    rng = RngStream(cfg.seed, rep)
    x0 = setup.initial_state(scale, rng)
    if setup.blocks is not None:
        trace = run_block_chain(setup.log_target, x0, setup.blocks, setup.proposal_family(scale),
                                setup.kernel, cfg.n_iter, rng, burn_in=cfg.burn_in,
                                keep_loops=True)
    else:
        trace = run_chain(setup.log_target, setup.proposal_family(scale), setup.kernel,
                          cfg.n_iter, rng, x0, burn_in=cfg.burn_in, keep_loops=True)
    trace.tuning = scale
    return trace


def _replication_job(args):
    cfg, rep, scale = args
    t0 = time.perf_counter()
    try:
        trace = run_replication(cfg, rep, scale)
        return rep, trace, None, time.perf_counter() - t0
    except Exception as err:  # recorded in the manifest; other replications proceed
        return rep, None, f"{type(err).__name__}: {err}", time.perf_counter() - t0


def _write_rows(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        out.writerows(rows)


def _num(v) -> str:
    return repr(float(v))


def write_trace_csv(trace: ChainTrace, path, thin: int = 10) -> None:
    states = trace.states
    d = states.shape[1]
    acc = trace.accepted
    loops = trace.loops if trace.loops is not None else np.zeros(acc.shape, dtype=np.int64)
    block = acc.ndim == 2
    if block:
        nb = acc.shape[1]
        tail = [f"accepted_b{j}" for j in range(nb)] + [f"loops_b{j}" for j in range(nb)]
    else:
        tail = ["accepted", "loops"]
    header = ["iteration"] + [f"x{i}" for i in range(d)] + tail
    rows = []
    for k in range(0, states.shape[0], thin):
        row = [k] + [_num(v) for v in states[k]]
        if k == 0:
            row += [""] * len(tail)
        elif block:
            row += [int(a) for a in acc[k - 1]] + [int(v) for v in loops[k - 1]]
        else:
            row += [int(acc[k - 1]), int(loops[k - 1])]
        rows.append(row)
    _write_rows(Path(path), header, rows)


def read_trace_csv(path) -> dict:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    xcols = [i for i, h in enumerate(header) if h.startswith("x")]
    acols = [i for i, h in enumerate(header) if h.startswith("accepted")]
    lcols = [i for i, h in enumerate(header) if h.startswith("loops")]
    states = np.array([[float(r[i]) for i in xcols] for r in rows])
    body = rows[1:]
    accepted = np.array([[int(r[i]) for i in acols] for r in body], dtype=bool)
    loops = np.array([[int(r[i]) for i in lcols] for r in body], dtype=np.int64)
    return {"iteration": np.array([int(r[0]) for r in rows]), "states": states,
            "accepted": accepted, "loops": loops}


def emit_density_data(trace, bins: int = 50, coordinate: int = -1, max_lag: int = 100):
    """Histogram density and autocorrelation of one coordinate of a trace.

    Returns ``(histogram_rows, acf_rows)``: ``(bin_center, density)`` pairs
    whose densities integrate to one, and ``(lag, acf)`` for lags 0..max_lag.
    """
    states = getattr(trace, "states", trace)
    states = np.asarray(states, dtype=float)
    if states.size == 0:
        raise ValueError("empty trace")
    x = states.reshape(len(states), -1)[:, coordinate]
    dens, edges = np.histogram(x, bins=bins, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    lag = min(max_lag, len(x) - 1)
    acf = autocorrelation(x, lag) if np.ptp(x) > 0 else np.ones(lag + 1)
    return list(zip(centers.tolist(), dens.tolist())), list(enumerate(acf.tolist()))


def write_density_csvs(trace, density_path, acf_path, bins=50, coordinate=-1, max_lag=100):
    hist, acf = emit_density_data(trace, bins, coordinate, max_lag)
    _write_rows(Path(density_path), ["bin_center", "density"],
                [[_num(c), _num(v)] for c, v in hist])
    _write_rows(Path(acf_path), ["lag", "acf"], [[k, _num(v)] for k, v in acf])


def trace_statistics(trace: ChainTrace) -> dict:
    try:
        ess = min_ess(trace.states[1:])
    except ValueError:
        ess = math.nan
    calls = sum(a.calls for a in trace.loop_stats)
    mean_loops = sum(a.total for a in trace.loop_stats) / calls if calls else math.nan
    max_loops = max(a.max for a in trace.loop_stats) if calls else math.nan
    return dict(ess=ess, acceptance_rate=acceptance_rate(trace), mean_loops=mean_loops,
                max_loops=max_loops)


def discrete_alpha_report(n_calls: int, seed: int, stream_id: int = DATA_STREAM - 1) -> list:
    """Brute-force vs two-coin acceptance for every ordered pair of the 3-state system."""
    target = discrete.discrete_target()
    prop = discrete.DiscreteProposal(discrete.QTILDE)
    exact = discrete.exact_barker()
    rng = RngStream(seed, stream_id)
    rows = []
    for x in range(3):
        for y in range(3):
            freq, loops = two_coin_pair(target.log_unnorm, prop, x, y, n_calls, rng)
            a = float(exact[x, y])
            se = math.sqrt(a * (1 - a) / n_calls)
            cx, cy, px, py = discrete.exact_factory_terms(x, y)
            rows.append(dict(x=x, y=y, alpha_exact=a, alpha_empirical=freq,
                             z=(freq - a) / se if se > 0 else 0.0,
                             mean_loops=loops,
                             expected_loops=(cx + cy) / (cx * px + cy * py)))
    return rows


# --------------------------------------------------------------------------- manifest


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    config: dict
    tuning: dict
    replications: list
    outputs: dict
    versions: dict
    schema_version: str = SCHEMA_VERSION
    wall_time_sec: float = 0.0

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> RunManifest:
        return cls(**json.loads(Path(path).read_text()))

    def verify(self, root) -> dict:
        """Map of output name to whether its checksum still matches."""
        root = Path(root)
        return {name: (root / name).exists() and sha256_file(root / name) == digest
                for name, digest in self.outputs.items()}


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    """Run all replications, write traces, tables and the manifest."""
    t_start = time.perf_counter()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    setup = build_setup(cfg)
    for writer in setup.datasets.values():
        writer(out)
    scale, source = resolve_tuning(cfg, setup)
    log.info("%s/%s: scale %.5g (%s)", cfg.experiment, cfg.kernel, scale, source)

    jobs = [(cfg, rep, scale) for rep in range(cfg.n_replications)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_replication_job, jobs))
    else:
        results = [_replication_job(j) for j in jobs]

    summary = SummaryTable()
    block_rows = []
    reps = []
    traces = []
    for rep, trace, err, wall in sorted(results, key=lambda r: r[0]):
        rec = dict(replication=rep, seed=cfg.seed, stream_id=rep, status="ok", error=None,
                   wall_time_sec=wall)
        if err is not None:
            rec.update(status="failed", error=err)
            reps.append(rec)
            log.warning("replication %d failed: %s", rep, err)
            continue
        reps.append(rec)
        traces.append(trace)
        write_trace_csv(trace, out / f"trace_{rep:03d}.csv", cfg.thin)
        write_density_csvs(trace, out / f"density_{rep:03d}.csv", out / f"acf_{rep:03d}.csv",
                           cfg.density_bins, cfg.density_coordinate, cfg.max_lag)
        stats = trace_statistics(trace)
        summary.add(method=f"{cfg.kernel}[{rep}]", wall_time_sec=trace.wall_time, **stats)
        if trace.accepted.ndim == 2:
            for j, acc in enumerate(trace.loop_stats):
                block_rows.append([rep, j, _num(acc.mean), acc.max,
                                   _num(trace.accepted[:, j].mean())])
    if summary.rows:
        keys = ("ess", "acceptance_rate", "mean_loops", "max_loops", "wall_time_sec")
        means = {k: float(np.mean([r[k] for r in summary.rows])) for k in keys}
        summary.add(method=f"{cfg.kernel}[mean]", **means)
    summary.write_csv(out / "summary.csv", SUMMARY_COLUMNS)
    summary.write_csv(out / "timing.csv", TIMING_COLUMNS)
    if block_rows:
        _write_rows(out / "loops_by_block.csv",
                    ["replication", "block", "mean_loops", "max_loops", "acceptance_rate"],
                    block_rows)
    if cfg.experiment == "discrete-oracle":
        rows = discrete_alpha_report(cfg.n_iter, cfg.seed)
        cols = list(rows[0])
        _write_rows(out / "alpha_report.csv", cols,
                    [[r[c] if isinstance(r[c], int) else _num(r[c]) for c in cols] for r in rows])
        occ_rows = []
        for rep_trace in traces:
            s = rep_trace.states[1:, 0].astype(int)
            occ = np.bincount(s, minlength=3) / len(s)
            occ_rows.append([rep_trace.stream_id] + [_num(v) for v in occ])
        _write_rows(out / "occupancy.csv", ["replication", "p0", "p1", "p2"], occ_rows)

    outputs = {p.name: sha256_file(p) for p in sorted(out.iterdir())
               if p.is_file() and p.name != "manifest.json"}
    manifest = RunManifest(
        config=asdict(cfg),
        tuning=dict(value=scale, source=source, seed=cfg.seed, stream_id=TUNE_STREAM),
        replications=reps,
        outputs=outputs,
        versions=dict(twocoin=__version__, python=platform.python_version(),
                      numpy=np.__version__),
        wall_time_sec=time.perf_counter() - t_start,
    )
    manifest.write(out / "manifest.json")
    return manifest


def report(manifest_path) -> SummaryTable:
    """Rebuild the summary table from the stored (thinned) traces.

    Statistics are estimates from the stored rows; they coincide with the
    run-time summary when the run used ``thin = 1``.
    """
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    manifest = RunManifest.read(manifest_path)
    kernel = manifest.config["kernel"]
    table = SummaryTable()
    for rec in manifest.replications:
        if rec["status"] != "ok":
            continue
        rep = rec["replication"]
        tr = read_trace_csv(root / f"trace_{rep:03d}.csv")
        try:
            ess = min_ess(tr["states"][1:])
        except ValueError:
            ess = math.nan
        loops = tr["loops"]
        used = loops[loops > 0]
        table.add(
            method=f"{kernel}[{rep}]",
            ess=ess,
            acceptance_rate=float(tr["accepted"].mean()) if tr["accepted"].size else math.nan,
            mean_loops=float(used.mean()) if used.size else math.nan,
            max_loops=int(used.max()) if used.size else math.nan,
            wall_time_sec=rec.get("wall_time_sec", math.nan),
        )
    return table


__all__ = [
    "ExperimentConfig",
    "RunManifest",
    "build_config",
    "emit_density_data",
    "load_config_file",
    "report",
    "run_experiment",
]
