"""Experiment harness: configuration, single and multi-start runs, CSV output.

A run is described by an :class:`ExperimentConfig`, usually read from an INI
file with three sections::

    [instance]
    family = rosenbrock        ; rosenbrock | orthant | spd_logdet1 | spd_logdet2
    geometry = riemannian      ; riemannian | euclidean (rosenbrock, orthant)
    n = 10                     ; space dimension / matrix order (random families)
    m = 2                      ; number of objectives (random families)

    [strategy]
    name = armijo              ; lipschitz | adaptive | armijo
    first_trial = shanno_phua  ; or a number in [t_min, t_max]

    [experiment]
    starts = 200
    seed = 0
    box_low = -5
    box_high = 5
    x0 = 0.5, 0.2              ; optional, used by single runs
    max_iter = 10000
    workers = 1

Randomness: numpy's PCG64 seeded through ``SeedSequence``. The instance
parameters use the stream ``spawn_key=(0,)`` and start ``i`` of a multi-start
batch uses ``spawn_key=(1, i)``, so every run is reproducible on its own and
results do not depend on worker scheduling.
"""

import configparser
import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import diagnostics as dg
from .instances import LogBarrier, LogDet, PositiveOrthant, Rosenbrock, RosenbrockManifold, SPDMatrices
from .manifolds import Euclidean
from .solver import SolverConfig, solve
from .stepsize import AdaptiveConfig, ArmijoConfig, LipschitzConfig

FAMILIES = ("rosenbrock", "orthant", "spd_logdet1", "spd_logdet2")
GEOMETRIES = ("riemannian", "euclidean")
STRATEGIES = ("lipschitz", "adaptive", "armijo")

_DEFAULT_BOX = {"rosenbrock": (-5.0, 5.0), "orthant": (0.0, 10.0),
                "spd_logdet1": (0.0, 100.0), "spd_logdet2": (0.0, 100.0)}


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "rosenbrock"
    geometry: str = "riemannian"
    n: int = 2
    m: int = 2
    strategy: str = "armijo"
    strategy_params: dict = field(default_factory=dict)
    starts: int = 200
    seed: int = 0
    box_low: float | None = None
    box_high: float | None = None
    x0: tuple | None = None
    max_iter: int = 10000
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.geometry not in GEOMETRIES:
            raise ConfigError(f"unknown geometry {self.geometry!r}")
        if self.geometry == "euclidean" and self.family.startswith("spd"):
            raise ConfigError("the SPD families have no Euclidean variant")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.starts < 1:
            raise ConfigError("starts must be at least 1")
        if self.n < 1 or self.m < 1:
            raise ConfigError("n and m must be at least 1")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        lo, hi = self.box
        if not lo < hi:
            raise ConfigError("the start box is empty")
        if self.family != "rosenbrock" and lo < 0:
            raise ConfigError("start box must lie in the positive reals for this family")

    @property
    def box(self):
        lo, hi = _DEFAULT_BOX[self.family]
        return (lo if self.box_low is None else self.box_low,
                hi if self.box_high is None else self.box_high)

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        try:
            return replace(self, **kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


_INT_KEYS = {"n", "m", "starts", "seed", "max_iter", "workers"}
_FLOAT_KEYS = {"box_low", "box_high"}
_STRATEGY_KEYS = {
    "lipschitz": {"L": float, "epsilon": float},
    "adaptive": {"zeta": float, "L0": float, "eta": float, "max_trials": int},
    "armijo": {"delta": float, "t_min": float, "t_max": float, "omega1": float,
               "omega2": float, "first_trial": str, "safeguard": str, "max_trials": int},
}


def load_config(path):
    """Read an INI experiment file; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_mapping({s: dict(parser[s]) for s in parser.sections()})


def config_from_mapping(sections):
    known = {"instance", "strategy", "experiment"}
    extra = set(sections) - known
    if extra:
        raise ConfigError(f"unknown config sections: {sorted(extra)}")
    kw = {}
    names = {f.name for f in fields(ExperimentConfig)}
    for key, value in {**sections.get("instance", {}), **sections.get("experiment", {})}.items():
        if key not in names or key in ("strategy", "strategy_params"):
            raise ConfigError(f"unknown config key {key!r}")
        kw[key] = _parse_value(key, value)
    strat = dict(sections.get("strategy", {}))
    name = strat.pop("name", "armijo")
    if name not in _STRATEGY_KEYS:
        raise ConfigError(f"unknown strategy {name!r}")
    params = {}
    for key, value in strat.items():
        conv = _STRATEGY_KEYS[name].get(key)
        if conv is None:
            raise ConfigError(f"unknown key {key!r} for strategy {name!r}")
        if key == "L" and value.strip() == "auto":
            continue
        try:
            params[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    kw["strategy"] = name
    kw["strategy_params"] = params
    return ExperimentConfig(**kw)


def _parse_value(key, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "x0":
            return tuple(float(v) for v in value.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value.strip()


# ---------------------------------------------------------------- problems

@dataclass
class Problem:
    """An objective on a manifold plus what the harness needs to run it."""

    name: str
    objective: object
    manifold: object
    family: str
    box: tuple
    lipschitz: float
    f_star: np.ndarray

    def sample_start(self, rng):
        lo, hi = self.box
        if self.family.startswith("spd"):
            return self.manifold.random_point(rng, lo, hi)
        x = rng.uniform(lo, hi, self.manifold.dim)
        while self.family == "orthant" and np.any(x <= 0):
            x = rng.uniform(lo, hi, self.manifold.dim)
        return x


def instance_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def start_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, index)))


def build_problem(cfg):
    """Instantiate the objective and manifold named by ``cfg``."""
    rng = instance_rng(cfg.seed)
    if cfg.family == "rosenbrock":
        obj = Rosenbrock.bicriteria()
        man = RosenbrockManifold(1) if cfg.geometry == "riemannian" else Euclidean(2)
        return Problem("rosenbrock", obj, man, cfg.family, cfg.box,
                       obj.lipschitz_constant, obj.f_star())
    if cfg.family == "orthant":
        obj = LogBarrier.random(cfg.n, cfg.m, rng)
        man = PositiveOrthant(cfg.n) if cfg.geometry == "riemannian" else Euclidean(cfg.n)
        return Problem("orthant", obj, man, cfg.family, cfg.box,
                       obj.lipschitz_constant, obj.f_star())
    family = 1 if cfg.family == "spd_logdet1" else 2
    obj = LogDet.random(family, cfg.m, rng)
    return Problem(cfg.family, obj, SPDMatrices(cfg.n), cfg.family, cfg.box,
                   obj.lipschitz_constant(cfg.n), obj.f_star())


def build_strategy(cfg, problem):
    params = dict(cfg.strategy_params)
    try:
        if cfg.strategy == "lipschitz":
            params.setdefault("L", problem.lipschitz)
            return LipschitzConfig(**params)
        if cfg.strategy == "adaptive":
            return AdaptiveConfig(**params)
        return ArmijoConfig(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {cfg.strategy} parameters: {exc}") from exc


def solver_config(cfg, problem, record_trace=True):
    return SolverConfig(strategy=build_strategy(cfg, problem), max_iter=cfg.max_iter,
                        record_trace=record_trace)


def initial_point(cfg, problem):
    """``x0`` from the config, otherwise the first multi-start point."""
    if cfg.x0 is None:
        return problem.sample_start(start_rng(cfg.seed, 0))
    x0 = np.asarray(cfg.x0, dtype=float)
    if problem.family.startswith("spd"):
        n = problem.manifold.n
        if x0.size != n * (n + 1) // 2:
            raise ConfigError(f"x0 needs the {n * (n + 1) // 2} lower-triangular entries")
        X = np.zeros((n, n))
        X[np.tril_indices(n)] = x0
        return X + np.tril(X, -1).T
    if x0.size != problem.manifold.dim:
        raise ConfigError(f"x0 needs {problem.manifold.dim} entries")
    return x0


def point_coords(p):
    """Flat coordinates for CSV output; symmetric matrices by lower triangle."""
    p = np.asarray(p, dtype=float)
    if p.ndim == 2:
        return p[np.tril_indices(p.shape[0])]
    return p.ravel()


# ---------------------------------------------------------------- output

def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path, header, rows):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(x) for x in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def trace_summary(trace):
    f = " ".join(f"{v:.10g}" for v in trace.final_values) if trace.values else ""
    return (f"termination={trace.termination} it={trace.iter_count} evalf={trace.evalf} "
            f"evalg={trace.evalg} theta={trace.theta[-1] if trace.theta else float('nan'):.3e} F=[{f}]")


def write_trace(path, trace, m):
    header = ["k", "theta", "v_norm", "t"] + [f"f_{i + 1}" for i in range(m)]
    write_csv(path, header, trace.rows())


# ---------------------------------------------------------------- runs

def run_single(cfg, out_dir=None):
    """Solve once from ``x0`` (or the first sampled start).

    Writes ``trace.csv`` and ``summary.txt`` into ``out_dir`` when given.
    Returns ``(trace, summary_line)``.
    """
    problem = build_problem(cfg)
    x0 = initial_point(cfg, problem)
    trace = solve(problem.objective, problem.manifold, x0, solver_config(cfg, problem))
    summary = trace_summary(trace)
    if out_dir is not None:
        write_trace(os.path.join(out_dir, "trace.csv"), trace, problem.objective.m)
        _write_text(os.path.join(out_dir, "summary.txt"), summary + "\n")
    return trace, summary


def _write_text(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


@dataclass
class RunRecord:
    index: int
    termination: str
    iterations: int
    evalf: int
    evalg: int
    x: np.ndarray
    f: np.ndarray

    @property
    def converged(self):
        return self.termination == "converged"


@dataclass
class RunStatistics:
    """Success rate and medians over the converged runs (NaN if none converged)."""

    n_runs: int
    pct_converged: float
    median_it: float
    median_evalf: float
    median_evalg: float

    def row(self):
        return (self.pct_converged, self.median_it, self.median_evalf, self.median_evalg)

    def __str__(self):
        return (f"runs={self.n_runs} pct={self.pct_converged:.1f} it={self.median_it:.1f} "
                f"evalf={self.median_evalf:.1f} evalg={self.median_evalg:.1f}")


def statistics(records):
    ok = [r for r in records if r.converged]
    pct = 100.0 * len(ok) / len(records) if records else float("nan")

    def med(attr):
        return float(np.median([getattr(r, attr) for r in ok])) if ok else float("nan")

    return RunStatistics(len(records), pct, med("iterations"), med("evalf"), med("evalg"))


def _run_one(args):
    cfg, problem, index = args
    x0 = problem.sample_start(start_rng(cfg.seed, index))
    trace = solve(problem.objective, problem.manifold, x0, solver_config(cfg, problem, False))
    return RunRecord(index, trace.termination, trace.iter_count, trace.evalf, trace.evalg,
                     point_coords(trace.final_point), np.asarray(trace.values[-1]
                                                                if trace.values else []))


@dataclass
class MultistartResult:
    config: ExperimentConfig
    records: list
    stats: RunStatistics

    def front(self):
        return [(r.x, r.f) for r in self.records if r.converged]


def run_multistart(cfg, out_dir=None):
    """``cfg.starts`` independent runs from random starts in the box.

    Failed runs count against the success rate; they never stop the batch.
    Writes ``runs.csv``, ``front.csv`` and ``stats.csv`` into ``out_dir``.
    """
    problem = build_problem(cfg)
    jobs = [(cfg, problem, i) for i in range(cfg.starts)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=max(1, cfg.starts // (4 * cfg.workers))))
    else:
        records = [_run_one(job) for job in jobs]
    records.sort(key=lambda r: r.index)
    result = MultistartResult(cfg, records, statistics(records))
    if out_dir is not None:
        write_multistart(out_dir, result, problem)
    return result


def write_multistart(out_dir, result, problem):
    m = problem.objective.m
    d = len(result.records[0].x)
    xs = [f"x_{i + 1}" for i in range(d)]
    fs = [f"f_{i + 1}" for i in range(m)]
    write_csv(os.path.join(out_dir, "runs.csv"),
              ["run", "termination", "it", "evalf", "evalg"] + xs + fs,
              ([r.index, r.termination, r.iterations, r.evalf, r.evalg, *r.x, *r.f]
               for r in result.records))
    write_csv(os.path.join(out_dir, "front.csv"), xs + fs,
              ([*x, *f] for x, f in result.front()))
    write_csv(os.path.join(out_dir, "stats.csv"),
              ["geometry", "runs", "pct", "it", "evalf", "evalg"],
              [[result.config.geometry, result.stats.n_runs, *result.stats.row()]])


def compare(cfg, out_dir=None):
    """Riemannian and Euclidean multi-start batches from the same starts."""
    if cfg.family.startswith("spd"):
        raise ConfigError("compare needs a family with a Euclidean variant")
    results = {}
    for geometry in GEOMETRIES:
        sub = cfg.with_overrides(geometry=geometry)
        results[geometry] = run_multistart(
            sub, None if out_dir is None else os.path.join(out_dir, geometry))
    if out_dir is not None:
        write_csv(os.path.join(out_dir, "compare.csv"),
                  ["geometry", "runs", "pct", "it", "evalf", "evalg"],
                  [[g, r.stats.n_runs, *r.stats.row()] for g, r in results.items()])
    return results


@dataclass
class DiagnosisReport:
    trace: object
    descent: bool
    sqrt_bound: object
    rate_bound: object = None
    fejer: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        checks = [self.descent, self.sqrt_bound.holds]
        if self.rate_bound is not None:
            checks.append(self.rate_bound.holds)
        if self.fejer is not None:
            checks.append(self.fejer)
        return all(checks)

    def lines(self):
        out = [trace_summary(self.trace),
               f"descent inequality: {'holds' if self.descent else 'VIOLATED'}",
               f"sqrt(N) bound: {'holds' if self.sqrt_bound.holds else 'VIOLATED'} "
               f"(constant {self.sqrt_bound.bound_constant:.6g})"]
        if self.rate_bound is not None:
            out.append(f"1/N bound: {'holds' if self.rate_bound.holds else 'VIOLATED'} "
                       f"(constant {self.rate_bound.bound_constant:.6g}, "
                       f"K {self.rate_bound.details['K']:.6g})")
        if self.fejer is not None:
            out.append(f"Fejer inequality: {'holds' if self.fejer else 'VIOLATED'}")
        return out + self.notes


def diagnose(cfg, out_dir=None):
    """Single run followed by the replay checks of :mod:`paretodescent.diagnostics`.

    The reference point for the distance-based checks is the final iterate,
    which dominates every earlier iterate because the method is monotone; for
    the Rosenbrock family it is first moved onto the Pareto set.
    """
    problem = build_problem(cfg)
    strategy = build_strategy(cfg, problem)
    x0 = initial_point(cfg, problem)
    trace = solve(problem.objective, problem.manifold, x0,
                  SolverConfig(strategy=strategy, max_iter=cfg.max_iter))
    nu = strategy.nu
    xi = dg.strategy_xi(strategy, problem.lipschitz)
    report = DiagnosisReport(trace, dg.verify_descent(trace, nu),
                             dg.check_sqrt_complexity(trace, problem.f_star, xi, nu))
    kappa = problem.manifold.curvature_lower_bound
    if problem.manifold.has_distance and kappa is not None and trace.iter_count > 0:
        q = trace.final_point
        if isinstance(problem.objective, Rosenbrock):
            q = problem.objective.dominating_pareto_point(q)
        f_q = problem.objective.value(q)
        rho = dg.rho_for_strategy(strategy, trace.values[0], f_q)
        report.rate_bound = dg.check_rate_complexity(trace, problem.manifold, q, f_q,
                                                     kappa, xi, nu, rho)
        res, d2 = dg.check_fejer(trace, problem.manifold, q, kappa, rho, f_q)
        report.fejer = dg.fejer_holds(res, d2)
    else:
        report.notes.append("distance-based checks skipped")
    if out_dir is not None:
        write_trace(os.path.join(out_dir, "trace.csv"), trace, problem.objective.m)
        _write_text(os.path.join(out_dir, "diagnose.txt"), "\n".join(report.lines()) + "\n")
    return report


# ---------------------------------------------------------------- Pareto front

@dataclass
class FrontReport:
    n_points: int
    n_pass: int
    failures: list

    @property
    def ok(self):
        return self.n_points > 0 and self.n_pass == self.n_points


def on_rosenbrock_front(x, tol=1e-5):
    """Membership of ``(x1, x2)`` in ``{(s, s^2) : 1 <= s <= 2}`` up to ``tol``."""
    x1, x2 = float(x[0]), float(x[1])
    return abs(x2 - x1 * x1) <= tol and 1.0 - tol <= x1 <= 2.0 + tol


def pareto_front_check(points, tol=1e-5):
    """Check final points of the bicriteria Rosenbrock problem against its Pareto set."""
    points = [np.asarray(p, dtype=float) for p in points]
    failures = [(i, p) for i, p in enumerate(points) if not on_rosenbrock_front(p, tol)]
    return FrontReport(len(points), len(points) - len(failures), failures)


def check_front_file(path, tol=1e-5):
    header, rows = read_csv(path)
    if header[:2] != ["x_1", "x_2"]:
        raise ConfigError(f"{path} is not a Rosenbrock front file")
    return pareto_front_check([[float(r[0]), float(r[1])] for r in rows], tol)


# ---------------------------------------------------------------- tables

def table1(starts=200, seed=0, workers=1):
    """Riemannian versus Euclidean statistics on the bicriteria Rosenbrock problem."""
    cfg = ExperimentConfig("rosenbrock", starts=starts, seed=seed, workers=workers)
    return {g: r.stats for g, r in compare(cfg).items()}


def table2(ns=(10, 100), ms=(2, 10, 20), starts=20, seed=0, workers=1):
    """Orthant log-barrier problems over a grid of dimensions and objective counts."""
    return {(n, m): run_multistart(ExperimentConfig("orthant", n=n, m=m, starts=starts,
                                                    seed=seed, workers=workers)).stats
            for n in ns for m in ms}


def table3(ns=(5, 10, 20), ms=(2, 3), starts=20, seed=0, family="spd_logdet1",
           strategy_params=None, workers=1):
    """SPD log-det problems over a grid of matrix orders and objective counts."""
    return {(n, m): run_multistart(ExperimentConfig(family, n=n, m=m, starts=starts, seed=seed,
                                                    strategy_params=strategy_params or {},
                                                    workers=workers)).stats
            for n in ns for m in ms}
