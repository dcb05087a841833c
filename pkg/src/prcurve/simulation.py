"""Monte Carlo harness for the small-sample behaviour of the empirical PR curve.

Each replicate draws a labelled sample of size ``n`` from a
:class:`~prcurve.population.ClassScoreModel` and records ``PRhat`` on a
recall grid. Replicate ``r`` owns the random substream
``SeedSequence(seed, spawn_key=(r,))``, so the replicate matrix does not
depend on how replicates are spread over worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .empirical import EmpiricalSample, eval_pr_hat
from .exceptions import DomainError
from .io import dump_json, write_rows
from .population import ClassScoreModel, eval_pr

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_REPLICATES",
    "SimulationConfig",
    "Histogram",
    "NormalComparison",
    "XSummary",
    "SimulationResult",
    "run_simulation",
    "simulate_replicate",
    "histogram",
    "is_bimodal",
    "ks_distance",
    "compare_to_normal",
    "summarize",
]

DEFAULT_GRID = tuple(round(0.1 * k, 10) for k in range(1, 11))
DEFAULT_REPLICATES = 5000
MODES = ("binomial", "fixed-expected")
FALLBACK_BINS = 30
# tolerance for "replicate equals the point value" in the degenerate case
POINT_MASS_TOL = 1e-9


@dataclass(frozen=True)
class SimulationConfig:
    """Design of one simulation run.

    Parameters
    ----------
    model : ClassScoreModel
        Class score laws and positive-class prior.
    n : int
        Total sample size per replicate.
    replicates : int
        Number of replicates ``R``.
    grid : tuple of float
        Recall levels in ``(0, 1]`` at which ``PRhat`` is recorded.
    seed : int
        Master seed; replicate ``r`` uses the substream ``(seed, r)``.
    mode : {"binomial", "fixed-expected"}
        ``binomial`` draws ``n+ ~ Binomial(n, pi+)`` and redraws samples
        with only one class present; ``fixed-expected`` uses
        ``n+ = round(n pi+)`` every time.
    """

    model: ClassScoreModel
    n: int
    replicates: int = DEFAULT_REPLICATES
    grid: tuple = DEFAULT_GRID
    seed: int = 0
    mode: str = "binomial"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise DomainError(f"replicates must be a positive integer, got {self.replicates}")
        grid = tuple(float(x) for x in np.atleast_1d(self.grid))
        if not grid or any(not 0.0 < x <= 1.0 for x in grid):
            raise DomainError("grid values must lie in (0, 1]")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "fixed-expected" and not 0 < self.fixed_n_plus < self.n:
            raise DomainError(f"round(n * pi+) = {self.fixed_n_plus} leaves one class empty")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def fixed_n_plus(self) -> int:
        return int(round(self.n * self.model.pi_plus))

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_config(),
            "n": self.n,
            "replicates": self.replicates,
            "grid": list(self.grid),
            "seed": self.seed,
            "mode": self.mode,
        }


def _stream(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replicate,))))


def simulate_replicate(config: SimulationConfig, replicate: int) -> tuple[np.ndarray, int, int]:
    """Run one replicate; returns ``(PRhat on grid, n+, redraws)``."""
    rng = _stream(config.seed, replicate)
    model, n = config.model, config.n
    redraws = 0
    if config.mode == "binomial":
        while True:
            n_plus = int(rng.binomial(n, model.pi_plus))
            if 0 < n_plus < n:
                break
            redraws += 1
    else:
        n_plus = config.fixed_n_plus
    plus = model.plus.sample(n_plus, rng)
    minus = model.minus.sample(n - n_plus, rng)
    values = eval_pr_hat(EmpiricalSample(plus, minus), np.asarray(config.grid))
    return np.asarray(values, dtype=float), n_plus, redraws


def _run_block(args) -> tuple[np.ndarray, np.ndarray, int]:
    config, start, stop = args
    rows = np.empty((stop - start, len(config.grid)))
    n_plus = np.empty(stop - start, dtype=np.int64)
    redraws = 0
    for i, r in enumerate(range(start, stop)):
        rows[i], n_plus[i], k = simulate_replicate(config, r)
        redraws += k
    return rows, n_plus, redraws


# --------------------------------------------------------------------------
# histogram and modality


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    rule: str

    def to_dict(self) -> dict:
        return {"edges": [float(e) for e in self.edges], "counts": [int(c) for c in self.counts], "rule": self.rule}


def _lattice_spacing(v: np.ndarray) -> float | None:
    """Common spacing of the distinct values, if they sit on an evenly spaced lattice."""
    distinct = np.unique(v)
    if distinct.size < 2 or distinct.size > v.size // 2:
        return None
    gaps = np.diff(distinct)
    d = float(gaps.min())
    ratio = gaps / d
    # a sparse set of irregular values would otherwise pass as a fine lattice
    if ratio.sum() > 4 * distinct.size:
        return None
    if np.all(np.abs(ratio - np.round(ratio)) <= 1e-6):
        return d
    return None


def histogram(values) -> Histogram:
    """Freedman-Diaconis histogram, falling back to 30 equal bins.

    The fallback applies when the interquartile range is zero. When the
    values lie on an evenly spaced lattice (as ``PRhat(1) = n+/n`` does),
    the bin width is rounded to a whole number of lattice steps and the
    edges are centred between lattice points, so that bins do not alternate
    between holding one and two lattice values.
    """
    v = np.asarray(values, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        return Histogram(np.array([lo, hi]), np.array([v.size]), "point")
    q75, q25 = np.percentile(v, [75, 25])
    width = 2.0 * (q75 - q25) / np.cbrt(v.size)
    step = _lattice_spacing(v)
    if width > 0 and step is not None:
        k = max(1, int(round(width / step)))
        bins = int(math.ceil((hi - lo + step) / (k * step) - 1e-9))
        start = lo - step / 2
        edges = start + k * step * np.arange(bins + 1)
        counts, edges = np.histogram(v, bins=edges)
        return Histogram(edges, counts, "freedman-diaconis-lattice")
    if width > 0:
        bins = max(1, int(math.ceil((hi - lo) / width)))
        rule = "freedman-diaconis"
    else:
        bins = FALLBACK_BINS
        rule = "fallback-30"
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    return Histogram(edges, counts, rule)


def _local_maxima(counts: np.ndarray) -> list[int]:
    """Indices of plateau-aware local maxima of a nonnegative count vector."""
    peaks = []
    m = counts.size
    i = 0
    while i < m:
        j = i
        while j + 1 < m and counts[j + 1] == counts[i]:
            j += 1
        left = counts[i - 1] if i > 0 else -1
        right = counts[j + 1] if j + 1 < m else -1
        if counts[i] > 0 and counts[i] > left and counts[i] > right:
            peaks.append((i + j) // 2)
        i = j + 1
    return peaks


def is_bimodal(counts, min_gap: int = 2, valley_ratio: float = 0.5, min_peak_fraction: float = 0.1) -> bool:
    """At least two local maxima ``min_gap`` bins apart with a deep valley between.

    The valley is the smallest count strictly between the two peaks; it
    must fall below ``valley_ratio`` times the smaller peak. Peaks lower
    than ``min_peak_fraction`` of the tallest bin are ignored, since
    sparsely populated tail bins otherwise produce spurious modes.
    """
    c = np.asarray(counts)
    if c.size == 0:
        return False
    floor = min_peak_fraction * c.max()
    peaks = [p for p in _local_maxima(c) if c[p] >= floor]
    for a_idx, a in enumerate(peaks):
        for b in peaks[a_idx + 1 :]:
            if b - a < min_gap:
                continue
            valley = c[a + 1 : b].min()
            if valley < valley_ratio * min(c[a], c[b]):
                return True
    return False


# --------------------------------------------------------------------------
# comparison with the normal approximation


def ks_distance(z, cdf=stats.norm.cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance of ``z`` to a fully specified law."""
    return float(stats.kstest(np.asarray(z, dtype=float), cdf).statistic)


@dataclass(frozen=True)
class NormalComparison:
    """KS comparison of one grid column with its reference normal law.

    ``flag`` records which reference was used:

    ``ok``
        ``N(PR(x), sigma2(x) / n)`` from the variance formula.
    ``endpoint``
        At ``x = 1`` the estimate is ``n+/n``, compared with
        ``N(pi+, pi+ pi- / n)``.
    ``plug-in-scale``
        Models without densities have no variance formula; the reference
        is centred at the population ``PR(x)`` with the replicate standard
        deviation as scale.
    ``degenerate``
        Point-mass limit; ``point_mass`` holds the fraction of replicates
        equal to the point value and no KS distance is reported.
    ``unbounded``
        Infinite ``sigma2(x)``.
    """

    x: float
    flag: str
    ks: float | None
    z_mean: float | None
    z_sd: float | None
    center: float
    scale: float | None
    point_mass: float | None = None

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "flag": self.flag,
            "ks": self.ks,
            "z_mean": self.z_mean,
            "z_sd": self.z_sd,
            "center": self.center,
            "scale": self.scale,
            "point_mass": self.point_mass,
        }


def _degenerate(values: np.ndarray, x: float, center: float) -> NormalComparison:
    mass = float(np.mean(np.abs(values - center) <= POINT_MASS_TOL))
    return NormalComparison(x, "degenerate", None, None, None, center, 0.0, mass)


def _reference(values: np.ndarray, model: ClassScoreModel, x: float, n: int, mode: str):
    """``(center, scale, flag)`` of the reference normal, scale 0 for a point mass."""
    from .asymptotics import sigma_squared

    if x == 1.0:
        pi = model.pi_plus
        scale = 0.0 if mode == "fixed-expected" else math.sqrt(pi * (1.0 - pi) / n)
        center = round(n * pi) / n if mode == "fixed-expected" else pi
        return center, scale, "endpoint"
    if model.is_continuous:
        prof = sigma_squared(model, x)
        if prof.flag == "unbounded":
            return prof.pr, math.inf, "unbounded"
        return prof.pr, math.sqrt(prof.sigma2 / n), "ok"
    center = float(eval_pr(model, x))
    scale = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return center, scale, "plug-in-scale"


def compare_to_normal(result: "SimulationResult", model: ClassScoreModel | None = None, x: float = 0.5) -> NormalComparison:
    """Standardise the replicates at ``x`` and measure their KS distance to N(0, 1).

    Parameters
    ----------
    result : SimulationResult
    model : ClassScoreModel, optional
        Defaults to the model the simulation was run with.
    x : float
        A recall level on the simulation grid.
    """
    model = result.config.model if model is None else model
    return _compare(result.column(x), model, float(x), result.config.n, result.config.mode)


def _compare(values: np.ndarray, model: ClassScoreModel, x: float, n: int, mode: str = "binomial") -> NormalComparison:
    center, scale, flag = _reference(values, model, x, n, mode)
    if flag == "unbounded":
        return NormalComparison(x, flag, None, None, None, center, None)
    if scale == 0.0:
        return _degenerate(values, x, center)
    z = (values - center) / scale
    z_sd = float(z.std(ddof=1)) if z.size > 1 else 0.0
    return NormalComparison(x, flag, ks_distance(z), float(z.mean()), z_sd, center, scale)


@dataclass(frozen=True)
class XSummary:
    x: float
    mean: float
    sd: float
    histogram: Histogram
    bimodal: bool
    comparison: NormalComparison

    @property
    def ks(self) -> float | None:
        return self.comparison.ks

    @property
    def flag(self) -> str:
        return self.comparison.flag

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "mean": self.mean,
            "sd": self.sd,
            "ks": self.ks,
            "flag": self.flag,
            "bimodal": self.bimodal,
            "bins": self.histogram.to_dict(),
            "comparison": self.comparison.to_dict(),
        }


def summarize(matrix: np.ndarray, grid, model: ClassScoreModel, n: int, mode: str = "binomial") -> list[XSummary]:
    """Per-column summaries; a pure function of its inputs."""
    out = []
    for j, x in enumerate(grid):
        col = matrix[:, j]
        hist = histogram(col)
        out.append(
            XSummary(
                float(x),
                float(col.mean()),
                float(col.std(ddof=1)) if col.size > 1 else 0.0,
                hist,
                is_bimodal(hist.counts),
                _compare(col, model, float(x), n, mode),
            )
        )
    return out


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    matrix: np.ndarray
    n_plus: np.ndarray
    redraws: int
    summaries: list = field(default_factory=list)

    @property
    def grid(self) -> tuple:
        return self.config.grid

    def column(self, x: float) -> np.ndarray:
        return self.matrix[:, self._index(x)]

    def _index(self, x: float) -> int:
        for j, g in enumerate(self.config.grid):
            if abs(g - x) <= 1e-12:
                return j
        raise DomainError(f"x = {x} is not on the simulation grid")

    def summary(self, x: float) -> XSummary:
        return self.summaries[self._index(x)]

    @property
    def provenance(self) -> dict:
        return {"config": self.config.to_dict(), "seed": self.config.seed, "redraws": self.redraws}

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "mean_n_plus": float(self.n_plus.mean()),
            "summaries": [s.to_dict() for s in self.summaries],
        }

    def write_csv(self, target=None) -> str:
        rows = (
            (x, str(r), self.matrix[r, j])
            for j, x in enumerate(self.config.grid)
            for r in range(self.matrix.shape[0])
        )
        return write_rows(target, ("x", "replicate", "pr_hat"), rows)

    def write_json(self, target=None) -> str:
        return dump_json(_json_safe(self.to_dict()), target)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def run_simulation(config: SimulationConfig, workers: int = 1) -> SimulationResult:
    """Run all replicates and summarise each grid column.

    Parameters
    ----------
    config : SimulationConfig
    workers : int, default 1
        Number of worker processes. The result is identical for every value.
    """
    if workers < 1:
        raise DomainError("workers must be >= 1")
    R = config.replicates
    if workers == 1:
        blocks = [_run_block((config, 0, R))]
    else:
        n_blocks = min(R, 4 * workers)
        bounds = np.linspace(0, R, n_blocks + 1).astype(int)
        tasks = [(config, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_run_block, tasks))
    matrix = np.concatenate([b[0] for b in blocks])
    n_plus = np.concatenate([b[1] for b in blocks])
    redraws = sum(b[2] for b in blocks)
    summaries = summarize(matrix, config.grid, config.model, config.n, config.mode)
    return SimulationResult(config, matrix, n_plus, redraws, summaries)
