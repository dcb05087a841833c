"""Score laws for a single class.

Every distribution exposes the distribution function, its generalized
inverse ``quantile(p) = inf{z : F(z) >= p}``, the matching upper-tail pair
(``sf``/``isf``), densities for continuous laws, the support endpoints and a
seeded sampler. Infinite support endpoints and the ``quantile(0) = -inf``
convention are represented by IEEE ``±inf``; every public method branches on
infinite inputs before any arithmetic touches them.

Evaluators accept scalars or array-likes and return a ``float`` for scalar
input and an ``ndarray`` otherwise.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np
from scipy import special

from .exceptions import DomainError, UnsupportedOperationError

__all__ = [
    "ScoreDistribution",
    "Normal",
    "LogNormal",
    "Beta",
    "Uniform",
    "Discrete",
    "Affine",
    "distribution_from_config",
    "as_generator",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Slack when comparing cumulative atom weights against a probability level.
_CUM_TOL = 1e-12
# relative slack before a computed continuous quantile is corrected upward
_INVERSE_RTOL = 1e-12


def _finish(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def as_generator(stream) -> np.random.Generator:
    """Coerce ``None``, an int seed, a SeedSequence or a Generator to a Generator."""
    if isinstance(stream, np.random.Generator):
        return stream
    return np.random.default_rng(stream)


class ScoreDistribution(ABC):
    """Distribution of the score within one class.

    Subclasses implement the underscore hooks on finite arguments only;
    the public wrappers take care of the ``±inf`` sentinels and of the
    probability-domain checks.
    """

    kind: ClassVar[str] = "continuous"

    @property
    @abstractmethod
    def lower(self) -> float:
        """Smallest possible score (may be ``-inf``)."""

    @property
    @abstractmethod
    def upper(self) -> float:
        """Largest possible score (may be ``+inf``)."""

    @property
    def is_continuous(self) -> bool:
        return self.kind == "continuous"

    # hooks --------------------------------------------------------------

    @abstractmethod
    def _cdf(self, t: np.ndarray) -> np.ndarray: ...

    def _sf(self, t: np.ndarray) -> np.ndarray:
        return 1.0 - self._cdf(t)

    @abstractmethod
    def _ppf(self, p: np.ndarray) -> np.ndarray: ...

    def _isf(self, p: np.ndarray) -> np.ndarray:
        return self._ppf(1.0 - p)

    def _logpdf(self, t: np.ndarray) -> np.ndarray:
        raise UnsupportedOperationError(f"{type(self).__name__} has no density")

    @abstractmethod
    def _sample(self, count: int, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def to_config(self) -> dict[str, Any]: ...

    # public API ---------------------------------------------------------

    def cdf(self, t):
        """P(S <= t); 0 at ``-inf`` and 1 at ``+inf``."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        neg, pos = np.isneginf(t), np.isposinf(t)
        mid = ~(neg | pos)
        out[neg] = 0.0
        out[pos] = 1.0
        out[mid] = self._cdf(t[mid])
        return _finish(out)

    def sf(self, t):
        """P(S > t), computed without the ``1 - cdf`` cancellation where possible."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        neg, pos = np.isneginf(t), np.isposinf(t)
        mid = ~(neg | pos)
        out[neg] = 1.0
        out[pos] = 0.0
        out[mid] = self._sf(t[mid])
        return _finish(out)

    def quantile(self, p):
        """Generalized inverse ``inf{z : F(z) >= p}`` for ``p`` in [0, 1].

        ``quantile(0)`` is ``-inf`` and ``quantile(1)`` is the upper support
        endpoint.
        """
        p = _check_probability(p)
        out = np.empty(p.shape)
        zero, one = p == 0.0, p == 1.0
        mid = ~(zero | one)
        out[zero] = -math.inf
        out[one] = self.upper
        q = self._ppf(p[mid])
        if self.is_continuous:
            q = _nudge_up(q, lambda z: np.asarray(self._cdf(z)) < p[mid] * (1.0 - _INVERSE_RTOL))
        out[mid] = q
        return _finish(out)

    def isf(self, p):
        """``quantile(1 - p)``, evaluated accurately for small ``p``."""
        p = _check_probability(p)
        out = np.empty(p.shape)
        zero, one = p == 0.0, p == 1.0
        mid = ~(zero | one)
        out[zero] = self.upper
        out[one] = -math.inf
        q = self._isf(p[mid])
        if self.is_continuous:
            q = _nudge_up(q, lambda z: np.asarray(self._sf(z)) > p[mid] * (1.0 + _INVERSE_RTOL))
        out[mid] = q
        return _finish(out)

    def logpdf(self, t):
        """Log density; ``-inf`` outside the support."""
        if not self.is_continuous:
            raise UnsupportedOperationError(f"{type(self).__name__} is discrete and has no density")
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, -math.inf)
        fin = np.isfinite(t)
        out[fin] = self._logpdf(t[fin])
        return _finish(out)

    def pdf(self, t):
        """Density; 0 outside the support."""
        return _finish(np.exp(np.asarray(self.logpdf(t))))

    def sample(self, count: int, stream=None) -> np.ndarray:
        """Draw ``count`` i.i.d. scores from ``stream`` (seed or Generator)."""
        if count < 0:
            raise DomainError(f"count must be nonnegative, got {count}")
        return self._sample(int(count), as_generator(stream))


def _nudge_up(q: np.ndarray, too_low, max_steps: int = 200) -> np.ndarray:
    """Move entries of ``q`` flagged by ``too_low`` upward until the flag clears.

    Inverse functions are correct only to rounding; where the computed point
    sits a few ulps below the true quantile its cdf misses the level. Steps
    start at one ulp and double, so the overshoot is at most a factor two of
    the error being repaired.
    """
    q = np.array(q, dtype=float)
    bad = np.isfinite(q) & too_low(q)
    if not np.any(bad):
        return q
    step = np.spacing(np.abs(q))
    for _ in range(max_steps):
        idx = np.flatnonzero(bad)
        if idx.size == 0:
            break
        trial = q.copy()
        trial[idx] = q[idx] + step[idx]
        still = too_low(trial)
        q[idx] = trial[idx]
        step[idx] *= 2.0
        bad = np.zeros_like(bad)
        bad[idx] = still[idx]
    return q


def _check_probability(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(~((p >= 0.0) & (p <= 1.0))):
        raise DomainError("probability levels must lie in [0, 1]")
    return p


@dataclass(frozen=True)
class Normal(ScoreDistribution):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    lower = property(lambda self: -math.inf)
    upper = property(lambda self: math.inf)

    def _z(self, t):
        return (t - self.mu) / self.sigma

    def _cdf(self, t):
        return special.ndtr(self._z(t))

    def _sf(self, t):
        return special.ndtr(-self._z(t))

    def _ppf(self, p):
        return self.mu + self.sigma * special.ndtri(p)

    def _isf(self, p):
        return self.mu - self.sigma * special.ndtri(p)

    def _logpdf(self, t):
        z = self._z(t)
        return -0.5 * z * z - math.log(self.sigma) - _LOG_SQRT_2PI

    def _sample(self, count, rng):
        return rng.normal(self.mu, self.sigma, size=count)

    def to_config(self):
        return {"family": "normal", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class LogNormal(ScoreDistribution):
    """``exp(N(mu, sigma**2))``."""

    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    lower = property(lambda self: 0.0)
    upper = property(lambda self: math.inf)

    def _z(self, t):
        pos = t > 0
        z = np.full(t.shape, -math.inf)
        z[pos] = (np.log(t[pos]) - self.mu) / self.sigma
        return z

    def _cdf(self, t):
        return special.ndtr(self._z(t))

    def _sf(self, t):
        return special.ndtr(-self._z(t))

    def _ppf(self, p):
        return np.exp(self.mu + self.sigma * special.ndtri(p))

    def _isf(self, p):
        return np.exp(self.mu - self.sigma * special.ndtri(p))

    def _logpdf(self, t):
        out = np.full(t.shape, -math.inf)
        pos = t > 0
        logt = np.log(t[pos])
        z = (logt - self.mu) / self.sigma
        out[pos] = -0.5 * z * z - logt - math.log(self.sigma) - _LOG_SQRT_2PI
        return out

    def _sample(self, count, rng):
        return rng.lognormal(self.mu, self.sigma, size=count)

    def to_config(self):
        return {"family": "lognormal", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class Beta(ScoreDistribution):
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"beta shape parameters must be positive, got ({self.a}, {self.b})")

    lower = property(lambda self: 0.0)
    upper = property(lambda self: 1.0)

    def _cdf(self, t):
        return special.betainc(self.a, self.b, np.clip(t, 0.0, 1.0))

    def _sf(self, t):
        return special.betaincc(self.a, self.b, np.clip(t, 0.0, 1.0))

    def _ppf(self, p):
        out = special.betaincinv(self.a, self.b, p)
        return self._tail_fallback(out, p, self.a, lambda r: r)

    def _isf(self, p):
        out = special.betainccinv(self.a, self.b, p)
        return self._tail_fallback(out, p, self.b, lambda r: 1.0 - r)

    def _tail_fallback(self, out, p, shape, place):
        # scipy's inverse returns nan for p below ~1e-200; there the leading
        # tail term F(t) ~ t^a / (a B(a, b)) is exact to double precision
        bad = np.isnan(out) & (p > 0.0) & (p < 1.0)
        if np.any(bad):
            log_r = (np.log(p[bad]) + math.log(shape) + special.betaln(self.a, self.b)) / shape
            out = np.array(out, dtype=float)
            out[bad] = place(np.exp(log_r))
        return out

    def _logpdf(self, t):
        out = np.full(t.shape, -math.inf)
        inside = (t >= 0.0) & (t <= 1.0)
        ti = t[inside]
        with np.errstate(divide="ignore"):
            out[inside] = (
                special.xlogy(self.a - 1.0, ti)
                + special.xlog1py(self.b - 1.0, -ti)
                - special.betaln(self.a, self.b)
            )
        return out

    def _sample(self, count, rng):
        return rng.beta(self.a, self.b, size=count)

    def to_config(self):
        return {"family": "beta", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Uniform(ScoreDistribution):
    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.high > self.low):
            raise DomainError(f"uniform needs finite low < high, got [{self.low}, {self.high}]")

    lower = property(lambda self: self.low)
    upper = property(lambda self: self.high)

    @property
    def width(self) -> float:
        return self.high - self.low

    def _cdf(self, t):
        return np.clip((t - self.low) / self.width, 0.0, 1.0)

    def _sf(self, t):
        return np.clip((self.high - t) / self.width, 0.0, 1.0)

    def _ppf(self, p):
        return self.low + self.width * p

    def _isf(self, p):
        return self.high - self.width * p

    def _logpdf(self, t):
        inside = (t >= self.low) & (t <= self.high)
        return np.where(inside, -math.log(self.width), -math.inf)

    def _sample(self, count, rng):
        return rng.uniform(self.low, self.high, size=count)

    def to_config(self):
        return {"family": "uniform", "low": self.low, "high": self.high}


@dataclass(frozen=True, eq=False)
class Discrete(ScoreDistribution):
    """Finitely many atoms with positive weights (uniform weights by default)."""

    kind: ClassVar[str] = "discrete"

    atoms: tuple[float, ...]
    weights: tuple[float, ...] | None = None
    _atoms: np.ndarray = field(init=False, repr=False)
    _weights: np.ndarray = field(init=False, repr=False)
    _cum: np.ndarray = field(init=False, repr=False)
    _tail: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim != 1 or atoms.size == 0:
            raise DomainError("discrete law needs a nonempty list of atoms")
        if not np.all(np.isfinite(atoms)):
            raise DomainError("atoms must be finite")
        if np.any(np.diff(atoms) <= 0):
            raise DomainError("atoms must be strictly increasing")
        if self.weights is None:
            weights = np.full(atoms.size, 1.0 / atoms.size)
        else:
            weights = np.asarray(self.weights, dtype=float)
            if weights.shape != atoms.shape:
                raise DomainError("atoms and weights differ in length")
            if np.any(weights <= 0):
                raise DomainError("weights must be strictly positive")
            if abs(math.fsum(weights) - 1.0) > 1e-12:
                raise DomainError("weights must sum to 1")
        cum = np.cumsum(weights)
        cum[-1] = 1.0
        tail = np.cumsum(weights[::-1])[::-1]
        tail[0] = 1.0
        object.__setattr__(self, "atoms", tuple(atoms.tolist()))
        object.__setattr__(self, "weights", tuple(weights.tolist()))
        object.__setattr__(self, "_atoms", atoms)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_cum", cum)
        object.__setattr__(self, "_tail", np.append(tail, 0.0))

    def __eq__(self, other):
        return isinstance(other, Discrete) and self.atoms == other.atoms and self.weights == other.weights

    def __hash__(self):
        return hash((self.atoms, self.weights))

    lower = property(lambda self: self.atoms[0])
    upper = property(lambda self: self.atoms[-1])

    def _cdf(self, t):
        idx = np.searchsorted(self._atoms, t, side="right")
        return np.where(idx == 0, 0.0, self._cum[np.maximum(idx - 1, 0)])

    def _sf(self, t):
        return self._tail[np.searchsorted(self._atoms, t, side="right")]

    def _ppf(self, p):
        idx = np.searchsorted(self._cum + _CUM_TOL, p, side="left")
        return self._atoms[np.minimum(idx, self._atoms.size - 1)]

    def pmf(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._atoms, t, side="left")
        idx_c = np.minimum(idx, self._atoms.size - 1)
        hit = (idx < self._atoms.size) & (self._atoms[idx_c] == t)
        return _finish(np.where(hit, self._weights[idx_c], 0.0))

    def _sample(self, count, rng):
        return rng.choice(self._atoms, size=count, p=self._weights)

    def to_config(self):
        return {"family": "discrete", "atoms": list(self.atoms), "weights": list(self.weights)}


@dataclass(frozen=True)
class Affine(ScoreDistribution):
    """Law of ``shift + scale * X`` for ``X`` drawn from ``base``.

    A negative scale reverses the ordering, e.g. ``Affine(LogNormal(1.4, 1), 8, -1)``
    is the law of ``8 - W``. Negative scales are only supported for
    continuous bases.
    """

    base: ScoreDistribution
    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale != 0.0 and math.isfinite(self.shift)):
            raise DomainError("affine map needs finite shift and finite nonzero scale")
        if self.scale < 0 and not self.base.is_continuous:
            raise DomainError("negative scale is only supported for continuous bases")
        mapped = None
        if isinstance(self.base, Discrete):
            # exact atoms avoid cdf(mapped atom) slipping one ulp below the step
            mapped = Discrete(tuple(self.shift + self.scale * a for a in self.base.atoms), self.base.weights)
        object.__setattr__(self, "_mapped", mapped)

    @property
    def kind(self) -> str:  # type: ignore[override]
        return self.base.kind

    def _map(self, v: float) -> float:
        if v == math.inf:
            return math.inf if self.scale > 0 else -math.inf
        if v == -math.inf:
            return -math.inf if self.scale > 0 else math.inf
        return self.shift + self.scale * v

    @property
    def lower(self) -> float:
        if self._mapped is not None:
            return self._mapped.lower
        return self._map(self.base.lower if self.scale > 0 else self.base.upper)

    @property
    def upper(self) -> float:
        if self._mapped is not None:
            return self._mapped.upper
        return self._map(self.base.upper if self.scale > 0 else self.base.lower)

    def _u(self, t):
        return (t - self.shift) / self.scale

    def _cdf(self, t):
        if self._mapped is not None:
            return self._mapped._cdf(t)
        u = self._u(t)
        return np.asarray(self.base.cdf(u) if self.scale > 0 else self.base.sf(u))

    def _sf(self, t):
        if self._mapped is not None:
            return self._mapped._sf(t)
        u = self._u(t)
        return np.asarray(self.base.sf(u) if self.scale > 0 else self.base.cdf(u))

    def _ppf(self, p):
        if self._mapped is not None:
            return self._mapped._ppf(p)
        q = self.base.quantile(p) if self.scale > 0 else self.base.isf(p)
        return self.shift + self.scale * np.asarray(q)

    def _isf(self, p):
        if self._mapped is not None:
            return self._mapped._isf(p)
        q = self.base.isf(p) if self.scale > 0 else self.base.quantile(p)
        return self.shift + self.scale * np.asarray(q)

    def _logpdf(self, t):
        return np.asarray(self.base.logpdf(self._u(t))) - math.log(abs(self.scale))

    def _sample(self, count, rng):
        return self.shift + self.scale * self.base._sample(count, rng)

    def to_config(self):
        return {"family": "affine", "base": self.base.to_config(), "shift": self.shift, "scale": self.scale}


_FAMILIES = {
    "normal": (Normal, ("mu", "sigma")),
    "lognormal": (LogNormal, ("mu", "sigma")),
    "beta": (Beta, ("a", "b")),
    "uniform": (Uniform, ("low", "high")),
}


def distribution_from_config(config: dict[str, Any]) -> ScoreDistribution:
    """Build a distribution from its JSON config (see ``ScoreDistribution.to_config``)."""
    if not isinstance(config, dict) or "family" not in config:
        raise ValueError("distribution config must be an object with a 'family' key")
    family = config["family"]
    try:
        if family in _FAMILIES:
            cls, names = _FAMILIES[family]
            return cls(**{k: float(config[k]) for k in names if k in config})
        if family == "discrete":
            weights = config.get("weights")
            return Discrete(
                tuple(float(a) for a in config["atoms"]),
                None if weights is None else tuple(float(w) for w in weights),
            )
        if family == "affine":
            return Affine(
                distribution_from_config(config["base"]),
                float(config.get("shift", 0.0)),
                float(config.get("scale", 1.0)),
            )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad parameters for family {family!r}: {exc}") from exc
    raise ValueError(f"unknown distribution family {family!r}")
