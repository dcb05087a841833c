"""Random score laws and models for property tests."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from prcurve.empirical import EmpiricalSample
from prcurve.distributions import Affine, Beta, Discrete, LogNormal, Normal, Uniform
from prcurve.population import ClassScoreModel

finite = dict(allow_nan=False, allow_infinity=False)

normals = st.builds(Normal, st.floats(-3, 3, **finite), st.floats(0.2, 3, **finite))
lognormals = st.builds(LogNormal, st.floats(-1, 1.5, **finite), st.floats(0.2, 1.5, **finite))
betas = st.builds(Beta, st.floats(0.5, 8, **finite), st.floats(0.5, 8, **finite))
uniforms = st.builds(
    lambda lo, w: Uniform(lo, lo + w), st.floats(-2, 2, **finite), st.floats(0.1, 3, **finite)
)


@st.composite
def discretes(draw):
    k = draw(st.integers(1, 8))
    atoms = sorted(set(round(a, 3) for a in draw(st.lists(st.floats(-2, 2, **finite), min_size=k, max_size=k))))
    raw = draw(st.lists(st.floats(0.05, 1.0, **finite), min_size=len(atoms), max_size=len(atoms)))
    w = np.asarray(raw) / sum(raw)
    w[-1] = 1.0 - w[:-1].sum()
    return Discrete(tuple(atoms), tuple(w))


continuous = st.one_of(normals, lognormals, betas, uniforms)
affine_continuous = st.builds(
    Affine, continuous, st.floats(-3, 3, **finite), st.floats(0.25, 4, **finite) | st.floats(-4, -0.25, **finite)
)
any_distribution = st.one_of(continuous, discretes(), affine_continuous)
pi_values = st.floats(0.01, 0.99, **finite)


def models(dists=any_distribution):
    return st.builds(ClassScoreModel, dists, dists, pi_values)


def random_distribution(rng: np.random.Generator, allow_discrete: bool = True):
    """A random score law for bulk (non-hypothesis) checks."""
    kind = rng.integers(0, 5 if allow_discrete else 4)
    if kind == 0:
        return Normal(rng.uniform(-3, 3), rng.uniform(0.2, 3))
    if kind == 1:
        return LogNormal(rng.uniform(-1, 1.5), rng.uniform(0.2, 1.5))
    if kind == 2:
        return Beta(rng.uniform(0.5, 8), rng.uniform(0.5, 8))
    if kind == 3:
        lo = rng.uniform(-2, 2)
        return Uniform(lo, lo + rng.uniform(0.1, 3))
    atoms = np.unique(np.round(rng.uniform(-2, 2, rng.integers(1, 9)), 3))
    w = rng.uniform(0.05, 1, atoms.size)
    w /= w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return Discrete(tuple(atoms), tuple(w))


def random_model(rng: np.random.Generator, allow_discrete: bool = True) -> ClassScoreModel:
    return ClassScoreModel(
        random_distribution(rng, allow_discrete), random_distribution(rng, allow_discrete), rng.uniform(0.01, 0.99)
    )


def random_sample_with_ties(rng: np.random.Generator, max_n: int = 30) -> EmpiricalSample:
    """Small sample on a coarse score lattice, so ties within and across classes are common."""
    n_plus = int(rng.integers(1, max_n))
    n_minus = int(rng.integers(1, max_n - n_plus + 1))
    levels = int(rng.integers(2, 12))
    return EmpiricalSample(rng.integers(0, levels, n_plus) / levels, rng.integers(0, levels, n_minus) / levels)
