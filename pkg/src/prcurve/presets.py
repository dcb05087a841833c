"""Named two-class score models used throughout the examples and tests."""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import Affine, Beta, Discrete, LogNormal, Normal, ScoreDistribution, Uniform
from .population import ClassScoreModel

__all__ = ["Preset", "PRESETS", "get_preset", "preset_model"]


@dataclass(frozen=True)
class Preset:
    name: str
    plus: ScoreDistribution
    minus: ScoreDistribution
    description: str
    # PR-curve shape expected from the population analysis
    monotonicity: str

    def model(self, pi_plus: float = 0.5) -> ClassScoreModel:
        return ClassScoreModel(self.plus, self.minus, pi_plus)


CASE_F_PLUS_ATOMS = (0.2, 0.35, 0.5, 0.75, 0.9)
CASE_F_MINUS_ATOMS = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7)

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("case-a", Normal(1.4, 1.0), Normal(0.0, 1.0), "bi-normal: + ~ N(1.4, 1), - ~ N(0, 1)", "nonincreasing"),
        Preset(
            "case-a-star",
            LogNormal(1.4, 1.0),
            LogNormal(0.0, 1.0),
            "bi-lognormal: + ~ LN(1.4, 1), - ~ LN(0, 1)",
            "nonincreasing",
        ),
        Preset(
            "case-b",
            Affine(LogNormal(1.4, 1.0), 8.0, -1.0),
            Normal(0.0, 1.0),
            "+ ~ 8 - W with W ~ LN(1.4, 1), - ~ N(0, 1)",
            "non-monotone",
        ),
        Preset("case-c", Beta(5.0, 2.0), Beta(2.0, 5.0), "bi-beta: + ~ beta(5, 2), - ~ beta(2, 5)", "nonincreasing"),
        Preset("case-d", Uniform(0.5, 1.5), Uniform(0.0, 1.0), "+ ~ U[0.5, 1.5], - ~ U[0, 1]", "nonincreasing"),
        Preset("case-e", Uniform(0.0, 1.0), Uniform(0.5, 1.5), "+ ~ U[0, 1], - ~ U[0.5, 1.5]", "nondecreasing"),
        Preset(
            "case-f",
            Discrete(CASE_F_PLUS_ATOMS),
            Discrete(CASE_F_MINUS_ATOMS),
            "discrete uniform: + on {0.2, 0.35, 0.5, 0.75, 0.9}, - on {0.05, ..., 0.7} (10 atoms)",
            "non-monotone",
        ),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def preset_model(name: str, pi_plus: float = 0.5) -> ClassScoreModel:
    return get_preset(name).model(pi_plus)
