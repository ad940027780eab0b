"""Conceptual Density of a subhierarchy holding ``m`` marked senses.

    CD(c, m) = sum_{i=0}^{m-1} (nhyp + beta) ** (i ** alpha) / descendants(c)

With ``alpha=1, beta=0`` this is the unweighted form whose value is exactly 1
when ``m`` equals the height of a regular tree. The defaults (``alpha=0.20``,
``beta=0``) are the tuned operating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .taxonomy import ConceptStats


@dataclass(frozen=True)
class DensityParams:
    alpha: float = 0.20
    beta: float = 0.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


BASE_PARAMS = DensityParams(alpha=1.0, beta=0.0)
DEFAULT_PARAMS = DensityParams()


@lru_cache(maxsize=1 << 16)
def _density(descendants: int, nhyp: float, m: int, alpha: float, beta: float) -> float:
    base = nhyp + beta
    if base < 0:
        raise ValueError(f"negative base nhyp + beta = {base}")
    # i = 0 contributes exactly 1, also when base == 0
    total = 1.0
    if alpha == 1.0:
        term = 1.0
        for _ in range(1, m):
            term *= base
            total += term
    else:
        for i in range(1, m):
            total += base ** (i ** alpha)
    return total / descendants


def conceptual_density(stats: ConceptStats, m: int, params: DensityParams = DEFAULT_PARAMS) -> float:
    if m < 1:
        raise ValueError(f"density needs at least one mark, got m={m}")
    return _density(stats.descendants, stats.nhyp, m, params.alpha, params.beta)


def conceptual_density_base(stats: ConceptStats, m: int) -> float:
    """Unweighted density: ``sum nhyp**i / descendants``."""
    return conceptual_density(stats, m, BASE_PARAMS)
