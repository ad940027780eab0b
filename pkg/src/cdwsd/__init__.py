"""Word sense disambiguation of nouns by conceptual density over a taxonomy."""

from .corpus import Document, GoldToken, dump_semcor, extract_nouns, parse_plain, parse_semcor
from .density import DensityParams, conceptual_density, conceptual_density_base
from .evaluation import (
    Population,
    ScoreReport,
    SenseFrequencyTable,
    most_frequent_baseline,
    random_baseline_analytic,
    random_baseline_monte_carlo,
    score,
    window_sweep,
)
from .taxonomy import ConceptStats, Synset, Taxonomy, load_taxonomy, solve_nhyp
from .wsd import (
    DisambiguationOutcome,
    Lattice,
    Status,
    WindowConfig,
    apply_selection,
    build_lattice,
    disambiguate_document,
    disambiguate_window,
    select_densest,
)

__version__ = "0.1.0"
