"""Dirichlet character sums over short intervals, checked numerically.

Exact residue-group arithmetic and character tables, prefix sums and Gauss
sums, the trigonometric cosine-sum bounds, the three-way split of the
Fourier-inverted sum, and a batch survey driver.
"""

from .characters import (
    CharacterLabel,
    CharacterProfile,
    UnitAngle,
    all_labels,
    conductor,
    enumerate_primitive,
    evaluate,
    is_primitive,
    parity,
    profile,
    values,
)
from .charsums import (
    GaussSumResult,
    SumProfile,
    gauss_sum,
    prefix_sums,
    reconstruct_via_inversion,
)
from .decomposition import DecompositionReport, decompose, theorem_ratio
from .errors import PVShortError
from .residues import ResidueGroup, factorize, residue_group
from .survey import SurveyConfig, load_config

__version__ = "0.1.0"
