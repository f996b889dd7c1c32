"""Level posets of 0,1-matrices: Eulerian checks, cd-indices and shellability."""

from .families import (
    FamilySpec,
    closed_form_psi,
    crosscheck_family,
    family_matrix,
    verify_block_lemmas,
    verify_psi_identities,
    verify_theorem31,
)
from .levelposet import (
    EmptyIntervalError,
    Interval,
    LevelPoset,
    ab_index,
    cd_index,
    eulerian_check_prop21,
    eulerian_rank_check,
    flag_f,
    flag_vector,
    k_series,
    psi_automaton,
    psi_truncated,
)
from .matlin import NotPrimitiveError, SeriesMatrix, anti_flip, bin_power, exponent, parse_matrix
from .ncalg import NcPoly, NotInCdSpanError, TruncSeries, ab_to_cd, cd_to_ab, delta, geom_inverse
from .walkshell import WalkMonomial, prop63_oracle, reduced_powers, shellability_certificate

__all__ = [
    "FamilySpec", "closed_form_psi", "crosscheck_family", "family_matrix", "verify_block_lemmas",
    "verify_psi_identities", "verify_theorem31",
    "EmptyIntervalError", "Interval", "LevelPoset", "ab_index", "cd_index", "eulerian_check_prop21",
    "eulerian_rank_check", "flag_f", "flag_vector", "k_series", "psi_automaton", "psi_truncated",
    "NotPrimitiveError", "SeriesMatrix", "anti_flip", "bin_power", "exponent", "parse_matrix",
    "NcPoly", "NotInCdSpanError", "TruncSeries", "ab_to_cd", "cd_to_ab", "delta", "geom_inverse",
    "WalkMonomial", "prop63_oracle", "reduced_powers", "shellability_certificate",
]
__version__ = "0.1.0"
