"""Absolute concentration robustness analysis for power-law reaction networks."""

__version__ = "0.1.0"

from .errors import InapplicableError, NetworkParseError, NumericFailure
from .kinetics import (
    KineticsClass,
    PowerLawKinetics,
    classify,
    evaluate_cfrf,
    evaluate_sfrf,
    homogeneous_pl_quotient,
    is_complex_balanced_at,
    mak_kinetics,
    pff_equivalent,
    sf_pairs,
)
from .network import (
    Complex,
    Network,
    Reaction,
    Species,
    StructuralReport,
    complex_matrix,
    incidence_matrix,
    is_co_conservative,
    is_conservative,
    stoich_basis,
    stoichiometric_matrix,
    structural_report,
)
from .rankone import (
    AcrStatus,
    AcrVerdict,
    Arrow,
    ArrowDiagram,
    OneSpeciesEmbedding,
    acr_analysis,
    acr_candidate_species,
    acr_upper_bound,
    arrow_diagram,
    embed_one_species,
    is_admissible_diagram,
    multistationarity_probe,
    reactants_differ_only_in,
    reduce_to_signomial,
    stable_acr_criterion,
)
from .signomial import Signomial, descartes_positive_root_count, positive_roots
from .variation import (
    AcrCensus,
    Decomposition,
    Provenance,
    VariationReport,
    acr_lift,
    difference_space_dimension,
    equilibria_variation,
    is_independent,
    kinetic_rank_plp_bound,
    subnetwork_variation,
    variation_bounds,
)
from .crnfile import format_network, parse
