"""Two-sided moment sequences, determinacy criteria, and indeterminacy witnesses."""

from .logreal import LogReal
from .quad import (
    Domain,
    IntegralResult,
    NonConvergence,
    QuadratureConfig,
    SignedResult,
    integrate_log,
    integrate_signed,
)
from .distfn import (
    Density,
    DistributionSpec,
    SinPerturbation,
    SpecError,
    Symmetrized,
    SymmetricExtension,
    apply_perturbation,
    default_symmetry_grid,
    invert_pushforward,
    is_symmetric,
    realize,
    symmetric_extension,
)
from .moments import (
    MomentEntry,
    MomentTable,
    closed_form_moment,
    moment,
    moment_table,
    symmetrized_moments,
)
from .criteria import (
    Classification,
    CriterionReport,
    DecayClass,
    KreinResult,
    SeriesDiagnostics,
    Variant,
    Verdict,
    berg_integral,
    carleman_sum,
    carleman_term,
    classify,
    krein_hamburger,
    krein_stieltjes,
    weighted_carleman_sum,
)
from .symmetry import (
    KreinBoundComparison,
    krein_symmetrization_bound,
    strong_from_classical,
    symmetrize,
)
from .witness import (
    WitnessReport,
    krein_of_witness,
    lognormal_witness,
    verify_same_moments,
    verify_witness,
    witness_spec,
)

__version__ = "0.1.0"

__all__ = [
    "LogReal",
    "Domain", "QuadratureConfig", "NonConvergence", "IntegralResult",
    "SignedResult", "integrate_log", "integrate_signed",
    "Density", "DistributionSpec", "SinPerturbation", "Symmetrized",
    "SymmetricExtension", "SpecError", "realize", "invert_pushforward",
    "is_symmetric", "apply_perturbation", "symmetric_extension",
    "default_symmetry_grid",
    "MomentEntry", "MomentTable", "closed_form_moment", "moment",
    "moment_table", "symmetrized_moments",
    "Variant", "Verdict", "DecayClass", "Classification",
    "SeriesDiagnostics", "KreinResult", "CriterionReport",
    "carleman_term", "carleman_sum", "weighted_carleman_sum",
    "krein_hamburger", "krein_stieltjes", "berg_integral", "classify",
    "symmetrize", "strong_from_classical", "KreinBoundComparison",
    "krein_symmetrization_bound",
    "WitnessReport", "witness_spec", "lognormal_witness",
    "verify_same_moments", "verify_witness", "krein_of_witness",
    "__version__",
]
