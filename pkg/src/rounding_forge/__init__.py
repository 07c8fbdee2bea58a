"""rounding-forge: exact tools for maps that send lines to circles."""

from .polycore import (
    MAX_DEGREE,
    Poly,
    PolyMap,
    QuadForm,
    Rational,
    divide_exact,
    form_signature,
    inner_poly,
    poly_divmod,
    rank_linear,
)
from .jets import (
    FracQuadMap,
    IrrationalKernelWitness,
    Jet2,
    JetError,
    NotDegenerate,
    NotDivisible,
    RankTooLow,
    RoundingJet,
    SeriesReport,
    canonical_rounding,
    check_series_divisibility,
    factor_degenerate,
    fracquad_jet,
    is_degenerate,
    jet_from_matrices,
    jets_equivalent,
    normalize_p,
    parallel_factor,
    transform_jet,
    validate_jet,
)
from .circles import (
    CircleFit,
    DenominatorVanishesIdentically,
    Line,
    NumericReport,
    RationalCurve,
    circle_fit,
    circle_rank_exact,
    restrict_to_line,
    verify_rounding_numeric,
)
from .spheres import (
    Degenerate,
    HomogenizedMap,
    PoleProximity,
    Q2NotQuadratic,
    QuadSphereMap,
    evaluate_factored,
    homogenize,
    sphere_lift,
    split_norm,
)
from .cliff import (
    CliffordRep,
    NormedPairing,
    SizeInfeasible,
    clifford_generators,
    hopf_map,
    kappa,
    normed_pairing,
    pairing_to_rounding,
    rho,
    stiefel_hopf_feasible,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_DEGREE",
    "Poly",
    "PolyMap",
    "QuadForm",
    "Rational",
    "divide_exact",
    "form_signature",
    "inner_poly",
    "poly_divmod",
    "rank_linear",
    "FracQuadMap",
    "IrrationalKernelWitness",
    "Jet2",
    "JetError",
    "NotDegenerate",
    "NotDivisible",
    "RankTooLow",
    "RoundingJet",
    "SeriesReport",
    "canonical_rounding",
    "check_series_divisibility",
    "factor_degenerate",
    "fracquad_jet",
    "is_degenerate",
    "jet_from_matrices",
    "jets_equivalent",
    "normalize_p",
    "parallel_factor",
    "transform_jet",
    "validate_jet",
    "CircleFit",
    "DenominatorVanishesIdentically",
    "Line",
    "NumericReport",
    "RationalCurve",
    "circle_fit",
    "circle_rank_exact",
    "restrict_to_line",
    "verify_rounding_numeric",
    "Degenerate",
    "HomogenizedMap",
    "PoleProximity",
    "Q2NotQuadratic",
    "QuadSphereMap",
    "evaluate_factored",
    "homogenize",
    "sphere_lift",
    "split_norm",
    "CliffordRep",
    "NormedPairing",
    "SizeInfeasible",
    "clifford_generators",
    "hopf_map",
    "kappa",
    "normed_pairing",
    "pairing_to_rounding",
    "rho",
    "stiefel_hopf_feasible",
]
