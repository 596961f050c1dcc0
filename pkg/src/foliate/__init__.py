"""Exact basic and twisted basic cohomology for finite-dimensional foliated models."""

from .errors import ConsistencyError, ModelValidationError
from .lichnerowicz import TwistingForm, betti, cohomology, duality_check, operator_identities, twisted_betti
from .linalg import GaussianRational, Matrix
from .model import FoliatedModel, from_cdga, from_lie_algebra, metric_homotopy, with_metric
from .morphisms import EquivalenceCertificate, FoliatedModelMap, equivalence_report, transfer_constant
from .signature import basic_signature

__all__ = [
    "ConsistencyError", "EquivalenceCertificate", "FoliatedModel", "FoliatedModelMap", "GaussianRational",
    "Matrix", "ModelValidationError", "TwistingForm", "basic_signature", "betti", "cohomology",
    "duality_check", "equivalence_report", "from_cdga", "from_lie_algebra", "metric_homotopy",
    "operator_identities", "transfer_constant", "twisted_betti", "with_metric",
]
