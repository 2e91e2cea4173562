"""Private information delivery over prime fields: schemes, checks and bounds."""

from .capacity import CapacityReport, best_lower_bound, capacity_report, full_rate_threshold, replication_level
from .converse import ConverseCertificate, availability_constraints, converse_rate, min_download, unique_holder_property
from .design import StorageDesign
from .field import FieldElement, PrimeField
from .matrix import MatrixFp
from .schemes import Scheme, build_basic, build_full_rate, build_intermediate, build_scheme
from .serialization import scheme_from_json, scheme_to_json
from .simulator import run_delivery
from .verifier import verify

__all__ = [
    "CapacityReport",
    "ConverseCertificate",
    "FieldElement",
    "MatrixFp",
    "PrimeField",
    "Scheme",
    "StorageDesign",
    "availability_constraints",
    "best_lower_bound",
    "build_basic",
    "build_full_rate",
    "build_intermediate",
    "build_scheme",
    "capacity_report",
    "converse_rate",
    "full_rate_threshold",
    "min_download",
    "replication_level",
    "run_delivery",
    "scheme_from_json",
    "scheme_to_json",
    "unique_holder_property",
    "verify",
]
