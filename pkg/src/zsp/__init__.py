"""Zero-sum partitions of the non-zero elements of finite abelian groups."""
from .errors import (
    CapabilityExceeded,
    ConstructionUnavailable,
    DegenerateSix,
    FloorViolation,
    InputError,
    InternalExhaustion,
    NoCompleteMapping,
    PreconditionViolated,
    StructuralError,
    Unrealizable,
    Unsupported,
    ZspError,
)
from .groups import GroupSpec
from .partition import ZeroSumPartition, verify_partition

__version__ = "0.1.0"

__all__ = [
    "CapabilityExceeded", "ConstructionUnavailable", "DegenerateSix", "FloorViolation", "GroupSpec",
    "InputError", "InternalExhaustion", "NoCompleteMapping", "PreconditionViolated",
    "StructuralError", "Unrealizable", "Unsupported", "ZeroSumPartition", "ZspError",
    "verify_partition",
]
