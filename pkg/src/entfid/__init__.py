"""Maximum entanglement fidelity and input entanglement of quantum channels."""
from .channels import (
    Channel,
    ClosedForm,
    choi,
    compose,
    identity_channel,
    standard_kraus,
    tensor_channels,
    validate_channel,
)
from .entanglement import EntanglementReport, input_entanglement, pure_entanglement
from .errors import EntfidError
from .families import parse_family_spec
from .fidelity import FidelityReport, check_multiplicativity, max_fidelity, oracle_max_fidelity

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ClosedForm",
    "EntanglementReport",
    "EntfidError",
    "FidelityReport",
    "check_multiplicativity",
    "choi",
    "compose",
    "identity_channel",
    "input_entanglement",
    "max_fidelity",
    "oracle_max_fidelity",
    "parse_family_spec",
    "pure_entanglement",
    "standard_kraus",
    "tensor_channels",
    "validate_channel",
]
