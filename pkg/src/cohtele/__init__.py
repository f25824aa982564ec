"""Simulation of one-cbit teleportation of l1 coherence through two-qubit resources."""

from cohtele.channels import ChoiMatrix, KrausMap, apply, choi_of_map, conjugate_map, map_of_choi
from cohtele.cmatrix import herm_eig, partial_trace, tensor
from cohtele.errors import (
    CohteleError,
    DegenerateOutcomeError,
    DimensionError,
    NotCompletelyPositiveError,
    ValidationError,
)
from cohtele.protocol import (
    PovmElement,
    TeleportOutcome,
    povm_catalog,
    resource_state,
    teleport,
    teleport_direct,
    teleport_via_theorem,
)
from cohtele.states import MemsParams, PureQubit, concurrence, l1_coherence, werner_state

__version__ = "0.1.0"
