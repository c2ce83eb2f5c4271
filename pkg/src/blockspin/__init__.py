"""Block-spin renormalization of stabilizer codes as concatenated decoding."""

__version__ = "0.1.0"

from .pauli import Pauli, StabilizerGroup  # noqa: F401
from .codes import StabilizerCode, five_qubit_code  # noqa: F401
from .channel import PauliChannel  # noqa: F401
