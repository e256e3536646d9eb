"""Exception types shared across the codec."""


class JtxError(Exception):
    """Base class for all data errors raised by this package."""


class PpmError(JtxError):
    """Malformed or unsupported PPM/PGM input."""


class ContainerError(JtxError):
    """Malformed JTX container (bad magic, lengths, CRC, ...)."""


class StreamError(JtxError):
    """Corrupt entropy-coded payload; carries the offending bit offset."""

    def __init__(self, message: str, bit_offset: int | None = None):
        self.message = message
        self.bit_offset = bit_offset
        if bit_offset is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} (bit offset {bit_offset})")


class CoefficientOverflowError(JtxError):
    """Quantized coefficient too large for the entropy coder's categories."""
