"""Error hierarchy shared by the library, the CLI and the HTTP API.

Every error raised on purpose by the packer derives from ``PackerError``.
``exit_code`` is what the command-line front end returns for it and
``status_code`` what the HTTP routers answer with.
"""

from typing import Optional


class PackerError(Exception):
    """Base class for all packer failures."""

    exit_code: int = 5
    status_code: int = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class InvalidParameter(PackerError):
    exit_code = 5
    status_code = 400


# Image I/O

class ImageIOError(PackerError):
    exit_code = 1
    status_code = 400


class UnsupportedFormat(ImageIOError):
    pass


class CorruptFile(ImageIOError):
    pass


class UnsupportedBitDepth(ImageIOError):
    pass


class FormatMismatch(ImageIOError):
    pass


# Geometry

class DimensionMismatch(PackerError):
    exit_code = 3
    status_code = 400


class ImageTooSmall(PackerError):
    exit_code = 3
    status_code = 400


# Histogram shifting

class RdhError(PackerError):
    status_code = 400


class CapacityExceeded(RdhError):
    pass


class InvalidSideInfo(RdhError):
    pass


class NoUsableZp(RdhError):
    pass


class InsufficientCapacity(PackerError):
    exit_code = 2
    status_code = 422

    def __init__(self, shortfall_bits: int, rounds: int, message: Optional[str] = None):
        self.shortfall_bits = shortfall_bits
        self.rounds = rounds
        super().__init__(
            message or f"shortfall: {shortfall_bits} bits after {rounds} rounds"
        )


# Bilevel codec

class CorruptStream(PackerError):
    status_code = 400


# Payload container

class ContainerError(PackerError):
    status_code = 400


class BadMagic(ContainerError):
    pass


class BadCrc(ContainerError):
    pass


class BadVersion(ContainerError):
    pass


class MalformedHeader(ContainerError):
    pass


class RoundTooSmall(ContainerError):
    def __init__(self, header_bits: int, capacity: int):
        self.header_bits = header_bits
        self.capacity = capacity
        super().__init__(f"round header needs {header_bits} bits, capacity is {capacity}")


# Extraction

class NotAMarkedImage(PackerError):
    exit_code = 4
    status_code = 400
