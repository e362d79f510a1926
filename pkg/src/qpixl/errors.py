"""Exception hierarchy shared by the library and the CLI."""


class QpixlError(Exception):
    """Base class for all qpixl errors."""


class DomainError(QpixlError, ValueError):
    """Input is well-formed but outside what an operation accepts."""


class QubitBudgetError(DomainError):
    """A statevector would exceed the configured qubit budget."""


class ImageFormatError(QpixlError, ValueError):
    """A netpbm file could not be parsed.

    ``offset`` is the byte offset in the file where the problem was found.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class MalformedHeaderError(ImageFormatError):
    pass


class SampleRangeError(ImageFormatError):
    pass


class TruncatedPayloadError(ImageFormatError):
    pass


class InvalidStateError(DomainError):
    """A statevector does not have the structure of the expected encoding."""
