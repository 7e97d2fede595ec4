class PobShareError(Exception):
    """Base class for every error raised by pobshare."""


class PobRangeError(PobShareError, ValueError):
    pass


class UnsupportedArityError(PobShareError, ValueError):
    pass


class InvalidShareError(PobShareError, ValueError):
    pass


class MalformedInputError(PobShareError, ValueError):
    pass


class EmptyInputError(PobShareError, ValueError):
    pass


class PolicyError(PobShareError, ValueError):
    pass


class DegenerateStructureError(PolicyError):
    pass


class EmptyPolicyError(DegenerateStructureError):
    """No authorized sets at all: nobody can ever reconstruct."""


class PublicSecretError(DegenerateStructureError):
    """The empty set is authorized: the secret would be public."""


class ConflictError(PobShareError):
    """Two bundles carry different payloads for the same primitive index."""


class SchemeMismatchError(PobShareError):
    pass


class AuthorizedCoalitionError(PobShareError):
    pass


class EnumerationLimitError(PobShareError):
    pass


class FormatError(PobShareError):
    pass


class BadMagicError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


class CrcMismatchError(FormatError):
    pass


class PaddingBitsError(FormatError):
    pass
