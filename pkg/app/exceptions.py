"""
Error hierarchy for solution analysis.

Every error is a ValueError so callers that only guard against bad input keep
working; extra keyword context (bounds, witnesses) is kept on ``context`` and
mirrored as attributes.
"""


class YBEError(ValueError):
    """Base class for all analysis errors"""

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context
        for key, value in context.items():
            setattr(self, key, value)

    def to_dict(self):
        payload = {'error': type(self).__name__, 'message': self.message}
        if self.context:
            payload['context'] = {key: _jsonable(value) for key, value in sorted(self.context.items())}
        return payload


def _jsonable(value):
    if isinstance(value, (frozenset, set)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    return value


# solution_core
class MalformedTable(YBEError):
    pass


class InternalInconsistency(YBEError):
    pass


class NotBijective(YBEError):
    pass


class NotLeftNonDegenerate(YBEError):
    pass


class SigFormulaMismatch(YBEError):
    pass


class LemmaViolation(YBEError):
    pass


class SizeMismatch(YBEError):
    pass


class TooLarge(YBEError):
    pass


# word_engine
class BudgetExceeded(YBEError):
    """Raised with ``bound`` (the configured budget) and ``required``"""


class NoOrderedForm(YBEError):
    pass


class ZNotInvariant(YBEError):
    pass


# cocycle
class CocycleViolation(YBEError):
    pass


class PhiIllDefined(YBEError):
    pass


class FactorizationViolation(YBEError):
    pass


# spectrum
class NotInZFamily(YBEError):
    pass


class ClosureLeavesZ(YBEError):
    pass


class StrataViolation(YBEError):
    pass


# graded_algebra
class DimensionMismatch(YBEError):
    pass


# cli_corpus
class SolutionParseError(YBEError):
    """Raised with ``location`` pointing at the offending line or field"""
