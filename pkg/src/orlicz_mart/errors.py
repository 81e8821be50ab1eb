"""Exception hierarchy shared by every module."""


class OrliczMartError(Exception):
    """Base class for all library errors."""


class FiltrationError(OrliczMartError, ValueError):
    pass


class NonRefining(FiltrationError):
    pass


class NotAPartition(FiltrationError):
    pass


class ZeroProbability(FiltrationError):
    pass


class BadTotalMass(FiltrationError):
    pass


class NontrivialRoot(FiltrationError):
    pass


class NonSingletonLeaves(FiltrationError):
    pass


class LevelOutOfRange(OrliczMartError, IndexError):
    pass


class DepthTooLarge(OrliczMartError, ValueError):
    pass


class NegativeInput(OrliczMartError, ValueError):
    pass


class InvalidOrliczFunction(OrliczMartError, ValueError):
    pass


class IndexUnbounded(OrliczMartError, ArithmeticError):
    pass


class NonCenteredTerminal(OrliczMartError, ValueError):
    pass


class FiltrationMismatch(OrliczMartError, ValueError):
    pass


class NotPredictable(OrliczMartError, ValueError):
    pass


class NotAStoppingTime(OrliczMartError, ValueError):
    pass


class LambdaTooSmall(OrliczMartError, ValueError):
    pass


class TooManyStoppingTimes(OrliczMartError, RuntimeError):
    pass


class BudgetGridOverflow(OrliczMartError, RuntimeError):
    pass


class InadmissibleControl(OrliczMartError, ValueError):
    pass


class NonconvergentTail(OrliczMartError, ArithmeticError):
    pass


class DegenerateDenominator(OrliczMartError, ZeroDivisionError):
    pass


class BudgetViolation(OrliczMartError, ValueError):
    pass


class ZeroGap(OrliczMartError, ValueError):
    pass


class HypothesisViolated(OrliczMartError, ValueError):
    pass


class ConfigParse(OrliczMartError, ValueError):
    pass
