"""Exception types shared across the library."""


class QsolvError(Exception):
    """Base class for all qsolv errors."""


class ZeroDenominator(QsolvError):
    """Raised when a scalar is constructed with a zero denominator polynomial."""


class DivisionByZero(QsolvError):
    """Raised when dividing a scalar (or element) by the zero scalar."""


class InadmissiblePoint(QsolvError):
    """A parameter assignment makes a required denominator vanish.

    ``denominator`` carries a printable description of the vanishing
    expression when known.
    """

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class ZeroElement(QsolvError):
    """An operation that needs a nonzero algebra element received zero."""


class ParseError(QsolvError):
    """Syntax error in the scalar/element text grammar or a structured file."""

    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" at line {line}, column {col}"
        super().__init__(message + loc)
        self.line = line
        self.col = col


class SpecViolation(QsolvError):
    """Multiparameter data breaks the compatibility constraints p_ij q_ij = c^sgn(j-i)."""


class StageShapeViolation(QsolvError):
    """Localization requested at an index that is not a valid pivot."""


class ValidationFailed(QsolvError):
    """A presentation failed validate(); diagnostics list the violations."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


class Inconsistent(QsolvError):
    """A presentation failed the overlap (diamond) check.

    ``counterexample`` is a PbwCounterexample with the offending triple and
    the two distinct normal forms, when available.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class FactorizationGap(QsolvError):
    """A minimal-polynomial root matched none of the annihilator candidates."""


class InvalidJordanPair(QsolvError):
    """The pair (u, v, alpha) fails Ad u = alpha*u or Ad v = u + alpha*v."""


class ZeroWitness(QsolvError):
    """A Weyl-criterion witness contains a zero element."""


class RebaseFailure(QsolvError):
    """Triangular substitution onto the new generators did not terminate."""


class UnknownName(QsolvError):
    """Unknown catalog entry name."""


class WeylDetected(QsolvError):
    """The adjoint action has a repeated eigenvalue; a Weyl algebra embeds.

    ``certificate`` is the verified WeylCertificate for the Jordan pair.
    """

    def __init__(self, message, certificate):
        super().__init__(message)
        self.certificate = certificate
