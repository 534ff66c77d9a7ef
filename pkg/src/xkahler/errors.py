"""Exception types shared across the package."""


class XkahlerError(Exception):
    """Base class for all package-specific failures."""


class IllConditioned(XkahlerError):
    """Two distinct polynomial roots are too close to separate at the
    requested tolerance; tighten the tolerance or treat them as one
    multiple root."""


class NoWindow(XkahlerError):
    """The profile polynomial admits no interval (A, B) with A >= 0,
    H(A) = 0 and H > 0 on (A, B); the coefficient set carries no positive
    increasing solution."""


class AmbiguousWindow(XkahlerError):
    """More than one admissible interval exists and the caller did not
    select one."""

    def __init__(self, windows):
        self.windows = tuple(windows)
        super().__init__(
            f"{len(self.windows)} admissible windows found; pass window_index "
            f"to select one: {self.windows}"
        )


class Unclassifiable(XkahlerError):
    """The coefficient configuration matches a case the classification
    rules out; the message names the violated condition."""

    def __init__(self, condition: str):
        self.condition = condition
        super().__init__(condition)


class OutOfWindow(XkahlerError):
    """Anchor value g* lies outside the admissible interval (A, B)."""


class StepUnderflow(XkahlerError):
    """The adaptive integrator collapsed its step below 1e-14; the caller
    should switch to asymptotic handling near the endpoint."""


class InsufficientDecay(XkahlerError):
    """The solver could not approach the endpoint closely enough to fit an
    asymptotic law."""


class ConstraintViolation(XkahlerError):
    """A named inequality required by a metric family does not hold."""

    def __init__(self, condition: str):
        self.condition = condition
        super().__init__(condition)


class NoSolutionFound(XkahlerError):
    """A bounded parameter search exhausted its iterations without meeting
    the closing conditions."""


class InconsistentEndpoints(XkahlerError):
    """The requested endpoint pairing is impossible (g is strictly
    increasing, so a divisor at the origin cannot meet a smooth point at
    infinity)."""
