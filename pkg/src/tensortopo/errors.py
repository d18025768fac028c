"""Exception types shared across the package."""

from __future__ import annotations


class TensorTopoError(Exception):
    """Base class for all package-specific errors."""


class ToleranceError(TensorTopoError):
    """A numerical read is too ambiguous to act on (margin/gap failure)."""


class DegenerateError(TensorTopoError):
    """The requested decomposition does not exist over the requested field.

    Typical case: a real 2x2 slice pencil whose eigenvalues form a complex
    conjugate pair, so no real rank-2 decomposition exists.
    """


class DifferentComponents(TensorTopoError):
    """Two points certifiably (or conjecturally) lie in distinct components.

    Carries the two component labels so callers can report them. ``conjectural``
    is True when the separation relies on an unsettled parity argument rather
    than a proven invariant.
    """

    def __init__(self, label_a: str, label_b: str, detail: str = "",
                 conjectural: bool = False):
        self.label_a = label_a
        self.label_b = label_b
        self.detail = detail
        self.conjectural = conjectural
        msg = f"endpoints carry different component labels: {label_a} vs {label_b}"
        if detail:
            msg += f" ({detail})"
        if conjectural:
            msg += " [conjectural separation]"
        super().__init__(msg)


class RetryExhausted(TensorTopoError):
    """Detour retries hit the recursion depth cap without a verified path."""


class UnsupportedStratumError(TensorTopoError):
    """No sampler/classifier/connector is implemented for this stratum."""


class StratumSyntaxError(TensorTopoError):
    """A stratum descriptor failed to parse. Carries the character position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"stratum descriptor error at position {position}: {message}")
