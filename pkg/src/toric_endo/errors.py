"""Exception hierarchy.

Every error derives from :class:`ToricEndoError`. Input problems (malformed
fans, bad JSON, unmet preconditions) are ``ValueError`` subclasses so callers
can treat them uniformly; the CLI maps them to exit status 2.
"""

from __future__ import annotations


class ToricEndoError(Exception):
    pass


class InputError(ToricEndoError, ValueError):
    pass


class ParseError(InputError):
    pass


class VariableMismatch(InputError):
    pass


class InvalidFan(InputError):
    """A fan violates one of its structural invariants."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant
        self.detail = detail


class NonSimplicialFan(InvalidFan):
    def __init__(self, detail: str):
        super().__init__("NonSimplicialFan", detail)


class InconsistentWall(InputError):
    pass


class NotToric(InputError):
    pass


class UnboundedPolytope(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class PosetViolation(InputError):
    pass


class NonLinearImage(InputError):
    pass


class SectionNotInSpace(InputError):
    pass


class HypothesisUnmet(InputError):
    pass


class DegreeTooSmall(InputError):
    pass
