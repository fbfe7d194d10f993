"""Exception hierarchy shared across the compiler pipeline."""


class DiscocircError(Exception):
    """Base class for all pipeline errors."""


class FormatError(DiscocircError):
    """Malformed interchange or lexicon input."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class InvalidDiagram(DiscocircError):
    """A pregroup diagram failed validation (illegal or crossing cups)."""


class NoParse(DiscocircError):
    """The mini parser found no type assignment reducing to a sentence."""


class UnresolvedPronoun(DiscocircError):
    """A pronoun has no feature-compatible antecedent."""


class EmptySentence(DiscocircError):
    """All nouns of a sentence were filtered out and no body remains."""


class ChainMismatch(DiscocircError):
    """A mention references a coreference chain that does not exist."""


class UnexpandedFrame(DiscocircError):
    """A frame survived into a stage that requires frame-free diagrams."""


class CapExceeded(DiscocircError):
    """A circuit exceeds the simulator's qubit cap."""


class ZeroNorm(DiscocircError):
    """Postselection annihilated the state (success probability ~ 0)."""


class UnboundSymbol(DiscocircError):
    """A circuit symbol has no value bound at simulation time."""


class UntracedWire(DiscocircError):
    """A frame wire could not be traced back to a source noun."""
