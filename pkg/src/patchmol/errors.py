"""Exception types shared across the package."""

from __future__ import annotations


class PatchmolError(Exception):
    """Base class for all package errors."""


class SmilesSyntaxError(PatchmolError, ValueError):
    """Malformed or unsupported SMILES text.

    Attributes
    ----------
    offset : int
        Byte offset of the offending token in the input string.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ValenceError(PatchmolError, ValueError):
    """An atom's bond-order sum exceeds its element's maximum valence."""

    def __init__(self, atom_index: int, valence: int, max_valence: int):
        super().__init__(
            f"atom {atom_index} has valence {valence} > max {max_valence}"
        )
        self.atom_index = atom_index


class AromaticityError(PatchmolError, ValueError):
    """An atom flagged aromatic lies in no valid aromatic ring."""

    def __init__(self, atom_index: int):
        super().__init__(f"atom {atom_index} is flagged aromatic but lies in no aromatic ring")
        self.atom_index = atom_index


class WidthMismatch(PatchmolError, ValueError):
    """Fingerprints of different widths were compared."""


class ShapeMismatch(PatchmolError, ValueError):
    """An array argument has the wrong shape."""


class DegenerateInput(PatchmolError, ValueError):
    """Input too small or too degenerate for the requested statistic."""


class InsufficientInput(PatchmolError, ValueError):
    """Not enough items to compute a pairwise statistic."""


class EmptyGraph(PatchmolError, ValueError):
    """A graph with no atoms was passed where at least one is required."""


class EmptyBatch(PatchmolError, ValueError):
    """An empty batch was passed to a training step."""


class EmptyList(PatchmolError, ValueError):
    """An empty candidate list was passed to a selection routine."""


class GenerationFailure(PatchmolError, RuntimeError):
    """No sanitizable candidate molecule could be assembled from a patch."""
