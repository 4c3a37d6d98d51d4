"""Element table for the supported alphabet {C, N, O, F, H}."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Element:
    symbol: str
    atomic_number: int
    standard_atomic_weight: float
    max_valence: int
    default_valence: int


ELEMENTS: dict[str, Element] = {
    "H": Element("H", 1, 1.008, 1, 1),
    "C": Element("C", 6, 12.011, 4, 4),
    "N": Element("N", 7, 14.007, 3, 3),
    "O": Element("O", 8, 15.999, 2, 2),
    "F": Element("F", 9, 18.998, 1, 1),
}

HEAVY_SYMBOLS: tuple[str, ...] = ("C", "N", "O", "F")
AROMATIC_CAPABLE = frozenset({"C", "N", "O"})


def element(symbol: str) -> Element:
    try:
        return ELEMENTS[symbol]
    except KeyError:
        raise ValueError(f"unsupported element {symbol!r}") from None
