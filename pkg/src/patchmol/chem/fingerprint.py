"""Hashed circular (Morgan) fingerprints and Tanimoto similarity."""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import MolGraph
from patchmol.errors import WidthMismatch


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-width bit vector stored as a Python integer bitset."""

    value: int
    width: int = 2048
    radius: int = 2

    def __post_init__(self):
        if self.width <= 0 or self.width & (self.width - 1):
            raise ValueError(f"width must be a power of two, got {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise ValueError("bit value out of range for width")

    @property
    def popcount(self) -> int:
        return self.value.bit_count()

    def on_bits(self) -> list[int]:
        v = self.value
        out = []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def to_array(self) -> np.ndarray:
        """0/1 uint8 array of length ``width``; index k is bit k."""
        arr = np.zeros(self.width, dtype=np.uint8)
        arr[self.on_bits()] = 1
        return arr

    def to_hex(self) -> str:
        return format(self.value, f"0{self.width // 4}x")

    @classmethod
    def from_hex(cls, text: str, radius: int = 2) -> "Fingerprint":
        return cls(int(text, 16), width=len(text) * 4, radius=radius)

    @classmethod
    def from_bits(cls, bits, width: int = 2048, radius: int = 2) -> "Fingerprint":
        v = 0
        for b in bits:
            v |= 1 << int(b)
        return cls(v, width, radius)


def _hash(*ints: int) -> int:
    data = struct.pack(f"<{len(ints)}q", *ints)
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little") >> 1


def _atom_seed(g: MolGraph, a: int, in_ring: list[bool]) -> int:
    at = g.atoms[a]
    return _hash(
        ELEMENTS[at.symbol].atomic_number,
        g.degree(a),
        at.implicit_hydrogens,
        int(at.aromatic),
        int(in_ring[a]),
    )


def morgan_fingerprint(g: MolGraph, radius: int = 2, width: int = 2048) -> Fingerprint:
    """Circular fingerprint over atom environments of radius 0..``radius``.

    Environment identifiers are built with a fixed-key BLAKE2b hash so they
    are stable across processes and platforms, then folded modulo ``width``.
    """
    in_ring = [False] * g.n_atoms
    for b in g.bonds:
        if b.in_ring:
            in_ring[b.i] = in_ring[b.j] = True
    ids = [_atom_seed(g, a, in_ring) for a in range(g.n_atoms)]
    value = 0
    for x in ids:
        value |= 1 << (x % width)
    for r in range(1, radius + 1):
        new = []
        for a in range(g.n_atoms):
            env = sorted(
                (3 if g.bonds[k].aromatic else g.bonds[k].order, ids[g.bonds[k].other(a)])
                for k in g.incident[a]
            )
            flat = [r, ids[a]]
            for code, nid in env:
                flat.extend((code, nid))
            new.append(_hash(*flat))
        ids = new
        for x in ids:
            value |= 1 << (x % width)
    return Fingerprint(value, width, radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a & b| / |a | b|, with 1.0 for two empty fingerprints."""
    if a.width != b.width:
        raise WidthMismatch(f"fingerprint widths differ: {a.width} vs {b.width}")
    union = (a.value | b.value).bit_count()
    if union == 0:
        return 1.0
    return (a.value & b.value).bit_count() / union


def fingerprint_matrix(fps) -> np.ndarray:
    """Stack fingerprints into an ``(n, width)`` uint8 array."""
    fps = list(fps)
    if not fps:
        return np.zeros((0, 0), dtype=np.uint8)
    width = fps[0].width
    out = np.zeros((len(fps), width), dtype=np.uint8)
    for k, fp in enumerate(fps):
        if fp.width != width:
            raise WidthMismatch("fingerprint widths differ within a set")
        out[k, fp.on_bits()] = 1
    return out


def tanimoto_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise Tanimoto similarities between rows of two 0/1 matrices."""
    if a.shape[1] != b.shape[1]:
        raise WidthMismatch("fingerprint widths differ")
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    inter = af @ bf.T
    union = af.sum(1)[:, None] + bf.sum(1)[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        sim = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 1.0)
    return sim
