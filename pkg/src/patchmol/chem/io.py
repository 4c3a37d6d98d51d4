"""SMILES text files and descriptor CSV tables."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from patchmol.chem.canon import canonical_smiles
from patchmol.chem.descriptors import DESCRIPTOR_COLUMNS, Descriptors
from patchmol.chem.graph import MolGraph
from patchmol.chem.sanitize import sanitize
from patchmol.chem.smiles import parse_smiles
from patchmol.errors import PatchmolError

log = logging.getLogger(__name__)


def mol_from_smiles(text: str) -> MolGraph:
    """Parse and sanitize in one step."""
    return sanitize(parse_smiles(text))


def try_mol(text: str) -> MolGraph | None:
    try:
        return mol_from_smiles(text)
    except (PatchmolError, ValueError):
        return None


@dataclass
class SmilesFile:
    smiles: list[str]
    mols: list[MolGraph]
    skipped: list[tuple[int, str]] = field(default_factory=list)


def read_smiles_lines(lines: Iterable[str]) -> SmilesFile:
    """Parse one molecule per line; blank and ``#`` lines are ignored.

    Malformed lines are skipped and reported in ``skipped`` as
    ``(line_number, text)``.
    """
    out = SmilesFile([], [])
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        text = text.split()[0]
        m = try_mol(text)
        if m is None:
            out.skipped.append((lineno, text))
            log.warning("skipping unparseable SMILES on line %d: %s", lineno, text)
            continue
        out.smiles.append(text)
        out.mols.append(m)
    return out


def read_smiles_file(path: str | Path) -> SmilesFile:
    with open(path, encoding="utf-8") as fh:
        return read_smiles_lines(fh)


def canonical_or_none(text: str) -> str | None:
    m = try_mol(text)
    return None if m is None else canonical_smiles(m)


def descriptors_csv(rows: Iterable[tuple[str, Descriptors]]) -> str:
    """CSV text with a ``smiles`` column followed by the descriptor columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("smiles",) + DESCRIPTOR_COLUMNS)
    for smi, d in rows:
        w.writerow((smi,) + tuple(_fmt(v) for v in d.as_row()))
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(round(v, 10))
    return str(v)
