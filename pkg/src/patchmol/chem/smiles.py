"""SMILES reader and writer for the organic subset {C, N, O, F} without brackets."""

from __future__ import annotations

from typing import Sequence

from patchmol.chem.graph import Atom, Bond, MolGraph
from patchmol.errors import SmilesSyntaxError

_ALIPHATIC = {"C", "N", "O", "F"}
_AROMATIC = {"c": "C", "n": "N", "o": "O"}
_BONDS = {"-": (1, False), "=": (2, False), ":": (1, True)}


def parse_smiles(text: str) -> MolGraph:
    """Parse SMILES into an unsanitized graph.

    Implicit hydrogens are left at zero; call ``sanitize`` to assign them.
    Aromatic flags are kept exactly as written.

    Raises
    ------
    SmilesSyntaxError
        On unbalanced parentheses, dangling ring closures or unsupported
        tokens. ``offset`` is the byte offset of the problem.
    """
    if not text:
        raise SmilesSyntaxError("empty SMILES", 0)
    raw = text.encode("utf-8")
    atoms: list[Atom] = []
    bonds: dict[tuple[int, int], Bond] = {}
    branch_stack: list[int] = []
    open_rings: dict[int, tuple[int, tuple[int, bool] | None, int]] = {}
    prev: int | None = None
    pending: tuple[int, bool] | None = None
    pending_at = 0
    pos = 0
    n = len(raw)

    def add_bond(a: int, b: int, spec, at: int):
        if a == b:
            raise SmilesSyntaxError("ring closure onto the same atom", at)
        key = (min(a, b), max(a, b))
        if key in bonds:
            raise SmilesSyntaxError("duplicate bond", at)
        if spec is None:
            if atoms[a].aromatic and atoms[b].aromatic:
                spec = (1, True)
            else:
                spec = (1, False)
        order, arom = spec
        bonds[key] = Bond(key[0], key[1], order=order, aromatic=arom)

    while pos < n:
        ch = chr(raw[pos])
        if ch in _ALIPHATIC or ch in _AROMATIC:
            if ch == "C" and pos + 1 < n and chr(raw[pos + 1]) == "l":
                raise SmilesSyntaxError("unsupported element 'Cl'", pos)
            if ch in _AROMATIC:
                atoms.append(Atom(_AROMATIC[ch], aromatic=True))
            else:
                atoms.append(Atom(ch))
            idx = len(atoms) - 1
            if prev is not None:
                add_bond(prev, idx, pending, pending_at)
            elif pending is not None:
                raise SmilesSyntaxError("bond without a preceding atom", pending_at)
            prev = idx
            pending = None
            pos += 1
        elif ch in _BONDS:
            if pending is not None:
                raise SmilesSyntaxError("two consecutive bond symbols", pos)
            if prev is None:
                raise SmilesSyntaxError("bond without a preceding atom", pos)
            pending = _BONDS[ch]
            pending_at = pos
            pos += 1
        elif ch == "(":
            if prev is None or pending is not None:
                raise SmilesSyntaxError("branch without a preceding atom", pos)
            if pos + 1 < n and chr(raw[pos + 1]) == ")":
                raise SmilesSyntaxError("empty branch", pos)
            branch_stack.append(prev)
            pos += 1
        elif ch == ")":
            if not branch_stack:
                raise SmilesSyntaxError("unbalanced ')'", pos)
            if pending is not None:
                raise SmilesSyntaxError("dangling bond before ')'", pending_at)
            prev = branch_stack.pop()
            pos += 1
        elif ch.isdigit() or ch == "%":
            start = pos
            if ch == "%":
                digits = raw[pos + 1 : pos + 3].decode("ascii", "replace")
                if len(digits) != 2 or not digits.isdigit():
                    raise SmilesSyntaxError("malformed '%nn' ring closure", pos)
                num = int(digits)
                pos += 3
            else:
                num = int(ch)
                pos += 1
            if prev is None:
                raise SmilesSyntaxError("ring closure without a preceding atom", start)
            if num in open_rings:
                other, spec, _ = open_rings.pop(num)
                if spec is not None and pending is not None and spec != pending:
                    raise SmilesSyntaxError("conflicting ring-closure bond symbols", start)
                add_bond(other, prev, pending if pending is not None else spec, start)
            else:
                open_rings[num] = (prev, pending, start)
            pending = None
        elif ch == ".":
            if pending is not None:
                raise SmilesSyntaxError("dangling bond before '.'", pending_at)
            if prev is None:
                raise SmilesSyntaxError("'.' without a preceding atom", pos)
            prev = None
            pos += 1
        else:
            raise SmilesSyntaxError(f"unsupported token {ch!r}", pos)

    if pending is not None:
        raise SmilesSyntaxError("dangling bond at end of input", pending_at)
    if branch_stack:
        raise SmilesSyntaxError("unbalanced '('", n)
    if open_rings:
        first = min(v[2] for v in open_rings.values())
        raise SmilesSyntaxError("dangling ring closure", first)
    ordered = sorted(bonds.values(), key=lambda b: b.key)
    return MolGraph(atoms, ordered, sanitized=False)


def _bond_symbol(g: MolGraph, b: Bond) -> str:
    if b.aromatic:
        return ""
    if b.order == 2:
        return "="
    if g.atoms[b.i].aromatic and g.atoms[b.j].aromatic:
        return "-"
    return ""


def _atom_symbol(at: Atom) -> str:
    return at.symbol.lower() if at.aromatic else at.symbol


def write_smiles(g: MolGraph, ranks: Sequence[int]) -> str:
    """Write SMILES by depth-first traversal ordered by ``ranks``.

    Each component starts from its lowest-ranked atom; neighbours are
    visited in ascending rank, all but the last as branches.
    """
    n = g.n_atoms
    if n == 0:
        return ""
    nbr_sorted = [sorted(g.neighbors[a], key=lambda x: ranks[x]) for a in range(n)]

    # pass 1: spanning forest and ring-closure bonds
    visited = [False] * n
    order: list[int] = []
    parent = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    closures_at: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    starts = []
    for s in sorted(range(n), key=lambda x: ranks[x]):
        if visited[s]:
            continue
        starts.append(s)
        stack = [(s, -1)]
        while stack:
            a, p = stack.pop()
            if visited[a]:
                continue
            visited[a] = True
            parent[a] = p
            order.append(a)
            if p >= 0:
                children[p].append(a)
            for nb in reversed(nbr_sorted[a]):
                if not visited[nb]:
                    stack.append((nb, a))

    # ring closures: non-tree bonds, registered at the atom visited first
    pos_in_order = {a: k for k, a in enumerate(order)}
    for b in g.bonds:
        if parent[b.i] == b.j or parent[b.j] == b.i:
            continue
        first, second = (b.i, b.j) if pos_in_order[b.i] < pos_in_order[b.j] else (b.j, b.i)
        closures_at[first].append((second, 0))
        closures_at[second].append((first, 1))

    out: list[str] = []
    free_digits: list[int] = []
    next_digit = [1]
    ring_digit: dict[tuple[int, int], int] = {}

    def take_digit() -> int:
        if free_digits:
            free_digits.sort()
            return free_digits.pop(0)
        d = next_digit[0]
        next_digit[0] += 1
        return d

    def digit_text(d: int) -> str:
        return str(d) if d < 10 else f"%{d:02d}"

    def emit(a: int):
        out.append(_atom_symbol(g.atoms[a]))
        # closings first (partner already open), then openings, each by partner rank
        closes = sorted((p for p, kind in closures_at[a] if kind == 1), key=lambda x: ranks[x])
        opens = sorted((p for p, kind in closures_at[a] if kind == 0), key=lambda x: ranks[x])
        for p in closes:
            key = (min(a, p), max(a, p))
            d = ring_digit.pop(key)
            out.append(digit_text(d))
            free_digits.append(d)
        for p in opens:
            key = (min(a, p), max(a, p))
            d = take_digit()
            ring_digit[key] = d
            out.append(_bond_symbol(g, g.bond_between(a, p)) + digit_text(d))

    def walk(root: int):
        # explicit stack of (atom, is_branch_open) events
        stack: list = [("atom", root)]
        while stack:
            kind, val = stack.pop()
            if kind == "close":
                out.append(")")
                continue
            if kind == "open":
                out.append("(")
                continue
            if kind == "bond":
                out.append(val)
                continue
            a = val
            emit(a)
            kids = children[a]
            events = []
            for c_idx, c in enumerate(kids):
                sym = _bond_symbol(g, g.bond_between(a, c))
                if c_idx < len(kids) - 1:
                    events.append([("open", None), ("bond", sym), ("atom", c)])
                    events.append([("close", None)])
                else:
                    events.append([("bond", sym), ("atom", c)])
            flat = [e for grp in events for e in grp]
            # the "close" marker must follow the whole branch subtree, so push
            # groups in reverse, with the branch body below its close marker
            for e in reversed(flat):
                stack.append(e)

    for k, s in enumerate(starts):
        if k:
            out.append(".")
        walk(s)
    return "".join(out)
