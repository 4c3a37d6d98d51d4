"""Aggregator configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from patchmol.chem.elements import ELEMENTS

ELEMENT_CHANNELS = ("C", "N", "O", "F")


def _default_caps() -> dict[str, int]:
    return {"C": 3, "N": 3, "O": 2, "F": 1}


@dataclass(frozen=True)
class AggregatorConfig:
    """Knobs of the patch-to-molecule assembly.

    Attributes
    ----------
    tau : float
        Embedding-distance threshold for proposing bonds.
    ring_slack : float
        Multiplier on ``tau`` within which missing six-cycle edges may be added.
    degree_caps : dict
        Build-time heavy-atom degree cap per element.
    knn_k : int
        Neighbour count of the auxiliary ring-detection graph.
    double_quota : int
        Maximum number of bonds upgraded to order 2 per molecule.
    ring_bond_preference : float
        Distance bonus subtracted from ring bonds when ranking upgrades.
    score_weights : tuple
        ``(w_qed, w_sa, w_logp, gamma)`` of the candidate score.
    min_atoms, min_bonds : int
        Minimum size of an accepted molecule.
    eps_act : float
        A row is an atom when its largest deviation from 0.5 exceeds this.
    allow_cumulated : bool
        Permit an atom to carry two double bonds.
    min_double_ring_size : int
        Double bonds are not placed on bonds whose smallest ring is shorter.
    coord_window : tuple
        Bond window of the coordinate route, in units of the median
        nearest-neighbour distance.
    element_bias : tuple
        Added to the four element channels before the argmax.
    """

    tau: float = 0.35
    ring_slack: float = 1.2
    degree_caps: dict = field(default_factory=_default_caps)
    knn_k: int = 4
    double_quota: int = 3
    ring_bond_preference: float = 0.05
    score_weights: tuple = (1.0, 0.2, 0.2, 5.0)
    min_atoms: int = 2
    min_bonds: int = 1
    eps_act: float = 0.15
    allow_cumulated: bool = False
    min_double_ring_size: int = 5
    coord_window: tuple = (0.6, 1.8)
    element_bias: tuple = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be > 0")
        if self.ring_slack < 1.0:
            raise ValueError("ring_slack must be >= 1")
        caps = dict(self.degree_caps)
        for sym in ELEMENT_CHANNELS:
            if sym not in caps:
                raise ValueError(f"degree_caps lacks {sym}")
            if not 1 <= int(caps[sym]) <= ELEMENTS[sym].max_valence:
                raise ValueError(f"cap for {sym} must lie in [1, {ELEMENTS[sym].max_valence}]")
        object.__setattr__(self, "degree_caps", {s: int(caps[s]) for s in ELEMENT_CHANNELS})
        if self.double_quota < 0:
            raise ValueError("double_quota must be >= 0")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if len(self.score_weights) != 4:
            raise ValueError("score_weights needs (w_qed, w_sa, w_logp, gamma)")
        object.__setattr__(self, "score_weights", tuple(float(w) for w in self.score_weights))
        lo, hi = self.coord_window
        if not 0 <= lo < hi:
            raise ValueError("coord_window must satisfy 0 <= lo < hi")
        object.__setattr__(self, "coord_window", (float(lo), float(hi)))
        if len(self.element_bias) != 4:
            raise ValueError("element_bias needs four entries")
        object.__setattr__(self, "element_bias", tuple(float(b) for b in self.element_bias))
        if self.eps_act < 0 or self.min_atoms < 1 or self.min_bonds < 0:
            raise ValueError("eps_act >= 0, min_atoms >= 1 and min_bonds >= 0 are required")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["score_weights"] = list(self.score_weights)
        d["coord_window"] = list(self.coord_window)
        d["element_bias"] = list(self.element_bias)
        return d
