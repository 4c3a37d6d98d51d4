"""Rule-of-thumb oral-drug filters (Lipinski, Veber, Egan)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from patchmol.chem.descriptors import Descriptors


@dataclass(frozen=True)
class AdmetRules:
    mw_max: float = 500.0
    logp_max: float = 5.0
    hbd_max: int = 5
    hba_max: int = 10
    lipinski_max_violations: int = 1
    rotb_max: int = 10
    tpsa_max: float = 140.0
    egan_logp_max: float = 5.88
    egan_tpsa_max: float = 131.6

    def __post_init__(self):
        for k, v in asdict(self).items():
            if k != "lipinski_max_violations" and not v > 0:
                raise ValueError(f"{k} must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AdmetResult:
    lipinski_violations: int
    lipinski: bool
    veber: bool
    egan: bool

    @property
    def all_pass(self) -> bool:
        return self.lipinski and self.veber and self.egan


def admet_flags(d: Descriptors, rules: AdmetRules = AdmetRules()) -> AdmetResult:
    v = (
        int(d.mol_weight > rules.mw_max)
        + int(d.logp > rules.logp_max)
        + int(d.hbd > rules.hbd_max)
        + int(d.hba > rules.hba_max)
    )
    return AdmetResult(
        lipinski_violations=v,
        lipinski=v <= rules.lipinski_max_violations,
        veber=d.rotatable_bonds <= rules.rotb_max and d.tpsa <= rules.tpsa_max,
        egan=d.logp <= rules.egan_logp_max and d.tpsa <= rules.egan_tpsa_max,
    )


def admet_fast_pass(descs, rules: AdmetRules = AdmetRules()):
    """Per-molecule flags and the fraction passing each rule family.

    Returns
    -------
    flags : list of AdmetResult
    summary : dict with keys lipinski, veber, egan, all and n
    """
    flags = [admet_flags(d, rules) for d in descs]
    n = len(flags)

    def rate(attr):
        return sum(getattr(f, attr) for f in flags) / n if n else 0.0

    summary = {
        "n": n,
        "lipinski": rate("lipinski"),
        "veber": rate("veber"),
        "egan": rate("egan"),
        "all": rate("all_pass"),
    }
    return flags, summary
