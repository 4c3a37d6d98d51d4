"""Quantitative estimate of drug-likeness from eight desirability functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

# (A, B, C, D, E, F, DMAX) per property
ADS_PARAMS = {
    "MW": (2.817065973, 392.5754953, 290.7489764, 2.419764353, 49.22325677, 65.37051707, 104.9805561),
    "ALOGP": (3.172690585, 137.8624751, 2.534937431, 4.581497897, 0.822739154, 0.576295591, 131.3186604),
    "HBA": (2.948620388, 160.4605972, 3.615294657, 4.435986202, 0.290141953, 1.300669958, 148.7763046),
    "HBD": (1.618662227, 1010.051101, 0.985094388, 0.000000001, 0.713820843, 0.920922555, 258.1632616),
    "PSA": (1.876861559, 125.2232657, 62.90773554, 87.83366614, 12.01999824, 28.51324732, 104.5686167),
    "ROTB": (0.010000000, 272.4121427, 2.558379970, 1.565547684, 1.271567166, 2.758063707, 105.4420403),
    "AROM": (3.217788970, 957.7374108, 2.274627939, 0.000000001, 1.317690384, 0.375760881, 312.3372610),
    "ALERTS": (0.010000000, 1199.094025, -0.09002883, 0.000000001, 0.185904477, 0.875193782, 417.7253140),
}
PROPERTY_ORDER = ("MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS")
WEIGHT_MEAN = (0.66, 0.46, 0.05, 0.61, 0.06, 0.65, 0.48, 0.95)


@dataclass(frozen=True)
class QEDProperties:
    MW: float
    ALOGP: float
    HBA: int
    HBD: int
    PSA: float
    ROTB: int
    AROM: int
    ALERTS: int


def ads(x: float, params) -> float:
    """Asymmetric double sigmoid, normalized by its maximum."""
    a, b, c, d, e, f, dmax = params
    exp1 = 1.0 + math.exp(-1.0 * (x - c + d / 2.0) / e)
    exp2 = 1.0 + math.exp(-1.0 * (x - c - d / 2.0) / f)
    dx = a + b / exp1 * (1.0 - 1.0 / exp2)
    return dx / dmax


def qed_from_properties(p: QEDProperties, weights=WEIGHT_MEAN) -> float:
    values = [getattr(p, name) for name in PROPERTY_ORDER]
    d = [ads(float(v), ADS_PARAMS[name]) for v, name in zip(values, PROPERTY_ORDER)]
    t = sum(w * math.log(x) for w, x in zip(weights, d))
    return min(1.0, max(0.0, math.exp(t / sum(weights))))
