"""Weighted distribution of the sector Rabi frequencies.

Each difference ``d`` oscillates at ``kappa(d) = sqrt((J0 d - eps)^2 + g^2)``
with probability ``w(d)``.  Two differences share a frequency exactly when
``d + d' = 2 eps / J0``; such pairs are merged into one line.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from .errors import DomainError
from .model import ModelParams
from .partition import DifferenceWeights

INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumLine:
    kappa: float
    weight: float
    contributors: tuple


@dataclass(frozen=True)
class SpectrumSummary:
    kappa_min: float
    kappa_mode: float
    total_weight: float
    effective_width: float
    mean_kappa: float


def mirror_index(params: ModelParams):
    """The integer ``2 eps / J0`` if it is one (within ``INTEGER_TOL``), else ``None``."""
    if params.j0 == 0.0:
        return None
    ratio = 2.0 * params.epsilon / params.j0
    nearest = round(ratio)
    if abs(ratio - nearest) <= INTEGER_TOL:
        return int(nearest)
    return None


def frequency_spectrum(params: ModelParams, weights: DifferenceWeights) -> List[SpectrumLine]:
    """Lines sorted by ascending ``kappa``; zero-weight differences are skipped."""
    offsets = weights.offsets
    w = np.asarray(weights.weights)

    if params.j0 == 0.0:
        support = tuple(int(d) for d, x in zip(offsets, w) if x > 0)
        return [SpectrumLine(params.rabi_frequency, float(np.sum(w)), support)]

    mirror = mirror_index(params)
    groups = {}
    for d, x in zip(offsets.tolist(), w.tolist()):
        if x <= 0.0:
            continue
        key = d if mirror is None else min(d, mirror - d)
        groups.setdefault(key, []).append((d, x))

    lines = []
    for key, members in groups.items():
        members.sort()
        kappa = math.hypot(params.j0 * key - params.epsilon, params.g)
        weight = math.fsum(x for _, x in members)
        lines.append(SpectrumLine(kappa, weight, tuple(d for d, _ in members)))
    lines.sort(key=lambda line: (line.kappa, line.contributors[0]))
    return lines


def spectrum_summary(lines: Sequence[SpectrumLine]) -> SpectrumSummary:
    if not lines:
        raise DomainError("empty spectrum")
    kappa = np.array([line.kappa for line in lines])
    weight = np.array([line.weight for line in lines])
    total = float(np.sum(weight))
    mean = float(np.sum(weight * kappa) / total)
    var = float(np.sum(weight * (kappa - mean) ** 2) / total)
    return SpectrumSummary(
        kappa_min=float(kappa.min()),
        kappa_mode=float(kappa[int(np.argmax(weight))]),
        total_weight=total,
        effective_width=math.sqrt(max(var, 0.0)),
        mean_kappa=mean,
    )


def histogram(lines: Sequence[SpectrumLine], bin_width: float):
    """Bin line weights on a grid of width ``bin_width`` starting at the lowest line."""
    if bin_width <= 0:
        raise DomainError("bin width must be positive")
    if not lines:
        return np.zeros(0), np.zeros(0)
    kappa = np.array([line.kappa for line in lines])
    weight = np.array([line.weight for line in lines])
    start = kappa.min()
    idx = np.floor((kappa - start) / bin_width).astype(int)
    totals = np.bincount(idx, weights=weight)
    centres = start + (np.arange(len(totals)) + 0.5) * bin_width
    return centres, totals


def line_for(lines: Iterable[SpectrumLine], d: int) -> SpectrumLine:
    for line in lines:
        if d in line.contributors:
            return line
    raise KeyError(d)


def write_spectrum_csv(path, lines: Sequence[SpectrumLine], g: float = 1.0):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kappa_over_g", "weight", "contributors"])
        for line in lines:
            kappa = line.kappa / g if g else line.kappa
            writer.writerow([repr(kappa), repr(line.weight), ";".join(str(d) for d in line.contributors)])
