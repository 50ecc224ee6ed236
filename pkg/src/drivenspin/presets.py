"""Named run configurations for the standard figure set.

Energies are in units of the drive strength g; times are g*t.  Each entry
holds RunConfig fields plus ``kind`` (which command renders it).  Physical
parameters are fixed per figure; sampling grids are a free choice.
"""

from __future__ import annotations

import math

_R10 = math.sqrt(10.0)

_FIG1_GRID = {"t_start": 0.0, "t_end": 50.0, "points": 2000}
_FIG2B_GRID = {"t_start": 0.0, "t_end": 100.0, "points": 2000}
_FIG5_GRID = {"t_start": 0.0, "t_end": 300.0, "points": 3001}

PRESETS = {
    # fig1: resonance, J0 = 0.05 g, initial |1>
    "fig1a": dict(kind="evolve", epsilon=0.0, j0=0.05, omega=2.0, state="up", **_FIG1_GRID),
    "fig1b": dict(kind="evolve", epsilon=0.0, j0=0.05, omega=30.0, state="up", **_FIG1_GRID),
    # fig2a: N -> 10 N, 100 N at fixed J0' (J0 ~ 1/sqrt(N), Omega ~ N)
    "fig2a-1": dict(kind="evolve", epsilon=0.0, j0=0.1, omega=2.0, state="up", **_FIG1_GRID),
    "fig2a-10": dict(kind="evolve", epsilon=0.0, j0=0.1 / _R10, omega=20.0, state="up", **_FIG1_GRID),
    "fig2a-100": dict(kind="evolve", epsilon=0.0, j0=0.01, omega=200.0, state="up", **_FIG1_GRID),
    # fig2b: detuned, collapse and revival
    "fig2b-1": dict(kind="evolve", epsilon=0.5, j0=0.05, omega=1.0, state="up", **_FIG2B_GRID),
    "fig2b-10": dict(kind="evolve", epsilon=0.5, j0=0.05 / _R10, omega=10.0, state="up", **_FIG2B_GRID),
    "fig2b-100": dict(kind="evolve", epsilon=0.5, j0=0.005, omega=100.0, state="up", **_FIG2B_GRID),
    "fig2b-inset": dict(kind="evolve", epsilon=0.5, j0=0.05, omega=1.0, state="up", t_start=0.0, t_end=400.0, points=8001),
    # fig3: frequency distributions
    "fig3a": dict(kind="spectrum", epsilon=0.0, j0=0.05, omega=5.0, state="up"),
    "fig3a-x10": dict(kind="spectrum", epsilon=0.0, j0=0.05 / _R10, omega=50.0, state="up"),
    "fig3b": dict(kind="spectrum", epsilon=0.5, j0=0.05, omega=1.0, state="up"),
    "fig3b-x10": dict(kind="spectrum", epsilon=0.5, j0=0.05 / _R10, omega=10.0, state="up"),
    # fig5a: entropy for three initial states
    "fig5a-up": dict(kind="evolve", epsilon=1.0, j0=0.01, omega=20.0, state="up", **_FIG5_GRID),
    "fig5a-phi1": dict(kind="evolve", epsilon=1.0, j0=0.01, omega=20.0, state="phi1", **_FIG5_GRID),
    "fig5a-super": dict(kind="evolve", epsilon=1.0, j0=0.01, omega=20.0, state="phi-super", **_FIG5_GRID),
    # fig5b: entropy of |phi1> across couplings and detunings
    "fig5b-i": dict(kind="evolve", epsilon=0.0, j0=0.03, omega=20.0, state="phi1", **_FIG5_GRID),
    "fig5b-ii": dict(kind="evolve", epsilon=0.0, j0=0.01, omega=20.0, state="phi1", **_FIG5_GRID),
    "fig5b-iii": dict(kind="evolve", epsilon=1.0, j0=0.01, omega=20.0, state="phi1", **_FIG5_GRID),
    "fig5b-iv": dict(kind="evolve", epsilon=3.0, j0=0.01, omega=20.0, state="phi1", **_FIG5_GRID),
}

FIGURES = {
    "fig1a": ["fig1a"],
    "fig1b": ["fig1b"],
    "fig2a": ["fig2a-1", "fig2a-10", "fig2a-100"],
    "fig2b": ["fig2b-1", "fig2b-10", "fig2b-100", "fig2b-inset"],
    "fig3a": ["fig3a", "fig3a-x10"],
    "fig3b": ["fig3b", "fig3b-x10"],
    "fig5a": ["fig5a-up", "fig5a-phi1", "fig5a-super"],
    "fig5b": ["fig5b-i", "fig5b-ii", "fig5b-iii", "fig5b-iv"],
}


def resolve(name: str):
    """Preset names making up figure ``name`` (or the single preset itself)."""
    if name in FIGURES:
        return list(FIGURES[name])
    if name in PRESETS:
        return [name]
    raise KeyError(name)
