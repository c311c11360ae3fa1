"""Cavity frequency comb, pump fields, and the coupling matrices they induce.

A pump with mode-index sum ``s`` couples every pair of comb modes whose
frequency indices add to ``s``.  ``s`` counts free spectral ranges of the
signal comb, so a pump at optical frequency w_p has ``s = w_p / FSR`` (pumps
drawn "at half their frequency" sit at ``s / 2`` on the comb axis).

In a polarized comb every frequency index carries an H and a V mode.  A pump's
interaction names the pump polarization followed by the two signal
polarizations; for signals at different frequencies the second letter applies
to the lower-frequency mode and the third to the higher one.
"""

from __future__ import annotations

import enum
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .hankel import HankelVector, matrix_to_hankel

__all__ = [
    "Polarization",
    "Interaction",
    "ModeLabel",
    "CombSpec",
    "PumpSpec",
    "CouplingMatrix",
    "PumpOutOfWindow",
    "build_coupling_from_pumps",
    "spurious_couplings",
    "load_comb_config",
    "comb_config_to_dict",
]

logger = logging.getLogger(__name__)


class PumpOutOfWindow(ValueError):
    pass


class Polarization(str, enum.Enum):
    H = "H"
    V = "V"
    NONE = "none"


_POL_ORDER = {Polarization.NONE: 0, Polarization.H: 0, Polarization.V: 1}


class Interaction(str, enum.Enum):
    UNPOLARIZED = "unpolarized"
    VHV = "VHV"
    VVH = "VVH"
    VVV = "VVV"
    HHH = "HHH"


@dataclass(frozen=True, order=True)
class ModeLabel:
    freq_index: int
    polarization: Polarization = Polarization.NONE

    def __post_init__(self):
        object.__setattr__(self, "polarization", Polarization(self.polarization))
        if self.freq_index < 1:
            raise ValueError(f"frequency index must be >= 1, got {self.freq_index}")

    def sort_key(self):
        return (self.freq_index, _POL_ORDER[self.polarization])

    def __str__(self):
        if self.polarization is Polarization.NONE:
            return str(self.freq_index)
        return f"{self.freq_index}{self.polarization.value}"


@dataclass(frozen=True)
class CombSpec:
    """Modes inside the phase-matching window ``window = (lo, hi)``, inclusive."""

    mode_count: int
    polarized: bool = False
    window: tuple[int, int] | None = None

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be >= 1")
        if self.polarized and self.mode_count % 2:
            raise ValueError("a polarized comb needs an even mode count")
        width = self.mode_count // 2 if self.polarized else self.mode_count
        window = self.window if self.window is not None else (1, width)
        window = (int(window[0]), int(window[1]))
        if window[0] < 1 or window[1] - window[0] + 1 != width:
            raise ValueError(
                f"window {window} does not hold {width} frequencies "
                f"for mode_count={self.mode_count}, polarized={self.polarized}"
            )
        object.__setattr__(self, "window", window)

    @property
    def modes(self) -> tuple[ModeLabel, ...]:
        """Canonical mode order: by frequency index, H before V."""
        lo, hi = self.window
        if not self.polarized:
            return tuple(ModeLabel(f) for f in range(lo, hi + 1))
        return tuple(
            ModeLabel(f, pol)
            for f in range(lo, hi + 1)
            for pol in (Polarization.H, Polarization.V)
        )

    def index(self, mode: ModeLabel | int) -> int:
        return self.modes.index(self._coerce(mode))

    def _coerce(self, mode: ModeLabel | int) -> ModeLabel:
        if isinstance(mode, ModeLabel):
            return mode
        if self.polarized:
            raise TypeError("polarized combs need ModeLabel targets, not bare indices")
        return ModeLabel(int(mode))


@dataclass(frozen=True)
class PumpSpec:
    freq_sum: int
    interaction: Interaction = Interaction.UNPOLARIZED
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "interaction", Interaction(self.interaction))
        object.__setattr__(self, "weight", float(self.weight))
        if self.weight == 0:
            raise ValueError("pump weight must be nonzero")

    def couples(self, a: ModeLabel, b: ModeLabel) -> bool:
        """Whether this pump couples modes ``a`` and ``b`` (order-free)."""
        if a.freq_index + b.freq_index != self.freq_sum:
            return False
        lo, hi = sorted((a, b), key=ModeLabel.sort_key)
        pols = (lo.polarization, hi.polarization)
        H, V = Polarization.H, Polarization.V
        if self.interaction is Interaction.UNPOLARIZED:
            return pols == (Polarization.NONE, Polarization.NONE)
        if self.interaction is Interaction.VVV:
            return pols == (V, V)
        if self.interaction is Interaction.HHH:
            return pols == (H, H)
        if lo.freq_index == hi.freq_index:
            # frequency-degenerate H/V pair: both cross-polarized rules apply
            return set(pols) == {H, V}
        if self.interaction is Interaction.VHV:
            return pols == (H, V)
        return pols == (V, H)


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Symmetric coupling matrix together with the mode behind each index."""

    entries: np.ndarray
    modes: tuple[ModeLabel, ...] = field(default=())

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"coupling matrix must be square, got {entries.shape}")
        if not np.array_equal(entries, entries.T):
            raise ValueError("coupling matrix must be exactly symmetric")
        if self.modes and len(self.modes) != entries.shape[0]:
            raise ValueError("mode list does not match matrix size")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, CouplingMatrix):
            return NotImplemented
        return self.modes == other.modes and np.array_equal(self.entries, other.entries)

    def __add__(self, other: "CouplingMatrix") -> "CouplingMatrix":
        if self.modes != other.modes:
            raise ValueError("cannot add couplings over different mode sets")
        return CouplingMatrix(self.entries + other.entries, self.modes)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_hankel(self, tol: float = 1e-12) -> HankelVector:
        return matrix_to_hankel(self.entries, tol)


def _check_pump(comb: CombSpec, pump: PumpSpec):
    unpolarized = pump.interaction is Interaction.UNPOLARIZED
    if unpolarized == comb.polarized:
        kind = "polarized" if comb.polarized else "unpolarized"
        raise ValueError(
            f"pump {pump.interaction.value} cannot act on an {kind} comb"
        )


def build_coupling_from_pumps(
    comb: CombSpec, pumps: Sequence[PumpSpec]
) -> CouplingMatrix:
    """Sum each pump's weight onto every mode pair it phase-matches.

    Degenerate self-pairs (a mode coupled with itself) are dropped with a
    warning; only two-mode couplings enter the matrix.

    Raises:
        PumpOutOfWindow: a pump couples no pair of distinct in-window modes.
    """
    modes = comb.modes
    n = len(modes)
    G = np.zeros((n, n))
    for pump in pumps:
        _check_pump(comb, pump)
        hits = 0
        for i in range(n):
            if pump.couples(modes[i], modes[i]):
                logger.warning(
                    "pump s=%d phase-matches mode %s with itself; ignored",
                    pump.freq_sum,
                    modes[i],
                )
            for j in range(i + 1, n):
                if pump.couples(modes[i], modes[j]):
                    G[i, j] += pump.weight
                    G[j, i] += pump.weight
                    hits += 1
        if hits == 0:
            raise PumpOutOfWindow(
                f"pump s={pump.freq_sum} ({pump.interaction.value}) couples no "
                f"mode pair inside window {comb.window}"
            )
    return CouplingMatrix(G, modes)


def spurious_couplings(
    comb: CombSpec,
    pumps: Sequence[PumpSpec],
    target: Iterable[ModeLabel | int],
) -> list[tuple[ModeLabel, ModeLabel, PumpSpec]]:
    """Pump-induced couplings that cross the boundary of ``target``.

    Each entry is ``(lower_mode, higher_mode, pump)``; the list is sorted by
    frequency index.  An empty list means the target set is closed under the
    pumps.
    """
    inside = {comb._coerce(m) for m in target}
    modes = comb.modes
    unknown = inside.difference(modes)
    if unknown:
        raise ValueError(f"target modes outside the comb: {sorted(map(str, unknown))}")
    found = []
    for pump in pumps:
        _check_pump(comb, pump)
        for i, a in enumerate(modes):
            for b in modes[i + 1 :]:
                if (a in inside) != (b in inside) and pump.couples(a, b):
                    found.append((a, b, pump))
    found.sort(key=lambda t: (t[0].sort_key(), t[1].sort_key(), t[2].freq_sum))
    return found


def load_comb_config(source) -> tuple[CombSpec, list[PumpSpec]]:
    """Read a comb + pump description from a dict, JSON text, or file path.

    Schema::

        {"modes": M, "polarized": false, "window": [lo, hi],
         "pumps": [{"sum": s, "interaction": "VVV", "weight": -1.0}, ...]}

    ``sum`` is the mode-index sum a pump phase-matches, not its optical
    frequency.  ``window``, ``polarized``, ``interaction`` and ``weight`` are
    optional.
    """
    if isinstance(source, (str, os.PathLike)):
        text = str(source)
        if not text.lstrip().startswith("{"):
            with open(source) as fh:
                text = fh.read()
        source = json.loads(text)
    polarized = bool(source.get("polarized", False))
    window = source.get("window")
    comb = CombSpec(
        int(source["modes"]), polarized, tuple(window) if window is not None else None
    )
    default = "VVV" if polarized else "unpolarized"
    pumps = [
        PumpSpec(int(p["sum"]), p.get("interaction", default), p.get("weight", 1.0))
        for p in source.get("pumps", [])
    ]
    return comb, pumps


def comb_config_to_dict(comb: CombSpec, pumps: Sequence[PumpSpec]) -> dict:
    return {
        "modes": comb.mode_count,
        "polarized": comb.polarized,
        "window": list(comb.window),
        "pumps": [
            {"sum": p.freq_sum, "interaction": p.interaction.value, "weight": p.weight}
            for p in pumps
        ],
    }
