"""Hankel vectors, their bracket shorthand, and conversion to/from matrices.

A Hankel matrix is constant along every skew-diagonal, so an M x M instance is
fully described by 2M - 1 numbers.  The shorthand lists the first row, then the
top-right corner set off by slashes, then the rest of the last column::

    [0,0,0/1/0,1,0]            # 4 x 4, skew-diagonals m+n=5 and m+n=7 set
    [0_11/1/0_5,1,0_5]         # ``0_n`` is a run of n zeros
    scale=1/sqrt(2) [-1/1/1]   # optional global multiplier

Entry ``k`` (1-based) of the flattened vector sits on the skew-diagonal
``m + n = k + 1`` (1-based row/column).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "HankelVector",
    "NotHankel",
    "ShorthandSyntaxError",
    "parse_hankel_shorthand",
    "print_hankel_shorthand",
    "hankel_to_matrix",
    "matrix_to_hankel",
    "is_hankel",
]


class ShorthandSyntaxError(ValueError):
    """Malformed shorthand text; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message} at position {position}{pointer}")


class NotHankel(ValueError):
    """A matrix has a skew-diagonal that is not constant."""

    def __init__(self, diagonal: int, deviation: float):
        self.diagonal = diagonal
        self.deviation = deviation
        super().__init__(
            f"skew-diagonal {diagonal} (m+n={diagonal + 1}) varies by {deviation:.3g}"
        )


@dataclass(frozen=True)
class HankelVector:
    """The 2M - 1 skew-diagonal values of an M x M Hankel matrix."""

    top: tuple[float, ...]
    center: float
    right: tuple[float, ...]

    def __post_init__(self):
        top = tuple(float(x) for x in self.top)
        right = tuple(float(x) for x in self.right)
        if len(top) != len(right):
            raise ValueError(
                f"top and right sides differ in length ({len(top)} != {len(right)})"
            )
        values = top + (float(self.center),) + right
        if not all(math.isfinite(x) for x in values):
            raise ValueError("Hankel entries must be finite")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "right", right)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "HankelVector":
        values = [float(x) for x in values]
        if len(values) % 2 != 1:
            raise ValueError(f"need an odd number of entries, got {len(values)}")
        m = len(values) // 2
        return cls(tuple(values[:m]), values[m], tuple(values[m + 1 :]))

    @property
    def size(self) -> int:
        """Dimension M of the matrix this vector describes."""
        return len(self.top) + 1

    @property
    def values(self) -> np.ndarray:
        return np.array(self.top + (self.center,) + self.right, dtype=float)

    def __len__(self) -> int:
        return 2 * len(self.top) + 1

    def __str__(self) -> str:
        return print_hankel_shorthand(self)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(r"\d+")


class _Parser:
    """Recursive-descent parser over the raw text, tracking a cursor."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise ShorthandSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.error(f"expected {literal!r}, found {found!r}")
        self.pos += len(literal)

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if m is None:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    # document := [scale] '[' side '/' entry '/' side ']'
    def document(self) -> HankelVector:
        scale = 1.0
        if self.peek() == "s":
            scale = self.scale()
        self.expect("[")
        top = self.side()
        self.expect("/")
        center_pos = self.pos
        center = self.entry()
        if len(center) != 1:
            self.error("center entry must be a single value", center_pos)
        self.expect("/")
        right_pos = self.pos
        right = self.side()
        self.expect("]")
        if self.peek():
            self.error("unexpected trailing text")
        if len(top) != len(right):
            self.error(
                f"top has {len(top)} entries but right has {len(right)}", right_pos
            )
        return HankelVector(
            tuple(x * scale for x in top),
            center[0] * scale,
            tuple(x * scale for x in right),
        )

    # scale := 'scale' '=' (number | '1' '/' 'sqrt' '(' integer ')')
    def scale(self) -> float:
        self.expect("scale")
        self.expect("=")
        start = self.pos
        value = float(self.match(_NUMBER, "a number"))
        if self.peek() == "/":
            if value != 1.0:
                self.error("only 1/sqrt(k) is accepted as a fractional scale", start)
            self.expect("/")
            self.expect("sqrt")
            self.expect("(")
            k_pos = self.pos
            k = int(self.match(_INTEGER, "a positive integer"))
            if k == 0:
                self.error("sqrt argument must be positive", k_pos)
            self.expect(")")
            return 1.0 / math.sqrt(k)
        return value

    # side := empty | entry (',' entry)*
    def side(self) -> list[float]:
        if self.peek() in ("/", "]"):
            return []
        values = self.entry()
        while self.peek() == ",":
            self.expect(",")
            values.extend(self.entry())
        return values

    # entry := number | '0_' integer
    def entry(self) -> list[float]:
        start = self.pos
        literal = self.match(_NUMBER, "a number or 0_n run")
        if self.pos < len(self.text) and self.text[self.pos] == "_":
            if literal != "0":
                self.error("run-length token must be written 0_n", start)
            self.pos += 1
            m = _INTEGER.match(self.text, self.pos)
            if m is None:
                self.error("expected run length after '0_'")
            self.pos = m.end()
            return [0.0] * int(m.group())
        return [float(literal)]


def parse_hankel_shorthand(text: str) -> HankelVector:
    """Parse bracket shorthand such as ``"[0_11/1/0_5,1,0_5]"``.

    Raises:
        ShorthandSyntaxError: on malformed input, unequal side lengths, or an
            empty vector.
    """
    if not text.strip():
        raise ShorthandSyntaxError("empty shorthand", text, 0)
    return _Parser(text).document()


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------


def _format_entry(x: float) -> str:
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _format_side(values: Sequence[float]) -> str:
    tokens = []
    i = 0
    while i < len(values):
        if values[i] == 0:
            j = i
            while j < len(values) and values[j] == 0:
                j += 1
            run = j - i
            tokens.extend(["0"] * run if run < 3 else [f"0_{run}"])
            i = j
        else:
            tokens.append(_format_entry(values[i]))
            i += 1
    return ",".join(tokens)


def print_hankel_shorthand(v: HankelVector) -> str:
    """Inverse of :func:`parse_hankel_shorthand`; zero runs of 3+ become ``0_n``."""
    return f"[{_format_side(v.top)}/{_format_entry(v.center)}/{_format_side(v.right)}]"


# --------------------------------------------------------------------------
# Matrix conversion
# --------------------------------------------------------------------------


def hankel_to_matrix(v: HankelVector | str) -> np.ndarray:
    """Expand a Hankel vector (or its shorthand) to the full M x M matrix."""
    if isinstance(v, str):
        v = parse_hankel_shorthand(v)
    idx = np.arange(v.size)
    return v.values[np.add.outer(idx, idx)]


def _skew_deviations(G: np.ndarray):
    n = G.shape[0]
    for k in range(2 * n - 1):
        rows = np.arange(max(0, k - n + 1), min(k, n - 1) + 1)
        diag = G[rows, k - rows]
        yield k, diag[0], float(diag.max() - diag.min())


def matrix_to_hankel(G, tol: float = 1e-12) -> HankelVector:
    """Read the skew-diagonal vector off a Hankel matrix.

    ``tol`` is relative to the largest absolute entry.

    Raises:
        NotHankel: if some skew-diagonal spreads by more than the tolerance.
    """
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {G.shape}")
    threshold = tol * (np.abs(G).max() if G.size else 0.0)
    values = []
    for k, first, spread in _skew_deviations(G):
        if spread > threshold:
            raise NotHankel(k + 1, spread)
        values.append(first)
    return HankelVector.from_values(values)


def is_hankel(G, tol: float = 1e-12) -> bool:
    try:
        matrix_to_hankel(G, tol)
    except (NotHankel, ValueError):
        return False
    return True
