"""Exact calculus of dyadic step functions on [0, 1).

A step function is stored densely at a fixed level K: a tuple of 2**K
rational values, one per cell I(K, j) = [(j-1)/2**K, j/2**K), j = 1..2**K.
Scalars are ``fractions.Fraction`` throughout (always reduced, positive
denominator); no float ever enters a computation. Floats appear only in
clearly labelled rendering helpers.

Two step functions are equal iff their refinements to a common level have
identical values, so the representation level is not part of the identity
of a function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

#: Dense storage cap: no step function may live at a level above this.
MAX_LEVEL = 20


class LevelOverflowError(ValueError):
    """A construction would exceed MAX_LEVEL (2**MAX_LEVEL cells)."""


def to_frac(x) -> Fraction:
    """Coerce int / Fraction / 'p/q' string to Fraction. Floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"exact rational required, got {type(x).__name__}: {x!r}")
    try:
        return Fraction(x)
    except ZeroDivisionError:
        raise ValueError(f"denominator is 0 in rational {x!r}") from None


def frac_str(x: Fraction) -> str:
    """Canonical 'p/q' rendering (denominator always explicit)."""
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 12) -> str:
    """Decimal string of x >= 0, truncated to `digits` fractional digits."""
    if x < 0:
        raise ValueError("negative argument")
    scaled = (x.numerator * 10**digits) // x.denominator
    if digits == 0:
        return str(scaled)
    ip, fp = divmod(scaled, 10**digits)
    return f"{ip}.{fp:0{digits}d}"


def sqrt_floor_decimal(x: Fraction, digits: int = 12) -> str:
    """Decimal string of sqrt(x), truncated to `digits` fractional digits.

    Exact integer arithmetic; deterministic (no rounding mode involved).
    """
    if x < 0:
        raise ValueError("negative argument")
    scaled = (x.numerator * 10 ** (2 * digits)) // x.denominator
    s = isqrt(scaled)
    if digits == 0:
        return str(s)
    ip, fp = divmod(s, 10**digits)
    return f"{ip}.{fp:0{digits}d}"


class DyadicIndex(NamedTuple):
    """The dyadic cell I(k, j) = [(j-1)/2**k, j/2**k), with 1-based j."""

    k: int
    j: int

    def validate(self) -> "DyadicIndex":
        if self.k < 0:
            raise ValueError(f"dyadic level must be >= 0, got {self.k}")
        if not 1 <= self.j <= (1 << self.k):
            raise ValueError(f"cell position {self.j} out of range 1..2**{self.k}")
        return self

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.k)

    @property
    def left(self) -> Fraction:
        return Fraction(self.j - 1, 1 << self.k)

    @property
    def right(self) -> Fraction:
        return Fraction(self.j, 1 << self.k)

    def contains(self, other: "DyadicIndex") -> bool:
        """True iff `other` is a (not necessarily proper) subcell of self."""
        if other.k < self.k:
            return False
        return (other.j - 1) >> (other.k - self.k) == self.j - 1

    def overlaps(self, other: "DyadicIndex") -> bool:
        return self.contains(other) or other.contains(self)


def as_index(idx) -> DyadicIndex:
    if isinstance(idx, DyadicIndex):
        return idx.validate()
    k, j = idx
    return DyadicIndex(int(k), int(j)).validate()


@dataclass(frozen=True, eq=False)
class DyadicStep:
    """A rational-valued step function constant on the level-`level` cells."""

    level: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if self.level > MAX_LEVEL:
            raise LevelOverflowError(f"level {self.level} exceeds cap {MAX_LEVEL}")
        vals = tuple(to_frac(v) for v in self.values)
        if len(vals) != (1 << self.level):
            raise ValueError(
                f"need 2**{self.level} = {1 << self.level} values, got {len(vals)}"
            )
        object.__setattr__(self, "values", vals)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(c) -> "DyadicStep":
        return DyadicStep(0, (to_frac(c),))

    @staticmethod
    def zero(level: int = 0) -> "DyadicStep":
        return DyadicStep(level, (Fraction(0),) * (1 << level))

    # -- identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicStep):
            return NotImplemented
        L = max(self.level, other.level)
        return refine(self, L).values == refine(other, L).values

    def __hash__(self) -> int:
        c = canonical(self)
        return hash((c.level, c.values))

    def __repr__(self) -> str:
        body = ", ".join(
            str(v.numerator) if v.denominator == 1 else frac_str(v)
            for v in self.values
        )
        return f"step({self.level}; {body})"

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    # -- vector-space sugar (exact) -----------------------------------------

    def __add__(self, other: "DyadicStep") -> "DyadicStep":
        return lin_comb(1, self, 1, other)

    def __sub__(self, other: "DyadicStep") -> "DyadicStep":
        return lin_comb(1, self, -1, other)

    def __neg__(self) -> "DyadicStep":
        return DyadicStep(self.level, tuple(-v for v in self.values))

    def __mul__(self, c) -> "DyadicStep":
        c = to_frac(c)
        return DyadicStep(self.level, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    def __abs__(self) -> "DyadicStep":
        return DyadicStep(self.level, tuple(abs(v) for v in self.values))


def indicator(idx, scale=1) -> DyadicStep:
    """scale * 1_{I(k,j)} as a level-k step function."""
    idx = as_index(idx)
    vals = [Fraction(0)] * (1 << idx.k)
    vals[idx.j - 1] = to_frac(scale)
    return DyadicStep(idx.k, tuple(vals))


class Norms(NamedTuple):
    l1: Fraction
    linf: Fraction


# -- core operations ---------------------------------------------------------


def refine(f: DyadicStep, new_level: int) -> DyadicStep:
    """Re-express f on the level-`new_level` grid (same function)."""
    if new_level < f.level:
        raise ValueError(f"cannot refine level {f.level} down to {new_level}")
    if new_level > MAX_LEVEL:
        raise LevelOverflowError(f"level {new_level} exceeds cap {MAX_LEVEL}")
    if new_level == f.level:
        return f
    rep = 1 << (new_level - f.level)
    return DyadicStep(new_level, tuple(v for v in f.values for _ in range(rep)))


def canonical(f: DyadicStep) -> DyadicStep:
    """The coarsest representation of f (merge equal sibling cells)."""
    level, vals = f.level, f.values
    while level > 0 and all(vals[2 * i] == vals[2 * i + 1] for i in range(len(vals) // 2)):
        vals = tuple(vals[2 * i] for i in range(len(vals) // 2))
        level -= 1
    return DyadicStep(level, vals)


def _common(f: DyadicStep, g: DyadicStep):
    L = max(f.level, g.level)
    return L, refine(f, L).values, refine(g, L).values


def lin_comb(a, f: DyadicStep, b, g: DyadicStep) -> DyadicStep:
    """Pointwise a*f + b*g at the common refined level."""
    a, b = to_frac(a), to_frac(b)
    L, vf, vg = _common(f, g)
    return DyadicStep(L, tuple(a * x + b * y for x, y in zip(vf, vg)))


def decompose(f: DyadicStep) -> tuple[DyadicStep, DyadicStep, DyadicStep]:
    """(|f|, positive part, negative part); f = pos - neg, |f| = pos + neg."""
    zero = Fraction(0)
    pos = tuple(v if v > 0 else zero for v in f.values)
    neg = tuple(-v if v < 0 else zero for v in f.values)
    return (
        DyadicStep(f.level, tuple(abs(v) for v in f.values)),
        DyadicStep(f.level, pos),
        DyadicStep(f.level, neg),
    )


def integral_over(f: DyadicStep, idx) -> Fraction:
    """Exact integral of f over the dyadic cell I(k, j).

    k may lie above or below f's level; above MAX_LEVEL is fine, since no
    storage is involved.
    """
    k, j = as_index(idx)
    if k >= f.level:
        cell = (j - 1) >> (k - f.level)
        return f.values[cell] / (1 << k)
    span = 1 << (f.level - k)
    lo = (j - 1) * span
    return sum(f.values[lo : lo + span], Fraction(0)) / (1 << f.level)


def norms(f: DyadicStep) -> Norms:
    """(l1, linf) of f, exactly."""
    l1 = sum((abs(v) for v in f.values), Fraction(0)) / (1 << f.level)
    linf = max(abs(v) for v in f.values)
    return Norms(l1, linf)


def pairing(f: DyadicStep, h: DyadicStep) -> Fraction:
    """Exact duality bracket <f, h> = integral of f*h over [0, 1)."""
    L, vf, vh = _common(f, h)
    return sum((x * y for x, y in zip(vf, vh)), Fraction(0)) / (1 << L)


def dyadic_project(f: DyadicStep, K: int) -> DyadicStep:
    """Conditional expectation of f onto the level-K dyadic algebra.

    Replaces f by its cell averages at level K; preserves every integral
    over cells of level <= K and is idempotent.
    """
    if K < 0:
        raise ValueError(f"level must be >= 0, got {K}")
    if K >= f.level:
        return refine(f, K)
    span = 1 << (f.level - K)
    vals = tuple(
        sum(f.values[i * span : (i + 1) * span], Fraction(0)) / span
        for i in range(1 << K)
    )
    return DyadicStep(K, vals)


def reflect(f: DyadicStep) -> DyadicStep:
    """The function t -> f(1-t) on the dyadic grid (values reversed)."""
    return DyadicStep(f.level, tuple(reversed(f.values)))


def cell_masses(f: DyadicStep, absolute: bool = False) -> list[Fraction]:
    """Per-cell integrals of f (or |f|) at f's own level."""
    scale = Fraction(1, 1 << f.level)
    if absolute:
        return [abs(v) * scale for v in f.values]
    return [v * scale for v in f.values]


def fold_masses(masses: list[Fraction]) -> list[Fraction]:
    """One level up: pairwise sums (each parent cell is the disjoint union
    of its two children, so masses add)."""
    return [masses[2 * i] + masses[2 * i + 1] for i in range(len(masses) // 2)]


# -- JSON wire format ---------------------------------------------------------
#
#   {"level": K, "values": ["p/q", ...]}   with exactly 2**K entries.


def step_to_json(f: DyadicStep) -> dict:
    return {"level": f.level, "values": [frac_str(v) for v in f.values]}


def step_from_json(obj) -> DyadicStep:
    if not isinstance(obj, dict) or "level" not in obj or "values" not in obj:
        raise ValueError("step function JSON needs 'level' and 'values' keys")
    level = obj["level"]
    if not isinstance(level, int) or isinstance(level, bool):
        raise ValueError(f"'level' must be an integer, got {level!r}")
    raw = obj["values"]
    if not isinstance(raw, list):
        raise ValueError("'values' must be a list of rational strings")
    if level < 0 or len(raw) != (1 << max(level, 0)):
        raise ValueError(
            f"'values' length {len(raw)} does not match 2**{level} entries"
        )
    return DyadicStep(level, tuple(to_frac(v) for v in raw))


def step_to_json_str(f: DyadicStep) -> str:
    return json.dumps(step_to_json(f), indent=2)
