"""Circulant matrices R over Z_p with R R^T = w I.

A circulant is fixed by its first row; every later row is the previous one
rotated right by one place. ``R R^T`` is then ``w I`` exactly when the
circular autocorrelation of the first row vanishes at every nonzero lag, with
``w`` the autocorrelation at lag 0 (the sum of squares).

For 3x3 matrices with leading entry 1, ``(1, a, b)``, the condition reduces to
``a + b + ab = 0``, which solves to ``b = -a / (a + 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .modring import MatZ, ModringError, Modulus, Residue, as_modulus
from .seeds import rng_for

# cap on exhaustive leading-1 searches for m != 3
SEARCH_LIMIT = 10**7


class RFamilyError(ModringError):
    pass


class EmptyRow(RFamilyError):
    pass


class ShiftOutOfRange(RFamilyError):
    pass


class NotOrthogonal(RFamilyError):
    def __init__(self, lag: int, value: int):
        self.lag = lag
        self.value = value
        super().__init__(f"circular autocorrelation at lag {lag} is {value}, not 0")


class ZeroWeight(RFamilyError):
    pass


class NoSolution(RFamilyError):
    pass


class FamilyExhausted(RFamilyError):
    pass


def _normalize(row: Iterable[int | Residue], p: Modulus | int | None) -> tuple[tuple[int, ...], Modulus]:
    row = list(row)
    if not row:
        raise EmptyRow("first row must be nonempty")
    if p is None:
        mods = {r.modulus for r in row if isinstance(r, Residue)}
        if len(mods) != 1:
            raise RFamilyError("pass p explicitly unless the row is made of residues")
        (modulus,) = mods
    else:
        modulus = as_modulus(p)
    return tuple(int(v) % modulus.p for v in row), modulus


def circulant(first_row: Sequence[int | Residue], p: Modulus | int | None = None) -> MatZ:
    """Square circulant whose row ``k`` is ``first_row`` rotated right ``k`` places."""
    row, modulus = _normalize(first_row, p)
    m = len(row)
    entries = [row[(j - k) % m] for k in range(m) for j in range(m)]
    return MatZ(m, m, tuple(entries), modulus)


def autocorrelation(first_row: Sequence[int | Residue], k: int, p: Modulus | int | None = None) -> Residue:
    """``C(k) = sum_i a_i a_{i+k}`` with indices taken cyclically."""
    row, modulus = _normalize(first_row, p)
    m = len(row)
    if not 0 <= k < m:
        raise ShiftOutOfRange(f"lag {k} outside 0..{m - 1}")
    return Residue(sum(row[i] * row[(i + k) % m] for i in range(m)), modulus)


def verify_orthogonal(first_row: Sequence[int | Residue], p: Modulus | int | None = None) -> Residue:
    """Return the weight ``w`` of the row's circulant, or raise if ``R R^T != w I``."""
    row, modulus = _normalize(first_row, p)
    for k in range(1, len(row)):
        c = autocorrelation(row, k, modulus)
        if c:
            raise NotOrthogonal(k, c.value)
    w = autocorrelation(row, 0, modulus)
    if not w:
        raise ZeroWeight(f"row {row} has weight 0 mod {modulus.p}")
    return w


@dataclass(frozen=True)
class CirculantSpec:
    """A verified first row together with its weight."""

    first_row: tuple[int, ...]
    modulus: Modulus
    weight: int = field(init=False)

    def __post_init__(self):
        row, modulus = _normalize(self.first_row, self.modulus)
        object.__setattr__(self, "first_row", row)
        object.__setattr__(self, "weight", verify_orthogonal(row, modulus).value)

    @classmethod
    def identity(cls, m: int, p: Modulus | int) -> CirculantSpec:
        return cls((1,) + (0,) * (m - 1), as_modulus(p))

    @property
    def m(self) -> int:
        return len(self.first_row)

    @property
    def is_identity(self) -> bool:
        return self.first_row == (1,) + (0,) * (self.m - 1)

    @property
    def matrix(self) -> MatZ:
        return circulant(self.first_row, self.modulus)


@dataclass(frozen=True)
class SolutionRow:
    """``(a, b, w)`` with ``(1, a, b)`` orthogonal: ``a + b + ab = 0``, ``w = 1 + a^2 + b^2``."""

    a: int
    b: int
    w: int

    @property
    def row(self) -> tuple[int, int, int]:
        return (1, self.a, self.b)


def solve3(a: int | Residue, p: Modulus | int) -> SolutionRow:
    """Complete ``(1, a, ?)`` to an orthogonal 3x3 circulant row."""
    modulus = as_modulus(p)
    a = Residue(int(a), modulus)
    if not a + 1:
        raise NoSolution(f"a = {a.value} = -1 mod {modulus.p}: no b satisfies a + b + ab = 0")
    b = -a / (a + 1)
    w = 1 + a * a + b * b
    return SolutionRow(a.value, b.value, w.value)


def enumerate3(p: Modulus | int) -> list[SolutionRow]:
    """All leading-1 solutions for m = 3 with nonzero weight, sorted by ``a``."""
    modulus = as_modulus(p)
    out = []
    for a in range(modulus.p - 1):
        sol = solve3(a, modulus)
        if sol.w:
            out.append(sol)
    return out


def scalar_family(base, p: Modulus | int, multipliers: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """Scalar multiples ``t * base`` for ``t`` in ``1..p-1`` (or ``multipliers``).

    Scaling a row by ``t`` scales its weight by ``t^2``, so every multiple of a
    valid row is valid; rows whose weight would vanish are dropped.
    """
    modulus = as_modulus(p)
    if isinstance(base, SolutionRow):
        base = base.row
    elif isinstance(base, CirculantSpec):
        base = base.first_row
    row, modulus = _normalize(base, modulus)
    w = verify_orthogonal(row, modulus)
    ts = range(1, modulus.p) if multipliers is None else multipliers
    out = []
    for t in ts:
        if (w * t * t).value == 0:
            continue
        out.append(tuple(t * v % modulus.p for v in row))
    return out


def search_rows(m: int, p: Modulus | int) -> list[tuple[int, ...]]:
    """Exhaustively find every orthogonal leading-1 row of length ``m``.

    Lexicographic order. Refuses searches over more than ``SEARCH_LIMIT``
    candidates.
    """
    modulus = as_modulus(p)
    if m < 1:
        raise EmptyRow("m must be positive")
    if modulus.p ** (m - 1) > SEARCH_LIMIT:
        raise FamilyExhausted(f"{modulus.p}^{m - 1} candidates exceeds the search limit")
    found = []
    for tail in itertools.product(range(modulus.p), repeat=m - 1):
        row = (1,) + tail
        try:
            verify_orthogonal(row, modulus)
        except (NotOrthogonal, ZeroWeight):
            continue
        found.append(row)
    return found


def make_family(p: Modulus | int, m: int, size: int, seed: int) -> list[CirculantSpec]:
    """Seeded family of ``size`` distinct verified rows, the identity first.

    For m = 3 rows are ``t * (1, a, b)`` with ``a`` and ``t`` drawn at random
    and ``b`` from :func:`solve3`, so large primes are fine. Other lengths draw
    from :func:`search_rows` and its scalar multiples.
    """
    modulus = as_modulus(p)
    if size < 1:
        raise FamilyExhausted("family size must be at least 1")
    family = [CirculantSpec.identity(m, modulus)]
    seen = {family[0].first_row}
    rng = rng_for("family", modulus.p, m, seed)
    P = modulus.p

    if m == 3:
        def draw():
            a = rng.randrange(P - 1)
            sol = solve3(a, modulus)
            t = rng.randrange(1, P)
            return tuple(t * v % P for v in sol.row) if sol.w else None
        budget = 64 * size + 4 * P * P
    else:
        bases = search_rows(m, modulus)

        def draw():
            base = bases[rng.randrange(len(bases))]
            t = rng.randrange(1, P)
            return tuple(t * v % P for v in base)
        budget = 64 * size + 4 * P * len(bases)

    for _ in range(budget):
        if len(family) >= size:
            break
        row = draw()
        if row is None or row in seen:
            continue
        seen.add(row)
        family.append(CirculantSpec(row, modulus))
    if len(family) < size:
        raise FamilyExhausted(f"found only {len(family)} distinct rows for m={m}, p={P}")
    return family
