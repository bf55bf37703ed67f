"""Exact arithmetic in Z_p and dense matrices of residues.

Everything is reduced eagerly into ``[0, p)`` so that results can be compared
bit-for-bit against hand-worked tables. Integers are Python ints, so a 64-bit
(or larger) prime works exactly like ``p = 11``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class ModringError(ValueError):
    """Base class for arithmetic and shape errors."""


class NotPrime(ModringError):
    pass


class ZeroNotInvertible(ModringError, ZeroDivisionError):
    pass


class DimensionMismatch(ModringError):
    pass


class ModulusMismatch(ModringError):
    pass


class NotSquare(ModringError):
    pass


# Deterministic Miller-Rabin witnesses; correct for every n < 3.3e24.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS = 40


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2**64, 40 random rounds above."""
    if n < 2:
        return False
    for q in _DETERMINISTIC_BASES:
        if n % q == 0:
            return n == q
    if n < 2**64:
        return _miller_rabin(n, _DETERMINISTIC_BASES)
    # seeded so the verdict for a given n never changes between runs
    rng = random.Random(n)
    bases = [rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS)]
    return _miller_rabin(n, _DETERMINISTIC_BASES + tuple(bases))


@dataclass(frozen=True)
class Modulus:
    """An odd prime ``p``; construction fails on anything else."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise NotPrime(f"modulus must be an integer, got {self.p!r}")
        if self.p < 3 or not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime (need an odd prime p >= 3)")

    def __call__(self, value: int) -> Residue:
        return Residue(value, self)

    def __int__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)


def as_modulus(p: Modulus | int) -> Modulus:
    return p if isinstance(p, Modulus) else Modulus(p)


@dataclass(frozen=True, eq=False)
class Residue:
    """An element of Z_p in canonical form.

    Compares equal to another residue with the same modulus and value, or to
    a plain int equal to its canonical value.
    """

    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.p)

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"mod {other.p} vs mod {self.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * mod_inv(Residue(o, self.modulus))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.modulus) * mod_inv(self)

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, e: int):
        if e < 0:
            return mod_inv(self) ** -e
        return Residue(pow(self.value, e, self.p), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"Residue({self.value} mod {self.p})"

    def __str__(self):
        return str(self.value)


def mod_inv(a: Residue) -> Residue:
    """Multiplicative inverse of ``a`` in Z_p."""
    if a.value == 0:
        raise ZeroNotInvertible(f"0 has no inverse mod {a.p}")
    return Residue(pow(a.value, -1, a.p), a.modulus)


@dataclass(frozen=True)
class MatZ:
    """Dense ``rows x cols`` matrix over Z_p, stored row-major as ints."""

    rows: int
    cols: int
    entries: tuple[int, ...]
    modulus: Modulus
    _p: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        p = self.modulus.p
        object.__setattr__(self, "_p", p)
        object.__setattr__(self, "entries", tuple(int(v) % p for v in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: Modulus | int) -> MatZ:
        modulus = as_modulus(modulus)
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, (), modulus)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, tuple(v for r in rows for v in r), modulus)

    @classmethod
    def identity(cls, n: int, modulus: Modulus | int) -> MatZ:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)), as_modulus(modulus))

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: Modulus | int) -> MatZ:
        return cls(rows, cols, (0,) * (rows * cols), as_modulus(modulus))

    @property
    def p(self) -> int:
        return self._p

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.rows:
            raise IndexError(i)
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return self.entries[j::self.cols]

    def tolists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: MatZ) -> MatZ:
        return mat_mul(self, other)

    @property
    def T(self) -> MatZ:
        return mat_transpose(self)

    def scale(self, c: int | Residue) -> MatZ:
        c = int(c)
        return MatZ(self.rows, self.cols, tuple(v * c for v in self.entries), self.modulus)

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in self.row(i)) for i in range(self.rows))


def mat_mul(a: MatZ, b: MatZ) -> MatZ:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"mod {a.p} vs mod {b.p}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    p = a.p
    b_cols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        out.extend(sum(x * y for x, y in zip(r, c)) % p for c in b_cols)
    return MatZ(a.rows, b.cols, tuple(out), a.modulus)


def mat_transpose(a: MatZ) -> MatZ:
    return MatZ(a.cols, a.rows, tuple(v for j in range(a.cols) for v in a.col(j)), a.modulus)


def is_symmetric(a: MatZ) -> bool:
    if a.rows != a.cols:
        raise NotSquare(f"{a.rows}x{a.cols} is not square")
    return all(a[i, j] == a[j, i] for i in range(a.rows) for j in range(i + 1, a.cols))


def dot(u: Sequence[int], v: Sequence[int], p: int) -> int:
    """Inner product of two equal-length integer vectors, reduced mod ``p``."""
    if len(u) != len(v):
        raise DimensionMismatch(f"length {len(u)} vs {len(v)}")
    return sum(x * y for x, y in zip(u, v)) % p
