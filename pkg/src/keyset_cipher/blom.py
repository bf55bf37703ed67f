"""Blom's symmetric key predistribution.

The trusted authority holds ``X`` (n x m) and ``Y`` (m x n) over Z_p with
``K = X Y`` symmetric. User ``i`` (1-based) receives row ``i`` of ``X`` as a
secret and is known publicly by column ``i`` of ``Y``; any two users compute
the same ``K_ij`` from their own secret and the other's identifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .modring import (
    DimensionMismatch,
    MatZ,
    ModringError,
    Modulus,
    ModulusMismatch,
    Residue,
    as_modulus,
    dot,
    is_symmetric,
    mat_mul,
    mat_transpose,
)
from .seeds import rng_for

MAX_ATTEMPTS = 64


class BlomError(ModringError):
    pass


class Degenerate(BlomError):
    pass


class NotSymmetric(BlomError):
    pass


class ZeroScale(BlomError):
    def __init__(self, index: int, detail: str = ""):
        self.index = index
        super().__init__(detail or f"zero scale at index {index}")


class IndexOutOfRange(BlomError, IndexError):
    pass


@dataclass(frozen=True)
class KeyVector:
    """A length-m vector belonging to one user (1-based ``user``)."""

    user: int
    entries: tuple[int, ...]
    modulus: Modulus

    def __post_init__(self):
        p = self.modulus.p
        object.__setattr__(self, "entries", tuple(int(v) % p for v in self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def residues(self) -> list[Residue]:
        return [Residue(v, self.modulus) for v in self.entries]


class SecretKeyVector(KeyVector):
    """Row ``user`` of X."""


class PublicIdVector(KeyVector):
    """Column ``user`` of Y."""


@dataclass(frozen=True)
class TaBundle:
    """Trusted-authority material. Validates K = XY, symmetry and a nonzero diagonal.

    ``family`` optionally carries the public list of circulant transforms
    (``CirculantSpec``) used to expand key sets.
    """

    X: MatZ
    Y: MatZ
    K: MatZ
    family: tuple = ()

    def __post_init__(self):
        _check_shapes(self.X, self.Y)
        if mat_mul(self.X, self.Y) != self.K:
            raise BlomError("K does not equal X*Y mod p")
        # scales are checked first so a zeroed identifier is reported by user
        for i in range(self.n):
            if self.K[i, i] == 0:
                raise ZeroScale(i + 1, f"K[{i + 1},{i + 1}] = 0: user {i + 1} has zero scale")
        if not is_symmetric(self.K):
            raise NotSymmetric("K = X*Y is not symmetric")

    @property
    def modulus(self) -> Modulus:
        return self.X.modulus

    @property
    def p(self) -> int:
        return self.X.p

    @property
    def n(self) -> int:
        return self.X.rows

    @property
    def m(self) -> int:
        return self.X.cols

    def scales(self) -> list[int]:
        return [self.K[i, i] for i in range(self.n)]


def _check_shapes(X: MatZ, Y: MatZ):
    if X.modulus != Y.modulus:
        raise ModulusMismatch(f"X mod {X.p}, Y mod {Y.p}")
    if X.rows != Y.cols or X.cols != Y.rows:
        raise DimensionMismatch(f"X is {X.rows}x{X.cols} but Y is {Y.rows}x{Y.cols}")


def ta_load(X: MatZ, Y: MatZ, family: tuple = ()) -> TaBundle:
    """Accept externally supplied X and Y, computing and validating K."""
    _check_shapes(X, Y)
    return TaBundle(X, Y, mat_mul(X, Y), tuple(family))


def ta_generate(p: Modulus | int, n: int, m: int, seed: int) -> TaBundle:
    """Random bundle with ``X = Y^T D`` for a random symmetric ``D``.

    ``K = Y^T D Y`` is then symmetric by construction. Draws where some user
    ends up with ``K_ii = 0`` are discarded and redrawn from a derived seed;
    after ``MAX_ATTEMPTS`` failures ``Degenerate`` is raised.
    """
    modulus = as_modulus(p)
    p = modulus.p
    if n < 2 or m < 1:
        raise Degenerate(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if p**m < n:
        raise Degenerate(f"only {p**m} distinct identifiers exist for {n} users")
    for attempt in range(MAX_ATTEMPTS):
        rng = rng_for("ta", seed, attempt)
        columns: list[tuple[int, ...]] = []
        seen = set()
        while len(columns) < n:
            c = tuple(rng.randrange(p) for _ in range(m))
            if c not in seen:
                seen.add(c)
                columns.append(c)
        Y = MatZ.from_rows([[c[a] for c in columns] for a in range(m)], modulus)
        D = [[0] * m for _ in range(m)]
        for a in range(m):
            for b in range(a, m):
                D[a][b] = D[b][a] = rng.randrange(p)
        X = mat_mul(mat_transpose(Y), MatZ.from_rows(D, modulus))
        K = mat_mul(X, Y)
        if all(K[i, i] for i in range(n)):
            return TaBundle(X, Y, K)
    raise Degenerate(f"no bundle with nonzero scales after {MAX_ATTEMPTS} attempts")


def _check_user(bundle: TaBundle, i: int):
    if not 1 <= i <= bundle.n:
        raise IndexOutOfRange(f"user index {i} out of range 1..{bundle.n}")


def user_secret(bundle: TaBundle, i: int) -> SecretKeyVector:
    _check_user(bundle, i)
    return SecretKeyVector(i, bundle.X.row(i - 1), bundle.modulus)


def user_id(bundle: TaBundle, i: int) -> PublicIdVector:
    _check_user(bundle, i)
    return PublicIdVector(i, bundle.Y.col(i - 1), bundle.modulus)


def shared_key(secret: Sequence[int] | KeyVector, public_id: Sequence[int] | KeyVector,
               modulus: Modulus | None = None) -> Residue:
    """Inner product of a secret vector with an identifier vector, mod p."""
    mods = {v.modulus for v in (secret, public_id) if isinstance(v, KeyVector)}
    if modulus is not None:
        mods.add(modulus)
    if len(mods) != 1:
        raise ModulusMismatch("vectors need exactly one common modulus")
    (modulus,) = mods
    return Residue(dot(tuple(secret), tuple(public_id), modulus.p), modulus)


def key_scale(bundle: TaBundle, i: int) -> Residue:
    """The scale of user ``i``: ``K_ii``, the key the user shares with itself."""
    _check_user(bundle, i)
    return Residue(bundle.K[i - 1, i - 1], bundle.modulus)
