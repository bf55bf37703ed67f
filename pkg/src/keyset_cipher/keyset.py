"""Expanding one Blom key into an indexed set of equivalent keys.

The inner transformation ``X -> X R``, ``Y -> R^T Y`` with ``R R^T = w I``
multiplies every key (and so every scale) by ``w``. Applying each circulant of
a public family gives every user one secret/identifier pair per family index.
Index 1 is always the identity ("original") transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .blom import (
    IndexOutOfRange,
    PublicIdVector,
    SecretKeyVector,
    TaBundle,
    ZeroScale,
    _check_user,
)
from .modring import (
    DimensionMismatch,
    MatZ,
    ModringError,
    Modulus,
    ModulusMismatch,
    Residue,
    dot,
    mat_mul,
    mat_transpose,
)
from .rfamily import CirculantSpec, NotOrthogonal, RFamilyError, ZeroWeight


class SingularU(ModringError):
    pass


class FamilyError(RFamilyError):
    pass


def inner_transform(X: MatZ, Y: MatZ, R: MatZ) -> tuple[MatZ, MatZ]:
    """Return ``(X R, R^T Y)``; ``R R^T`` must equal ``w I`` with ``w != 0``."""
    if R.rows != R.cols:
        raise DimensionMismatch(f"R is {R.rows}x{R.cols}")
    if X.cols != R.rows or Y.rows != R.rows:
        raise DimensionMismatch(f"R is {R.rows}x{R.cols}, key length is {X.cols}")
    gram = mat_mul(R, mat_transpose(R))
    w = gram[0, 0]
    if w == 0:
        raise ZeroWeight("R R^T has a zero diagonal")
    for i in range(R.rows):
        for j in range(R.cols):
            if gram[i, j] != (w if i == j else 0):
                raise NotOrthogonal((j - i) % R.cols, gram[i, j])
    return mat_mul(X, R), mat_mul(mat_transpose(R), Y)


def rank_mod_p(A: MatZ) -> int:
    """Rank by Gaussian elimination over Z_p."""
    p = A.p
    rows = A.tolists()
    rank = 0
    for col in range(A.cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def outer_transform(X: MatZ, Y: MatZ, U: MatZ) -> tuple[MatZ, MatZ]:
    """Return ``(U X, Y U^T)``, so that ``K -> U K U^T`` stays symmetric."""
    if U.modulus != X.modulus:
        raise ModulusMismatch(f"U mod {U.p}, X mod {X.p}")
    if U.rows != U.cols or U.cols != X.rows or Y.cols != U.rows:
        raise DimensionMismatch(f"U is {U.rows}x{U.cols} for {X.rows} users")
    if rank_mod_p(U) < U.rows:
        raise SingularU("U is not invertible mod p")
    return mat_mul(U, X), mat_mul(Y, mat_transpose(U))


@dataclass(frozen=True)
class KeySetEntry:
    index: int
    secret: SecretKeyVector
    public_id: PublicIdVector
    scale: int
    transform: tuple[int, ...]

    def __post_init__(self):
        p = self.secret.modulus.p
        if dot(self.secret.entries, self.public_id.entries, p) != self.scale:
            raise ModringError(f"index {self.index}: scale does not match secret . id")
        if self.scale == 0:
            raise ZeroScale(self.index)


@dataclass(frozen=True)
class UserKeySet:
    """One user's full key set. ``entries[k-1]`` is family index ``k``."""

    user: int
    modulus: Modulus
    entries: tuple[KeySetEntry, ...]
    family: tuple[CirculantSpec, ...]

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def indices(self) -> list[int]:
        return [e.index for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def entry(self, index: int) -> KeySetEntry:
        if not 1 <= index <= len(self.entries):
            raise IndexOutOfRange(f"key-set index {index} outside 1..{len(self.entries)}")
        return self.entries[index - 1]

    def __contains__(self, index: int) -> bool:
        return 1 <= index <= len(self.entries)

    def scale(self, index: int) -> Residue:
        return Residue(self.entry(index).scale, self.modulus)


def default_family(bundle: TaBundle) -> tuple[CirculantSpec, ...]:
    return bundle.family or (CirculantSpec.identity(bundle.m, bundle.modulus),)


def _check_family(family: Sequence[CirculantSpec], m: int, modulus: Modulus):
    if not family:
        raise FamilyError("family is empty")
    for k, spec in enumerate(family, start=1):
        if spec.modulus != modulus:
            raise ModulusMismatch(f"family row {k} is mod {spec.modulus.p}")
        if spec.m != m:
            raise DimensionMismatch(f"family row {k} has length {spec.m}, key length is {m}")
    if not family[0].is_identity:
        raise FamilyError("family index 1 must be the identity row")
    if len({s.first_row for s in family}) != len(family):
        raise FamilyError("family rows must be distinct")


def expand_keyset(bundle: TaBundle, i: int, family: Sequence[CirculantSpec] | None = None) -> UserKeySet:
    """User ``i``'s key set: for each family index ``k``, row ``i`` of ``X R_k``
    and column ``i`` of ``R_k^T Y``, with scale ``w_k K_ii``.
    """
    _check_user(bundle, i)
    family = tuple(default_family(bundle) if family is None else family)
    _check_family(family, bundle.m, bundle.modulus)
    # only row i of X and column i of Y are needed
    x_i = MatZ(1, bundle.m, bundle.X.row(i - 1), bundle.modulus)
    y_i = MatZ(bundle.m, 1, bundle.Y.col(i - 1), bundle.modulus)
    entries = []
    for k, spec in enumerate(family, start=1):
        x_new, y_new = inner_transform(x_i, y_i, spec.matrix)
        secret = SecretKeyVector(i, x_new.row(0), bundle.modulus)
        public = PublicIdVector(i, y_new.col(0), bundle.modulus)
        scale = dot(secret.entries, public.entries, bundle.p)
        if scale == 0:
            raise ZeroScale(k, f"user {i} has zero scale at family index {k}")
        entries.append(KeySetEntry(k, secret, public, scale, spec.first_row))
    return UserKeySet(i, bundle.modulus, tuple(entries), family)
