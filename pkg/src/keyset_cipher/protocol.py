"""Pairwise key agreement over key sets.

Two entry points:

* aligned: the initiator announces an index ``v``; both sides use their index-``v``
  secret with the other's index-``v`` identifier and obtain ``w_v K_ij``.
* randomized: each side publishes a time-limited random subset of its
  identifiers. A party picks any published peer index ``v``, computes the raw
  key ``w_v K_ij`` and rescales it by its own ``S(c) / S(v)``. Since
  ``S(k) = w_k K_ii`` this yields ``w_c K_ij`` on both sides, for any choices,
  without the index ever being sent. The common index ``c`` stays local.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .blom import PublicIdVector
from .keyset import UserKeySet
from .modring import ModringError, Residue, dot, mod_inv
from .seeds import rng_for

# validity end used when a bundle never expires
FOREVER = 2**63 - 1


class ProtocolError(ModringError):
    pass


class EmptySubset(ProtocolError):
    pass


class UnknownIndex(ProtocolError):
    pass


class DuplicateIndex(ProtocolError):
    pass


class ExpiredBundle(ProtocolError):
    pass


@dataclass(frozen=True)
class PublishedBundle:
    """Identifiers a user advertises, valid for ``start <= t < end``."""

    user: int
    items: tuple[tuple[int, PublicIdVector], ...]
    validity: tuple[int, int] = (0, FOREVER)

    def __post_init__(self):
        if not self.items:
            raise EmptySubset("a published bundle needs at least one identifier")
        idx = [i for i, _ in self.items]
        if len(set(idx)) != len(idx):
            raise DuplicateIndex(f"repeated index in {idx}")
        start, end = self.validity
        if end <= start:
            raise ProtocolError(f"empty validity window [{start}, {end})")

    @property
    def indices(self) -> list[int]:
        return [i for i, _ in self.items]

    def valid_at(self, clock: int) -> bool:
        start, end = self.validity
        return start <= clock < end

    def item(self, index: int) -> PublicIdVector:
        for i, vec in self.items:
            if i == index:
                return vec
        raise UnknownIndex(f"index {index} not published by user {self.user}")


@dataclass(frozen=True)
class AlignedIndexAnnounce:
    """Handshake message naming the index both parties will use."""

    user: int
    index: int


@dataclass(frozen=True)
class AgreementContext:
    role: str
    common_index: int
    chosen_index: int
    raw_key: int
    final_key: int


def publish(keyset: UserKeySet, indices: Sequence[int] | None = None,
            validity: tuple[int, int] = (0, FOREVER), rng_seed: int = 0,
            size: int | None = None) -> PublishedBundle:
    """Publish identifiers for ``indices``, or for ``size`` indices drawn with ``rng_seed``.

    Drawn subsets are returned in ascending index order.
    """
    if indices is None:
        if size is None or not 1 <= size <= len(keyset):
            raise EmptySubset(f"subset size must be in 1..{len(keyset)}, got {size}")
        rng = rng_for("publish", keyset.user, rng_seed)
        indices = sorted(rng.sample(keyset.indices, size))
    indices = list(indices)
    if not indices:
        raise EmptySubset("no indices to publish")
    if len(set(indices)) != len(indices):
        raise DuplicateIndex(f"repeated index in {indices}")
    for v in indices:
        if v not in keyset:
            raise UnknownIndex(f"user {keyset.user} has no key-set index {v}")
    items = tuple((v, keyset.entry(v).public_id) for v in indices)
    return PublishedBundle(keyset.user, items, tuple(validity))


def raw_key(keyset: UserKeySet, peer_item: tuple[int, Sequence[int]]) -> Residue:
    """Own secret at the peer's index ``v`` times the peer's identifier at ``v``."""
    v, vec = peer_item
    if v not in keyset:
        raise UnknownIndex(f"user {keyset.user} has no secret at index {v}")
    secret = keyset.entry(v).secret.entries
    return Residue(dot(secret, tuple(vec), keyset.p), keyset.modulus)


def final_key(raw: Residue, scale_common: Residue, scale_current: Residue) -> Residue:
    """``raw * S(common) / S(current)``."""
    return raw * scale_common * mod_inv(scale_current)


def randomized_agree(own: UserKeySet, common_index: int, peer_bundle: PublishedBundle,
                     choice_seed: int = 0, *, clock: int, chosen_index: int | None = None,
                     role: str = "initiator") -> AgreementContext:
    """Agree on ``w_c K_ij`` from a peer's published subset.

    The peer index is drawn uniformly with ``choice_seed`` unless
    ``chosen_index`` pins it.
    """
    if not peer_bundle.valid_at(clock):
        start, end = peer_bundle.validity
        raise ExpiredBundle(f"bundle of user {peer_bundle.user} valid for [{start}, {end}), clock is {clock}")
    if common_index not in own:
        raise UnknownIndex(f"common index {common_index} not in user {own.user}'s key set")
    missing = [v for v in peer_bundle.indices if v not in own]
    if missing:
        raise UnknownIndex(f"user {own.user} has no secrets for published indices {missing}")
    if chosen_index is None:
        rng = rng_for("choice", own.user, peer_bundle.user, choice_seed)
        chosen_index = peer_bundle.indices[rng.randrange(len(peer_bundle.items))]
    raw = raw_key(own, (chosen_index, peer_bundle.item(chosen_index)))
    final = final_key(raw, own.scale(common_index), own.scale(chosen_index))
    return AgreementContext(role, common_index, chosen_index, raw.value, final.value)


def aligned_agree(own: UserKeySet, announced_index: int, peer_id_at_v: Iterable[int]) -> Residue:
    """Key at an announced index: ``w_v K_ij`` for both parties."""
    return raw_key(own, (announced_index, tuple(peer_id_at_v)))
