"""Deterministic in-memory simulation of a key-set network.

One logical event loop over a virtual clock (1 tick = 1 second). At every
multiple of ``rotation_period`` each node broadcasts a freshly drawn
published subset valid until the next rotation. Session ``s`` (0-based) runs
at time ``s`` between the next pair in lexicographic order; the initiator
sends a hello (and, in aligned mode, an index announcement) and both sides
derive a key. The bus is lossless and instantaneous.

Seeds are split from the master seed with :func:`seeds.derive_seed`:
``("ta", ...)`` for the trusted authority, ``("family", ...)`` for the
transform family, ``(master, "publish", node, period)`` for subsets and
``(master, "choice", node, session)`` for each party's index choice.
"""

from __future__ import annotations

import base64
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .blom import BlomError, TaBundle, ta_generate
from .formats import HELLO_FORMAT, FormatError, decode_message, encode_message
from .keyset import UserKeySet, expand_keyset
from .modring import ModringError
from .protocol import (
    AlignedIndexAnnounce,
    ProtocolError,
    PublishedBundle,
    aligned_agree,
    publish,
    randomized_agree,
)
from .rfamily import RFamilyError, make_family
from .seeds import derive_seed, rng_for

BROADCAST = "*"
# untagged decimal scans only for values this long; short ones collide with ids
MIN_RAW_DIGITS = 8


class ProvisioningFailed(RuntimeError):
    pass


class LeakDetected(AssertionError):
    def __init__(self, event_index: int, what: str):
        self.event_index = event_index
        self.what = what
        super().__init__(f"event {event_index}: {what}")


@dataclass(frozen=True)
class SimConfig:
    p: int = 11
    n: int = 5
    m: int = 3
    family_size: int = 6
    subset_size: int = 2
    rotation_period: int = 4
    sessions: int | None = None  # None: every unordered pair once
    seed: int = 1
    mode: str = "randomized"

    def __post_init__(self):
        if not 1 <= self.subset_size <= self.family_size:
            raise ValueError(f"subset size {self.subset_size} outside 1..{self.family_size}")
        if self.sessions is not None and self.sessions < 1:
            raise ValueError("need at least one session")
        if self.rotation_period < 1:
            raise ValueError("rotation period must be positive")
        if self.mode not in ("randomized", "aligned"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def session_count(self) -> int:
        return self.n * (self.n - 1) // 2 if self.sessions is None else self.sessions


@dataclass(frozen=True)
class Event:
    time: int
    seq: int
    sender: str
    receiver: str
    payload: bytes

    def to_line(self) -> str:
        return f"{self.time} {self.sender} {self.receiver} {base64.b64encode(self.payload).decode()}"

    @classmethod
    def from_line(cls, line: str, seq: int) -> Event:
        t, s, r, b = line.split(" ")
        return cls(int(t), seq, s, r, base64.b64decode(b, validate=True))


@dataclass
class Transcript:
    events: list[Event] = field(default_factory=list)

    def emit(self, time: int, sender, receiver, payload: bytes):
        if self.events and time < self.events[-1].time:
            raise ValueError("events must be appended in time order")
        self.events.append(Event(time, len(self.events), str(sender), str(receiver), payload))

    def to_log(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    @classmethod
    def from_log(cls, text: str) -> Transcript:
        lines = [ln for ln in text.splitlines() if ln]
        return cls([Event.from_line(ln, k) for k, ln in enumerate(lines)])

    def write(self, path: str | Path):
        Path(path).write_text(self.to_log())

    def __len__(self):
        return len(self.events)


@dataclass
class SimReport:
    sessions_run: int = 0
    succeeded: int = 0
    failures: list[tuple[int, int, int, str]] = field(default_factory=list)
    final_keys: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)
    common_index: int = 1

    @property
    def failed(self) -> int:
        return len(self.failures)

    def render(self) -> str:
        lines = [f"{self.succeeded}/{self.sessions_run} agreements", f"common index: {self.common_index}"]
        for (i, j), (ki, kj) in sorted(self.final_keys.items()):
            status = "ok" if ki == kj else "MISMATCH"
            lines.append(f"pair {i}-{j}: {ki} {kj} {status}")
        for s, i, j, reason in self.failures:
            lines.append(f"session {s} ({i}-{j}) failed: {reason}")
        return "\n".join(lines) + "\n"


@dataclass
class Network:
    """Provisioned state: the TA bundle, every node's key set and the common index."""

    bundle: TaBundle
    keysets: dict[int, UserKeySet]
    common_index: int


def provision(config: SimConfig) -> Network:
    try:
        family = make_family(config.p, config.m, config.family_size, config.seed)
        bundle = ta_generate(config.p, config.n, config.m, config.seed)
        keysets = {i: expand_keyset(bundle, i, family) for i in range(1, config.n + 1)}
    except (BlomError, RFamilyError, ModringError) as exc:
        raise ProvisioningFailed(str(exc)) from exc
    bundle = TaBundle(bundle.X, bundle.Y, bundle.K, tuple(family))
    common = rng_for(config.seed, "common").randrange(1, config.family_size + 1)
    return Network(bundle, keysets, common)


def _draw_subset(config: SimConfig, keyset: UserKeySet, period: int, previous):
    # redraw until the subset changes, when more than one subset exists
    for attempt in itertools.count():
        seed = derive_seed(config.seed, "publish", keyset.user, period, attempt)
        b = publish(keyset, None, (0, 1), seed, size=config.subset_size)
        if previous is None or b.indices != previous or config.subset_size == config.family_size:
            return b.indices


def run_sim(config: SimConfig) -> tuple[SimReport, Transcript]:
    net = provision(config)
    report = SimReport(common_index=net.common_index)
    transcript = Transcript()
    pairs = list(itertools.combinations(range(1, config.n + 1), 2))
    current: dict[int, PublishedBundle] = {}
    last_subset: dict[int, list[int]] = {}
    period = -1

    for s in range(config.session_count):
        now = s
        if config.mode == "randomized" and now // config.rotation_period != period:
            period = now // config.rotation_period
            start = period * config.rotation_period
            for node, ks in net.keysets.items():
                idx = _draw_subset(config, ks, period, last_subset.get(node))
                last_subset[node] = idx
                current[node] = publish(ks, idx, (start, start + config.rotation_period))
                transcript.emit(now, node, BROADCAST, encode_message(current[node]))
        elif config.mode == "aligned" and not current:
            for node, ks in net.keysets.items():
                current[node] = publish(ks, ks.indices)
                transcript.emit(now, node, BROADCAST, encode_message(current[node]))

        i, j = pairs[s % len(pairs)]
        hello = {"format": HELLO_FORMAT, "session": str(s), "from": str(i), "to": str(j)}
        transcript.emit(now, i, j, encode_message(hello))
        try:
            if config.mode == "randomized":
                ki = randomized_agree(net.keysets[i], net.common_index, current[j],
                                      derive_seed(config.seed, "choice", i, s), clock=now).final_key
                kj = randomized_agree(net.keysets[j], net.common_index, current[i],
                                      derive_seed(config.seed, "choice", j, s), clock=now,
                                      role="responder").final_key
            else:
                v = rng_for(config.seed, "choice", i, s).randrange(1, config.family_size + 1)
                transcript.emit(now, i, j, encode_message(AlignedIndexAnnounce(i, v)))
                ki = aligned_agree(net.keysets[i], v, current[j].item(v).entries).value
                kj = aligned_agree(net.keysets[j], v, current[i].item(v).entries).value
        except ProtocolError as exc:
            report.failures.append((s, i, j, f"{type(exc).__name__}: {exc}"))
        else:
            report.final_keys[(i, j)] = (ki, kj)
            if ki == kj:
                report.succeeded += 1
            else:
                report.failures.append((s, i, j, f"keys differ: {ki} vs {kj}"))
        report.sessions_run += 1
    return report, transcript


@dataclass(frozen=True)
class AuditResult:
    events_scanned: int
    clean: bool = True


def _tagged(name: str, value) -> list[bytes]:
    if isinstance(value, (tuple, list)):
        body = json.dumps([str(v) for v in value], separators=(",", ":"))
    else:
        body = json.dumps(str(value))
    return [f'"{name}":{body}'.encode(), f'"{name}": {body}'.encode()]


def audit_transcript(t: Transcript, bundle: TaBundle, keysets) -> AuditResult:
    """Scan every payload for secret material.

    Flags: any serialized secret vector or secret-bearing field (scale, final
    key, common index) as a substring; long secret numbers in raw decimal; and,
    for well-formed bundles, any advertised vector that is not the owner's
    genuine identifier at that index. Raises :class:`LeakDetected`.
    """
    keysets = list(keysets.values()) if isinstance(keysets, dict) else list(keysets)
    by_user = {ks.user: ks for ks in keysets}
    weights = sorted({s.weight for s in bundle.family} or {1})

    vectors: dict[bytes, str] = {}
    tagged: dict[bytes, str] = {}
    raw: dict[bytes, str] = {}
    for ks in keysets:
        for e in ks.entries:
            what = f"secret of user {ks.user} at index {e.index}"
            vectors[json.dumps([str(v) for v in e.secret.entries], separators=(",", ":")).encode()] = what
            for b in _tagged("secret", e.secret.entries):
                tagged[b] = what
            for b in _tagged("scale", e.scale):
                tagged[b] = f"scale of user {ks.user} at index {e.index}"
            if len(str(e.scale)) >= MIN_RAW_DIGITS:
                raw[str(e.scale).encode()] = f"scale of user {ks.user} at index {e.index}"
    for i in range(bundle.n):
        for j in range(i + 1, bundle.n):
            for w in weights:
                key = bundle.K[i, j] * w % bundle.p
                for b in _tagged("final_key", key):
                    tagged[b] = f"final key of pair {i + 1}-{j + 1}"
                if len(str(key)) >= MIN_RAW_DIGITS:
                    raw[str(key).encode()] = f"final key of pair {i + 1}-{j + 1}"
    forbidden_fields = (b'"common_index"', b'"secret"', b'"scale"', b'"final_key"', b'"raw_key"')

    for k, ev in enumerate(t.events):
        data = ev.payload
        for needle, what in tagged.items():
            if needle in data:
                raise LeakDetected(k, what)
        for needle in forbidden_fields:
            if needle in data:
                raise LeakDetected(k, f"secret field {needle.decode()}")
        for needle, what in raw.items():
            if needle in data:
                raise LeakDetected(k, what)
        try:
            msg = decode_message(data)
        except (FormatError, ModringError, KeyError, TypeError, ValueError):
            # opaque payload: any secret vector encoding is a leak
            for needle, what in vectors.items():
                if needle in data:
                    raise LeakDetected(k, what)
            continue
        if isinstance(msg, PublishedBundle):
            owner = by_user.get(msg.user)
            for idx, vec in msg.items:
                if owner is None or idx not in owner or owner.entry(idx).public_id.entries != vec.entries:
                    raise LeakDetected(k, f"vector at index {idx} is not user {msg.user}'s identifier")
    return AuditResult(len(t.events))
