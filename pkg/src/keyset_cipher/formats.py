"""JSON file formats and handshake wire encoding.

All integers are written as decimal strings so any prime size round-trips.
Every document carries a ``format`` tag. Files are written with a fixed key
order; wire messages use the same layout in compact form.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .blom import PublicIdVector, SecretKeyVector, TaBundle, ta_load
from .keyset import KeySetEntry, UserKeySet
from .modring import MatZ, Modulus
from .protocol import AlignedIndexAnnounce, PublishedBundle
from .rfamily import CirculantSpec

TA_FORMAT = "keyset-ta-v1"
USER_FORMAT = "keyset-user-v1"
BUNDLE_FORMAT = "keyset-bundle-v1"
ANNOUNCE_FORMAT = "keyset-announce-v1"
HELLO_FORMAT = "keyset-hello-v1"


class FormatError(ValueError):
    pass


def _s(v: int) -> str:
    return str(int(v))


def _i(v: Any) -> int:
    if not isinstance(v, str):
        raise FormatError(f"expected a decimal string, got {v!r}")
    try:
        return int(v, 10)
    except ValueError:
        raise FormatError(f"not a decimal integer: {v!r}") from None


def _vec(values) -> list[str]:
    return [_s(v) for v in values]


def _mat(m: MatZ) -> list[list[str]]:
    return [_vec(m.row(i)) for i in range(m.rows)]


def _check_format(doc: dict, expected: str):
    if not isinstance(doc, dict) or doc.get("format") != expected:
        got = doc.get("format") if isinstance(doc, dict) else type(doc).__name__
        raise FormatError(f"expected format {expected!r}, got {got!r}")


def _field(doc: dict, name: str):
    try:
        return doc[name]
    except KeyError:
        raise FormatError(f"missing field {name!r}") from None


# -- trusted authority ------------------------------------------------------

def ta_to_dict(bundle: TaBundle) -> dict:
    return {
        "format": TA_FORMAT,
        "p": _s(bundle.p),
        "n": _s(bundle.n),
        "m": _s(bundle.m),
        "X": _mat(bundle.X),
        "Y": _mat(bundle.Y),
        "family": [{"row": _vec(s.first_row), "weight": _s(s.weight)} for s in bundle.family],
    }


def ta_from_dict(doc: dict) -> TaBundle:
    _check_format(doc, TA_FORMAT)
    modulus = Modulus(_i(_field(doc, "p")))
    X = MatZ.from_rows([[_i(v) for v in r] for r in _field(doc, "X")], modulus)
    Y = MatZ.from_rows([[_i(v) for v in r] for r in _field(doc, "Y")], modulus)
    if (X.rows, X.cols) != (_i(_field(doc, "n")), _i(_field(doc, "m"))):
        raise FormatError("X shape disagrees with n, m")
    family = []
    for item in doc.get("family", []):
        spec = CirculantSpec(tuple(_i(v) for v in item["row"]), modulus)
        if "weight" in item and _i(item["weight"]) != spec.weight:
            raise FormatError(f"family row {spec.first_row}: stored weight {item['weight']} != {spec.weight}")
        family.append(spec)
    return ta_load(X, Y, tuple(family))


# -- user key set -----------------------------------------------------------

def user_to_dict(keyset: UserKeySet, common_index: int) -> dict:
    return {
        "format": USER_FORMAT,
        "p": _s(keyset.p),
        "user": _s(keyset.user),
        "common_index": _s(common_index),
        "entries": [
            {
                "index": _s(e.index),
                "transform": _vec(e.transform),
                "secret": _vec(e.secret.entries),
                "public_id": _vec(e.public_id.entries),
                "scale": _s(e.scale),
            }
            for e in keyset.entries
        ],
    }


def user_from_dict(doc: dict) -> tuple[UserKeySet, int]:
    _check_format(doc, USER_FORMAT)
    modulus = Modulus(_i(_field(doc, "p")))
    user = _i(_field(doc, "user"))
    entries, family = [], []
    for k, e in enumerate(_field(doc, "entries"), start=1):
        index = _i(e["index"])
        if index != k:
            raise FormatError(f"entry {k} has index {index}")
        spec = CirculantSpec(tuple(_i(v) for v in e["transform"]), modulus)
        family.append(spec)
        entries.append(KeySetEntry(
            index,
            SecretKeyVector(user, tuple(_i(v) for v in e["secret"]), modulus),
            PublicIdVector(user, tuple(_i(v) for v in e["public_id"]), modulus),
            _i(e["scale"]),
            spec.first_row,
        ))
    if not entries:
        raise FormatError("user file has no entries")
    common = _i(_field(doc, "common_index"))
    if not 1 <= common <= len(entries):
        raise FormatError(f"common index {common} outside 1..{len(entries)}")
    return UserKeySet(user, modulus, tuple(entries), tuple(family)), common


# -- published bundle / handshake ------------------------------------------

def bundle_to_dict(bundle: PublishedBundle) -> dict:
    p = bundle.items[0][1].modulus.p
    return {
        "format": BUNDLE_FORMAT,
        "p": _s(p),
        "user": _s(bundle.user),
        "items": [{"index": _s(i), "public_id": _vec(v.entries)} for i, v in bundle.items],
        "validity": [_s(bundle.validity[0]), _s(bundle.validity[1])],
    }


def bundle_from_dict(doc: dict) -> PublishedBundle:
    _check_format(doc, BUNDLE_FORMAT)
    modulus = Modulus(_i(_field(doc, "p")))
    user = _i(_field(doc, "user"))
    items = tuple(
        (_i(it["index"]), PublicIdVector(user, tuple(_i(v) for v in it["public_id"]), modulus))
        for it in _field(doc, "items")
    )
    start, end = (_i(v) for v in _field(doc, "validity"))
    return PublishedBundle(user, items, (start, end))


def announce_to_dict(msg: AlignedIndexAnnounce) -> dict:
    return {"format": ANNOUNCE_FORMAT, "user": _s(msg.user), "index": _s(msg.index)}


def announce_from_dict(doc: dict) -> AlignedIndexAnnounce:
    _check_format(doc, ANNOUNCE_FORMAT)
    return AlignedIndexAnnounce(_i(_field(doc, "user")), _i(_field(doc, "index")))


def encode_message(msg) -> bytes:
    if isinstance(msg, PublishedBundle):
        doc = bundle_to_dict(msg)
    elif isinstance(msg, AlignedIndexAnnounce):
        doc = announce_to_dict(msg)
    elif isinstance(msg, dict):
        doc = msg
    else:
        raise FormatError(f"cannot encode {type(msg).__name__}")
    return json.dumps(doc, separators=(",", ":")).encode()


def decode_message(data: bytes):
    try:
        doc = json.loads(data.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"not a JSON message: {exc}") from None
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == BUNDLE_FORMAT:
        return bundle_from_dict(doc)
    if fmt == ANNOUNCE_FORMAT:
        return announce_from_dict(doc)
    if fmt == HELLO_FORMAT:
        return doc
    raise FormatError(f"unknown message format {fmt!r}")


# -- files ------------------------------------------------------------------

def dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_json(path: str | Path, doc: dict):
    Path(path).write_text(dump(doc))


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
