"""Command line: setup, provision, publish, agree, simulate, verify-paper.

Exit codes: 0 success, 1 regression mismatch, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .blom import TaBundle, key_scale, ta_generate, ta_load
from .keyset import expand_keyset
from .modring import MatZ, ModringError, Modulus
from .netsim import ProvisioningFailed, SimConfig, run_sim
from .protocol import FOREVER, ExpiredBundle, aligned_agree, publish, randomized_agree
from .reference import checklist, run_checks
from .rfamily import CirculantSpec, make_family


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None


def _read_matrix(path: str, modulus: Modulus) -> MatZ:
    """JSON array of rows, or whitespace/comma separated text, one row per line."""
    text = Path(path).read_text()
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        rows = [_ints(line) for line in text.splitlines() if line.strip()]
    return MatZ.from_rows([[int(v) for v in r] for r in rows], modulus)


def _family(args, p: Modulus, m: int) -> tuple[CirculantSpec, ...]:
    if args.family_row:
        rows = [tuple(_ints(r)) for r in args.family_row]
        ident = (1,) + (0,) * (m - 1)
        if rows[0] != ident:
            rows.insert(0, ident)
        return tuple(CirculantSpec(r, p) for r in rows)
    return tuple(make_family(p, m, args.family_size, args.seed))


def cmd_setup(args) -> int:
    p = Modulus(args.p)
    if args.load_x or args.load_y:
        if not (args.load_x and args.load_y):
            raise UsageError("--load-x and --load-y go together")
        X, Y = _read_matrix(args.load_x, p), _read_matrix(args.load_y, p)
        bundle = ta_load(X, Y)
    else:
        if args.n is None or args.m is None:
            raise UsageError("--n and --m are required without --load-x/--load-y")
        bundle = ta_generate(p, args.n, args.m, args.seed)
    bundle = TaBundle(bundle.X, bundle.Y, bundle.K, _family(args, p, bundle.m))
    formats.write_json(args.out, formats.ta_to_dict(bundle))
    print("scales: " + " ".join(str(key_scale(bundle, i)) for i in range(1, bundle.n + 1)))
    print(f"family: {len(bundle.family)} rows, weights "
          + " ".join(str(s.weight) for s in bundle.family))
    return 0


def cmd_provision(args) -> int:
    bundle = formats.ta_from_dict(formats.read_json(args.ta))
    keyset = expand_keyset(bundle, args.user)
    if not 1 <= args.common <= len(keyset):
        raise UsageError(f"common index {args.common} outside 1..{len(keyset)}")
    formats.write_json(args.out, formats.user_to_dict(keyset, args.common))
    print(f"user {args.user}: {len(keyset)} keys, scales "
          + " ".join(str(e.scale) for e in keyset.entries))
    return 0


def cmd_publish(args) -> int:
    keyset, _ = formats.user_from_dict(formats.read_json(args.user_file))
    indices = _ints(args.indices) if args.indices is not None else None
    validity = (args.valid_from, args.valid_until)
    bundle = publish(keyset, indices, validity, args.seed, size=args.size)
    formats.write_json(args.out, formats.bundle_to_dict(bundle))
    print("published indices: " + " ".join(map(str, bundle.indices)))
    return 0


def cmd_agree(args) -> int:
    keyset, common = formats.user_from_dict(formats.read_json(args.user_file))
    peer = formats.bundle_from_dict(formats.read_json(args.bundle))
    if args.mode == "aligned":
        if args.index is None:
            raise UsageError("aligned mode needs --index")
        if not peer.valid_at(args.clock):
            raise ExpiredBundle(f"bundle valid for [{peer.validity[0]}, {peer.validity[1]}), clock {args.clock}")
        key = aligned_agree(keyset, args.index, peer.item(args.index).entries).value
    else:
        ctx = randomized_agree(keyset, common, peer, args.seed, clock=args.clock, chosen_index=args.index)
        key = ctx.final_key
    print(key)
    return 0


def cmd_simulate(args) -> int:
    config = SimConfig(p=args.p, n=args.n, m=args.m, family_size=args.family,
                       subset_size=args.subset, rotation_period=args.period,
                       sessions=args.sessions, seed=args.seed, mode=args.mode)
    report, transcript = run_sim(config)
    sys.stdout.write(report.render())
    if args.transcript:
        transcript.write(args.transcript)
    return 0 if report.failed == 0 else 1


def cmd_verify_paper(args) -> int:
    if args.list:
        for k, check in enumerate(checklist(args.printed_erratum), start=1):
            print(f"{k}. {check.name}")
        return 0
    status = 0
    for k, o in enumerate(run_checks(args.printed_erratum), start=1):
        print(f"[{'PASS' if o.ok else 'FAIL'}] {k}. {o.name}")
        for note in o.notes:
            print(f"    note: {note}")
        for label, expected, got in o.mismatches:
            print(f"    {label}: expected {expected}, computed {got}")
        if not o.ok:
            status = 1
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="keyset", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("setup", help="trusted authority: generate or load X, Y and the transform family")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--load-x")
    s.add_argument("--load-y")
    s.add_argument("--family-size", type=int, default=1,
                   help="number of transforms, identity included, drawn with --seed")
    s.add_argument("--family-row", action="append",
                   help="explicit transform first row, e.g. 1,2,3 (repeatable; identity is prepended)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("provision", help="write one user's key set")
    s.add_argument("--ta", required=True)
    s.add_argument("--user", type=int, required=True)
    s.add_argument("--common", type=int, default=1, help="private common index used for normalization")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_provision)

    s = sub.add_parser("publish", help="publish a subset of a user's identifiers")
    s.add_argument("--user-file", required=True)
    s.add_argument("--indices", help="e.g. 2,4")
    s.add_argument("--size", type=int, help="draw this many indices with --seed instead")
    s.add_argument("--valid-from", type=int, default=0)
    s.add_argument("--valid-until", type=int, default=FOREVER)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_publish)

    s = sub.add_parser("agree", help="derive the session key from a peer's bundle")
    s.add_argument("--user-file", required=True)
    s.add_argument("--bundle", required=True)
    s.add_argument("--mode", choices=("randomized", "aligned"), default="randomized")
    s.add_argument("--seed", type=int, default=0, help="choice seed (randomized mode)")
    s.add_argument("--index", type=int, help="announced index (aligned) or pinned choice (randomized)")
    s.add_argument("--clock", type=int, default=0)
    s.set_defaults(func=cmd_agree)

    s = sub.add_parser("simulate", help="run the deterministic multi-node simulation")
    s.add_argument("--p", type=int, default=11)
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--family", type=int, default=6)
    s.add_argument("--subset", type=int, default=2)
    s.add_argument("--period", type=int, default=4)
    s.add_argument("--sessions", type=int)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--mode", choices=("randomized", "aligned"), default="randomized")
    s.add_argument("--transcript")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify-paper", help="replay the published worked example")
    s.add_argument("--list", action="store_true")
    s.add_argument("--printed-erratum", action="store_true",
                   help="assert the printed weight 5 at a=9 instead of the computed 9")
    s.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModringError, UsageError, ProvisioningFailed, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
