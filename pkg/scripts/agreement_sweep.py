"""Run the network simulator over a grid of primes, subset sizes and seeds.

Prints one row per configuration with the agreement count and the number of
distinct final keys observed across sessions.
"""

import argparse
import itertools

from keyset_cipher.netsim import SimConfig, audit_transcript, provision, run_sim


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="11,101,1000003")
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--family", type=int, default=6)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--mode", choices=["randomized", "aligned"], default="randomized")
    args = ap.parse_args(argv)

    print(f"{'p':>10} {'subset':>6} {'seed':>4} {'agreed':>9} {'keys':>5}")
    bad = 0
    for p, subset, seed in itertools.product(
            map(int, args.primes.split(",")), range(1, args.family + 1), range(args.seeds)):
        cfg = SimConfig(p=p, n=args.n, m=3, family_size=args.family, subset_size=subset,
                        seed=seed, mode=args.mode)
        report, transcript = run_sim(cfg)
        net = provision(cfg)
        audit_transcript(transcript, net.bundle, net.keysets)
        keys = {k for pair in report.final_keys.values() for k in pair}
        bad += report.failed
        print(f"{p:>10} {subset:>6} {seed:>4} {report.succeeded:>4}/{report.sessions_run:<4} {len(keys):>5}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
