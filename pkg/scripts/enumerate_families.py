"""List scalar-orthogonal circulant rows with leading entry 1 for small m and p."""

import argparse

from keyset_cipher.rfamily import search_rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--p", type=int, nargs="+", default=[7, 11, 13])
    ap.add_argument("--show", action="store_true", help="print every row, not just counts")
    args = ap.parse_args(argv)
    for m in args.m:
        for p in args.p:
            rows = search_rows(m, p)
            print(f"m={m} p={p}: {len(rows)} rows")
            if args.show:
                for spec in rows:
                    print(f"   {spec.first_row}  w={spec.weight}")


if __name__ == "__main__":
    main()
