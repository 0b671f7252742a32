"""Time the identity catalog, identity by identity.

Useful when tuning the series window or comparing backends: prints a
per-identity wall-clock table, slowest first, plus the overall verdict.

    python3 scripts/identity_timing.py --s 2 --backend points --trials 3
"""

import argparse
import time

from reecurve.identities import IDENTITY_CATALOG, verify_catalog


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--backend", choices=("symbolic", "points"), default=None)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window", type=int, default=None)
    args = ap.parse_args()

    backend = args.backend or ("symbolic" if args.s == 1 else "points")
    rows = []
    failures = 0
    for spec in IDENTITY_CATALOG:
        t0 = time.time()
        res = verify_catalog(args.s, backend, keys=[spec.key],
                             trials=args.trials, seed=args.seed,
                             window=args.window)
        dt = time.time() - t0
        bad = sum(1 for r in res if not r.ok and not r.skipped)
        skipped = sum(1 for r in res if r.skipped)
        failures += bad
        rows.append((dt, spec.key, len(res), bad, skipped))

    rows.sort(reverse=True)
    print(f"s={args.s} backend={backend} trials={args.trials} seed={args.seed}")
    print(f"{'identity':14} {'instances':>9} {'failed':>6} {'skipped':>7} {'secs':>8}")
    for dt, key, n, bad, skipped in rows:
        print(f"{key:14} {n:>9d} {bad:>6d} {skipped:>7d} {dt:>8.3f}")
    total = sum(r[0] for r in rows)
    print(f"total {total:.2f}s, {failures} failures")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
