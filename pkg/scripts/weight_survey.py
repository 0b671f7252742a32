"""Survey vanishing profiles and weights across point types.

Rational points all share one profile and a positive weight; generic
extension points reproduce the order sequence with weight zero.  The
final table cross-checks the ramification degree split at several
levels without any series arithmetic.

    python3 scripts/weight_survey.py --s 1 --samples 3
"""

import argparse

from reecurve.params import ree_params
from reecurve.series import origin_point, random_point, rational_point
from reecurve.weierstrass import divisor_degree_audit, vanishing_orders


def show(tag: str, series: str, point) -> None:
    prof = vanishing_orders(series, point)
    js = " ".join(str(j) for j in prof.jorders)
    print(f"  {tag:24} {series}: weight {prof.weight:>6d}   j = {js}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--samples", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--audit-levels", type=int, nargs="*", default=[1, 2, 3])
    args = ap.parse_args()

    print(f"profiles at s={args.s}")
    for series in ("D", "E"):
        show("origin", series, origin_point(args.s))
        for j in range(args.samples):
            show(f"rational seed={args.seed + j}", series,
                 rational_point(args.s, seed=args.seed + j))
        # one non-rational sample; extension 6 is the smallest that adds points
        show("generic ext=6", series,
             random_point(args.s, seed=args.seed, extension=6))

    print("degree audits")
    for s in args.audit_levels:
        for series in ("D", "E"):
            a = divisor_degree_audit(ree_params(s), series)
            print(f"  s={s} {series}: {a['two_g_minus_2']}*{a['sum_orders']} "
                  f"+ {a['r_plus_1']}*{a['m']} = {a['degree']} "
                  f"= {a['weight_per_rational_point']} * {a['n_rational']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
