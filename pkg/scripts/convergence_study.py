"""Fixed-step RK4: observed order and integral drift against step size."""

import argparse

from abelchain.numerics import NOT_APPLICABLE, convergence_order, fixed_step_drift


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="abel")
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--steps", type=float, nargs="+", default=[0.1, 0.05, 0.025, 0.0125])
    args = ap.parse_args()
    for n in (2, 3, 4):
        x0 = [1.0] * n
        print(f"# order {n}, x0 = {x0}, k = {args.k}")
        for h in args.steps:
            p = convergence_order(args.family, n, args.k, x0, h)
            p_text = "n/a" if p is NOT_APPLICABLE else f"{p:.3f}"
            d = fixed_step_drift(args.family, n, args.k, x0, h)
            print(f"  h={h:<7} order={p_text:>6}  max J drift={d:.3e}")


if __name__ == "__main__":
    main()
