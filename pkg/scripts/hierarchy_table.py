"""Print the first members of both hierarchies with term counts and weights."""

import argparse

from abelchain.hierarchy import OperatorKind, hierarchy_member, weight
from abelchain.polycore import render


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=6)
    ap.add_argument("--style", choices=["indexed", "named", "latex"], default="named")
    args = ap.parse_args()
    for kind in OperatorKind:
        print(f"# {kind.value}")
        for m in range(args.max_order + 1):
            expr = hierarchy_member(kind, m).expression
            (w,) = weight(expr, kind)
            text = render(expr, args.style)
            if len(text) > 100:
                text = text[:97] + "..."
            print(f"m={m:2d} terms={len(expr.terms):4d} weight={w:3d}  {text}")


if __name__ == "__main__":
    main()
