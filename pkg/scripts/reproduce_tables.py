"""Print the tabulated square sets and the parametric families next to a fresh scan."""
import argparse

from recsquares import analysis
from recsquares.sequence import SeqParams, element, scan_squares


def show(label: str, p: SeqParams, window: int) -> None:
    hits = scan_squares(p, window)
    roots = ", ".join(f"y_{h.k}={h.root}^2" for h in hits)
    print(f"{label:<12} {p.as_tuple()}  {roots}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--window", type=int, default=80)
    args = parser.parse_args()

    print("d = 2, t = u = 2")
    for a, b, ks, roots in analysis.TABLE_D2:
        p = SeqParams(a, b * b, 2, 2, 2)
        got = {h.k: h.root for h in scan_squares(p, args.window)}
        status = "ok" if got == dict(zip(ks, roots)) else f"MISMATCH {got}"
        print(f"  a={a:<11} b={b:<6} {sorted(got.items())}  {status}")

    print("\nfour squares, other d")
    for d, t, u, a, b in analysis.FOUR_SQUARE_OTHER_D:
        show("  even", SeqParams(a, b * b, d, t, u), args.window)

    print("\nodd powers of the unit")
    for d, t, u, a, b, _ in analysis.STEP1_EXAMPLES:
        show("  odd", SeqParams(a, b * b, d, t, u, step=1), args.window)

    print("\nfamilies")
    for n in (5, 7, 9):
        p = analysis.family_odd_n(n)
        print(f"  odd n={n}: y_1={element(p, 1).y}, y_-1={element(p, -1).y}")
    for n in (9, 13, 17):
        p = analysis.family_prime_norm(n)
        print(f"  prime norm n={n}: N(alpha)={p.n_alpha}, y_1={element(p, 1).y}")
    for p in analysis.family_case_a(3):
        print(f"  case (a) t={p.t}: d={p.d}, y_1={element(p, 1).y}, case={analysis.classify_theorem14(p).case}")


if __name__ == "__main__":
    main()
