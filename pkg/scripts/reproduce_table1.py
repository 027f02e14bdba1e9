"""Re-derive every parameter-table row and print a side-by-side comparison.

Usage: python scripts/reproduce_table1.py [--parallel N]
"""
import argparse
import os

from ginocchio import cli, table1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    verdicts = cli.pmap(cli.check_row, table1.ROWS, args.parallel)
    print(f"{'row':>3} {'E* table':>10} {'E* found':>10} {'n':>3} {'V(0) formula':>22} "
          f"{'V(0) printed':>22}  profile                  checks")
    for r, v in zip(table1.ROWS, verdicts):
        checks = "".join(c if ok else "-" for c, ok in
                         (("E", v.E_ok), ("n", v.n_ok), ("V", v.v0_ok), ("P", v.profile_ok)))
        note = "  (printed V(0) flagged)" if v.flagged else ""
        print(f"{r.row:>3} {r.E_star:>10.3f} {v.E_found:>10.3f} {str(v.n_found):>3} "
              f"{v.V0.real:>10.3f}{v.V0.imag:+10.3f}i {r.V0_printed.real:>10.3f}"
              f"{r.V0_printed.imag:+10.3f}i  {v.profile:<24} {checks}{note}")
    for fam in table1.NO_SS:
        for a, b in table1.family_draws():
            n = cli.check_family((fam, a, b))
            print(f"{fam.row:>3} a={a:.3f} b={b:.3f} lambda={table1.FAMILY_LAMBDA}: "
                  f"{n} singularities in E in {table1.FAMILY_E_RANGE}")


if __name__ == "__main__":
    main()
