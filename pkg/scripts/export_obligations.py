#!/usr/bin/env python3
"""Write one SMT-LIB 2 and one TPTP proof obligation per rule of a
system into a directory, for external certification.

Example:
    python3 scripts/export_obligations.py builtin:figure1 --out obligations/
    z3 obligations/rule-13.smt2      # expect: unsat
"""

import argparse
import pathlib

from relfrag.fo import export_equation_smt2, export_equation_tptp
from relfrag.rewriting import load_rules
from relfrag.terms import Var
from relfrag.words import apply_word


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("rules", help="builtin:figure1 or a rule file path")
    ap.add_argument("--out", required=True)
    ap.add_argument("--min-size", type=int, default=5)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rs = load_rules(args.rules)
    for rule in rs.rules:
        lhs = apply_word(rule.small, Var("a"))
        rhs = apply_word(rule.large, Var("a"))
        (out / f"rule-{rule.index:02}.smt2").write_text(
            export_equation_smt2(lhs, rhs, args.min_size), encoding="utf-8")
        (out / f"rule-{rule.index:02}.p").write_text(
            export_equation_tptp(lhs, rhs, args.min_size), encoding="utf-8")
    print(f"wrote {2 * len(rs.rules)} files to {out}/")


if __name__ == "__main__":
    main()
