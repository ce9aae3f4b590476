"""Run the two-variable worked example and print each intermediate stage."""

import time
from pathlib import Path

from parsum.cli import load_problem
from parsum.parse import format_factored, format_poly, primitive_integer
from parsum.telescoper import Found, SumReport, parallel_sum, verify

PROBLEM = Path(__file__).resolve().parent.parent / "problems" / "worked_example.problem"


def main():
    prob = load_problem(str(PROBLEM))
    sys = prob.system
    f = prob.summand
    rep = SumReport()
    start = time.perf_counter()
    res = parallel_sum(sys, f, denfactors=prob.denfactors, report=rep)
    elapsed = time.perf_counter() - start

    print("classification of the denominator:")
    for p, m, c in rep.split.factors:
        kind = f"special (ell={c.ell})" if hasattr(c, "ell") else "normal"
        print(f"  {format_poly(primitive_integer(p)[0])}  multiplicity {m}  {kind}")
    print("dispersion:", rep.dispersion)
    print("normal bound:", format_factored(sys.field(rep.bound)))
    print("special guess:", format_factored(sys.field(rep.special_guess)))
    if isinstance(res, Found):
        print("g =", format_factored(res.g))
        print("verified:", verify(sys, res.g, f))
    else:
        print("result:", res)
    print(f"time: {elapsed:.2f}s")


if __name__ == "__main__":
    main()
