"""Round-trip benchmark: draw random g, sum delta(g), check the answer.

Usage: python3 scripts/roundtrip_benchmark.py [--count 50] [--seed 7] [--systems example,xcomp]
"""

import argparse
import random
import time

from parsum import multipoly as mp
from parsum.classify import Normal, special_test, split_factorization
from parsum.field import apply_sigma, delta, make_companion, make_general
from parsum.scalar import K
from parsum.telescoper import Found, SumReport, parallel_sum, verify

xk = K.gens[0]

SYSTEMS = {
    "example": (make_companion([-6, 5]), [(2, -1), (3, -1)]),
    "xcomp": (make_companion([xk + 1, 2 * xk]), []),
    # has a new constant, so failures here are expected
    "strange": (make_general([[2, xk], [0, 2]]), [(0, 1)]),
}
NONZERO = [-3, -2, -1, 1, 2, 3]


def random_g(rng, sys, specials):
    F = sys.field
    t0, t1, x = F.gens
    while True:
        p = rng.choice(NONZERO) + rng.randint(-1, 1) * x
        p = p * t0 + (rng.choice(NONZERO) + rng.randint(-1, 1) * x) * t1
        p = F(mp.normalize_assoc(p.numer))
        if isinstance(special_test(sys, p.numer), Normal):
            break
    den = F.one
    for k in rng.sample(range(3), rng.randint(1, 2)):
        den *= F(mp.normalize_assoc(apply_sigma(sys, p, k).numer))
    if specials and rng.random() < 0.5:
        c0, c1 = rng.choice(specials)
        den *= c0 * t0 + c1 * t1
    num = F.zero
    for e0 in range(3):
        for e1 in range(3 - e0):
            num += rng.randint(-2, 2) * x ** rng.randint(0, 2) * t0**e0 * t1**e1
    return (num or F.one) / den


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--systems", default="example,xcomp")
    args = ap.parse_args()
    names = args.systems.split(",")

    rng = random.Random(args.seed)
    tally = {}
    start = time.perf_counter()
    for i in range(args.count):
        name = names[i % len(names)]
        sys, specials = SYSTEMS[name]
        g = random_g(rng, sys, specials)
        f = delta(sys, g)
        rep = SumReport()
        t = time.perf_counter()
        res = parallel_sum(sys, f, report=rep)
        dt = time.perf_counter() - t
        status = type(res).__name__
        if isinstance(res, Found):
            ok = verify(sys, res.g, f)
            vn = split_factorization(sys, res.g.denom).normal_part(sys.n)
            within = mp.is_tfree((sys.field(rep.bound) / sys.field(vn)).denom)
            status += "" if ok and within else " (CHECK FAILED)"
        tally[status] = tally.get(status, 0) + 1
        print(f"{i:3d} {name:8s} {status:24s} {dt:6.2f}s")
    print(f"total {time.perf_counter() - start:.1f}s", tally)


if __name__ == "__main__":
    main()
