"""Time the pivot identities and the aggregate identity on the random corpus, by matrix size."""

import argparse
import time
from collections import defaultdict

from matstellen.certificates import cert_eval
from matstellen.reduction import reduce_matrix, step_certificate
from matstellen.testing import identity_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    timing = defaultdict(float)
    counts = defaultdict(int)
    failures = 0
    for a in identity_corpus(args.count, args.seed):
        t0 = time.perf_counter()
        red = reduce_matrix(a)
        ok = red.verified and cert_eval(step_certificate(a, verify=False)) == a.scale(red.t)
        timing[a.n] += time.perf_counter() - t0
        counts[a.n] += 1
        failures += not ok
    for n in sorted(counts):
        print(f"n={n}: {counts[n]:4d} matrices, {timing[n]:6.2f}s, {1000 * timing[n] / counts[n]:7.1f} ms each")
    print(f"failures: {failures}")


if __name__ == "__main__":
    main()
