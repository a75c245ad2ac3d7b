"""Time exact rank on the flag-big differential matrices with both backends.

    python3 benchmarks/bench_rank.py --n 6
"""

import argparse
import time

from sullivan import linalg
from sullivan.cdga import differential_matrix
from sullivan.models import builtin_model


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=6)
    parser.add_argument("--repeat", type=int, default=1)
    args = parser.parse_args()

    c = builtin_model("flag-big", args.n)
    mats = [differential_matrix(c, d) for d in range(4 * args.n + 1)]
    print(f"flag-big n={args.n}: {len(mats)} matrices, largest {max(m.shape for m in mats)}")

    backends = ["python"] + (["compiled"] if linalg.BACKEND == "compiled" else [])
    results = {}
    for backend in backends:
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            ranks = [linalg.rank(m, backend=backend) for m in mats]
            best = min(best, time.perf_counter() - t0)
        results[backend] = (best, ranks)
        print(f"{backend:>9}: {best:8.3f}s")
    if len(results) == 2:
        (tp, rp), (tc, rc) = results["python"], results["compiled"]
        assert rp == rc, "backends disagree"
        print(f"  speedup: {tp / tc:.1f}x (ranks identical)")
    else:
        print("  compiled kernel not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
