"""Time the compiled edge-subset kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n 6] [--repeat 3]

Both backends must return identical indicator arrays; the script exits 1 if
they do not, or if the extension is not built.
"""

from __future__ import annotations

import argparse
import sys
import time

from homopoly import _kernels_py
from homopoly.graphs import make_family

try:
    from homopoly import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install --no-build-isolation -e .`")
        return 1

    cases = [
        ("hom K_3", lambda mod: mod.hom_indicator(args.n, make_family("complete", 3).adjacency_masks())),
        ("hom edge", lambda mod: mod.hom_indicator(args.n, make_family("edge").adjacency_masks())),
        ("hom C_5", lambda mod: mod.hom_indicator(args.n, make_family("cycle", 5).adjacency_masks())),
        ("complete bipartite", lambda mod: mod.component_indicator(args.n, 0)),
        ("clique", lambda mod: mod.component_indicator(args.n, 1)),
    ]
    print(f"n={args.n}  edge subsets={1 << args.n * (args.n - 1) // 2}")
    print(f"{'kernel':<20}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    status = 0
    for label, fn in cases:
        tp, outp = best_of(lambda: fn(_kernels_py), args.repeat)
        tc, outc = best_of(lambda: fn(_kernels), args.repeat)
        same = bytes(outp) == bytes(outc)
        if not same:
            status = 1
        print(f"{label:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc if tc else float('inf'):>9.1f}x"
              + ("" if same else "  MISMATCH"))
    return status


if __name__ == "__main__":
    sys.exit(main())
