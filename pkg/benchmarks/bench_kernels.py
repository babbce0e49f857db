"""Time the compiled and pure-numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from kaep import _pykernels

try:
    from kaep import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    F2 = rng.random((200, 2))
    F3 = rng.random((200, 3))
    front = np.column_stack([np.linspace(0, 1, 500), 1 - np.sqrt(np.linspace(0, 1, 500))])
    ref2, ref3 = np.full(2, 1.1), np.full(3, 1.1)
    return [
        ("nondominated_rank  200x2", "nondominated_rank", (F2,)),
        ("nondominated_rank  200x3", "nondominated_rank", (F3,)),
        ("nondominated_mask  200x3", "nondominated_mask", (F3,)),
        ("crowding_distance  500x2", "crowding_distance", (front,)),
        ("hv2d               500", "hv2d", (front, ref2)),
        ("hv3d               100", "hv3d", (F3[:100], ref3)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    args = ap.parse_args()

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled backend not built; timing the numpy fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':28s}" + "".join(f"{name:>12s}" for name, _ in backends) + "     speedup")
    for label, fn, argv in cases(rng):
        best = []
        for _, mod in backends:
            f = getattr(mod, fn)
            t = min(timeit.repeat(lambda: f(*argv), repeat=args.repeat, number=args.number))
            best.append(t / args.number)
        row = f"{label:28s}" + "".join(f"{1e3 * t:10.3f}ms" for t in best)
        if len(best) == 2:
            row += f"   {best[0] / best[1]:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
