"""Compare the compiled and pure-Python numeric kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import importlib
import timeit

from owdvv import _kernels_py

CASES = {
    "theta1_jet": lambda k: k.theta1_jet(0.3 + 0.4j, 0.1 + 1.2j, 40, 4, 2),
    "e2_jet": lambda k: k.e2_jet(0.1 + 1.2j, 40, 3),
    "e2_lattice(M=100)": lambda k: k.e2_lattice(2j, 100),
}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        compiled = importlib.import_module("owdvv._kernels")
    except ImportError:
        compiled = None
        print("compiled backend not built; timing the Python kernels only")
    print(f"{'kernel':<20}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, fn in CASES.items():
        number = 1 if "lattice" in name else 200
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=number, repeat=args.repeat)) / number
        if compiled is None:
            print(f"{name:<20}{t_py * 1e3:>14.4f}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(compiled), number=number, repeat=args.repeat)) / number
        print(f"{name:<20}{t_py * 1e3:>14.4f}{t_cy * 1e3:>14.4f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
