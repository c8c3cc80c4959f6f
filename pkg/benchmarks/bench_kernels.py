"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat K]``. Prints one
JSON object per (kernel, size) with the best-of-K time per call for each
backend and the speedup.
"""

import argparse
import json
import timeit

import numpy as np

from susyrep import kernels
from susyrep.enumeration import _row_structure, enumerate_bc


def cases(rng):
    for n, d in ((4, 4), (10, 8), (16, 16)):
        L, R = rng.normal(size=(2, n, d, d))
        yield f"residual_vector N={n} d={d}", "residual_vector", (L, R)
        yield f"jacobian N={n} d={d}", "jacobian", (L, R)
    for d in (3, 4):
        sps = list(enumerate_bc(d))
        yield f"pair_compat BC{d} ({len(sps)} elements)", "pair_compat", _row_structure(sps, transpose=False)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = kernels.backends()
    if "compiled" not in backends:
        print(json.dumps({"error": "compiled extension not built; only the fallback is available"}))
    rng = np.random.default_rng(0)
    for label, name, inputs in cases(rng):
        row = {"case": label}
        for backend, mod in sorted(backends.items()):
            fn = getattr(mod, name)
            timer = timeit.Timer(lambda: fn(*inputs))
            number, _ = timer.autorange()
            row[backend] = min(timer.repeat(args.repeat, number)) / number
        if len(backends) == 2:
            row["speedup"] = row["python"] / row["compiled"]
        print(json.dumps(row))


if __name__ == "__main__":
    main()
