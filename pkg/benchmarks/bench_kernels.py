"""Compare the compiled and pure-Python one-body kernels.

Run with ``python benchmarks/bench_kernels.py``. Each case assembles the
sparse entries of one minimal gamma matrix promoted to ``2S`` bosons.
"""

import argparse
import timeit

import numpy as np

from hyperbloch import _kernels_py
from hyperbloch.spin_algebra import minimal_gammas

try:
    from hyperbloch import _kernels as _compiled
except ImportError:
    _compiled = None

CASES = [(2, 4), (2, 8), (3, 3), (3, 5)]


def run_case(k, twoS, repeat):
    modes = 2**k
    occ = _kernels_py.occupation_basis(modes, twoS)
    mat = np.ascontiguousarray(minimal_gammas(k)[0], dtype=np.complex128)
    out = {"k": k, "twoS": twoS, "dim": len(occ)}
    backends = {"python": _kernels_py.one_body_coo}
    if _compiled is not None:
        backends["cython"] = _compiled.one_body_coo
    for name, fn in backends.items():
        t = timeit.Timer(lambda: fn(occ, mat)).repeat(repeat, 1)
        out[name] = min(t)
    if _compiled is not None:
        out["speedup"] = out["python"] / out["cython"]
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; timing the Python kernel only")
    print(f"{'k':>2} {'2S':>3} {'dim':>6} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for k, twoS in CASES:
        r = run_case(k, twoS, args.repeat)
        cy = f"{r['cython']:11.5f}" if "cython" in r else f"{'-':>11}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        print(f"{k:>2} {twoS:>3} {r['dim']:>6} {r['python']:11.5f} {cy} {sp}")


if __name__ == "__main__":
    main()
