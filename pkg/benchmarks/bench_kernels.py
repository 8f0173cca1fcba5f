"""Compare the numba kernels with the pure-numpy fallback.

The backend is fixed at import time, so each backend runs in its own
subprocess:

    python benchmarks/bench_kernels.py            # both backends, table
    python benchmarks/bench_kernels.py --worker   # current backend only, JSON
"""

from __future__ import annotations

import argparse
import json
import math
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    fn()  # warm-up (triggers compilation on the numba backend)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def worker(repeat: int) -> dict:
    import numpy as np

    from imcf_solitons import _accel, _kernels
    from imcf_solitons.profile import GraphOverH, ProfileIVP, Span, integrate_profile
    from imcf_solitons.core import SolitonSpec

    th = np.linspace(0.0, 2 * math.pi, 512, endpoint=False)
    circle = np.column_stack([np.cos(th), np.sin(th)])

    def flow():
        pts = circle.copy()
        _kernels.flow_euler_block(pts, True, 1e-5, 2000, 0.4, 1.0)

    rng = np.random.default_rng(0)
    a = rng.normal(size=(1500, 2))
    b = rng.normal(size=(1500, 2))

    def hausdorff():
        _kernels.hausdorff(a, b)

    def rk4():
        _kernels.rk4_critical_graph(2, -1.0, 1.0, 0.5, 5.0, 1e-4)

    ivp = ProfileIVP(SolitonSpec.rotational(2, 1.0), GraphOverH(-1.0, 1.0, 0.5), Span(max_h=20.0))

    def bottle():
        integrate_profile(ivp)

    cases = {"flow_euler_block (512 pts x 2000 steps)": flow,
             "hausdorff (1500 x 1500)": hausdorff,
             "rk4_critical_graph (60k steps)": rk4,
             "integrate_profile (bottle, |h| <= 20)": bottle}
    return {"backend": _accel.BACKEND, "timings": {k: _best(f, repeat) for k, f in cases.items()}}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return 0
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, IMCF_SOLITONS_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                             env=env, check=True, capture_output=True, text=True).stdout
        data = json.loads(out)
        results[data["backend"]] = data["timings"]
    width = max(len(k) for k in results["numba"])
    print(f"{'kernel':<{width}}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}")
    for k in results["numba"]:
        tn, tp = results["numba"][k], results["numpy"][k]
        print(f"{k:<{width}}  {tn:>10.4f}  {tp:>10.4f}  {tp / tn:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
