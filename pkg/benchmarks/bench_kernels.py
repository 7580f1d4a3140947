"""Timing comparison of the compiled grid kernels against the numpy fallback.

Runs both backends on the two hot paths (hemisphere power quadrature and the
spectrum scan), verifies they agree, and prints per-call timings.

    python3 benchmarks/bench_kernels.py --repeats 20
"""

import argparse
import time

import numpy as np

from arraytrack import ArrayConfig, DirectionAngles, element_positions, steering_weights
from arraytrack._kernels import _numpy_ops

try:
    from arraytrack._kernels import _grid_ops
except ImportError:
    _grid_ops = None


def build_inputs():
    cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=4, num_y=4,
                      spacing_x=0.05, spacing_y=0.05)
    pos = element_positions(cfg)
    px = np.ascontiguousarray(pos[:, 0])
    py = np.ascontiguousarray(pos[:, 1])
    weights = steering_weights(cfg, DirectionAngles(22.0, 11.0))

    # hemisphere quadrature grid at the directivity default of 0.5 degrees
    n = 360
    step = np.pi / n
    quad = -np.pi / 2 + (np.arange(n) + 0.5) * step

    # spectrum scan grid at 1 degree over the full visible rectangle
    scan = np.radians(np.arange(-90.0, 91.0))
    rng = np.random.default_rng(0)
    e = rng.standard_normal((16, 15)) + 1j * rng.standard_normal((16, 15))
    q, _ = np.linalg.qr(e)
    projector = np.ascontiguousarray(q @ q.conj().T)

    k = cfg.wavenumber()
    return {
        "power grid 360x360": lambda ops: ops.response_power_grid(
            px, py, weights, k, quad, quad, 1, 1.0),
        "spectrum scan 181x181": lambda ops: ops.music_inverse_power_grid(
            px, py, projector, k, scan, scan),
    }


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20,
                        help="timing repetitions per case (best-of is reported)")
    args = parser.parse_args()

    cases = build_inputs()
    backends = [("numpy", _numpy_ops)]
    if _grid_ops is not None:
        backends.append(("compiled", _grid_ops))
    else:
        print("compiled extension not available; timing the fallback only")

    for name, make in cases.items():
        results = {label: np.asarray(make(ops)) for label, ops in backends}
        if len(results) == 2:
            np.testing.assert_allclose(results["compiled"], results["numpy"],
                                       rtol=1e-11, atol=1e-13)
        print(name)
        times = {}
        for label, ops in backends:
            times[label] = time_call(lambda: make(ops), args.repeats)
            print(f"  {label:9s} {times[label] * 1e3:8.2f} ms")
        if len(times) == 2:
            print(f"  speedup   {times['numpy'] / times['compiled']:8.2f}x")


if __name__ == "__main__":
    main()
