"""Compare the compiled and pure-Python kernels.

Times the cyclic Jacobi eigensolver, sector-block assembly and operator
application on cloning matrices of increasing size, and checks that both
backends give the same numbers.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from asymclone import kernels
from asymclone.localops import LocalOperatorSum
from asymclone.spinsym import sector_partition
from asymclone.tasks import CloningTask, local_R


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_jacobi(impl, n, repeat, complex_=False):
    rng = np.random.default_rng(n)
    a = rng.standard_normal((n, n))
    if complex_:
        a = a + 1j * rng.standard_normal((n, n))
    a = a + a.conj().T

    def run():
        m = np.array(a, order="C")
        v = np.eye(n, dtype=m.dtype)
        impl.jacobi_sweeps(m, v, 1e-13 * np.linalg.norm(m), 60)
        return np.sort(np.diagonal(m).real)

    t, w = best_of(run, repeat)
    err = float(np.max(np.abs(w - np.linalg.eigvalsh(a))))
    return t, err


def _with_backend(op, impl):
    """Run ``op`` with the kernel module temporarily swapped."""
    saved = (kernels.scatter_block, kernels.scatter_apply)
    kernels.scatter_block, kernels.scatter_apply = impl.scatter_block, impl.scatter_apply
    try:
        return op()
    finally:
        kernels.scatter_block, kernels.scatter_apply = saved


def bench_block(impl, n, repeat):
    task = CloningTask.universal(2, n)
    op = local_R(task)
    idx = sector_partition(task.dims, flipped=True).group_of(1)
    return best_of(lambda: _with_backend(lambda: op.block(idx), impl), repeat)


def bench_apply(impl, n, repeat):
    task = CloningTask.universal(2, n)
    op = local_R(task)
    x = np.random.default_rng(0).standard_normal(op.size)
    return best_of(lambda: _with_backend(lambda: op.apply(x), impl), repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    py = kernels.implementation("python")
    try:
        cy = kernels.implementation("compiled")
    except ImportError:
        cy = None
        print("compiled extension not built; timing the Python fallback only")
    impls = [("python", py)] + ([("compiled", cy)] if cy is not None else [])

    print(f"{'kernel':<28}{'size':>8}" + "".join(f"{name:>12}" for name, _ in impls)
          + f"{'speedup':>10}")
    for n in (32, 64, 128):
        for cplx in (False, True):
            label = "jacobi " + ("complex" if cplx else "real")
            times = []
            for _, impl in impls:
                t, err = bench_jacobi(impl, n, args.repeat, cplx)
                assert err < 1e-10, err
                times.append(t)
            _row(label, n, times)
    for n in (8, 10, 12):
        times, blocks = [], []
        for _, impl in impls:
            t, b = bench_block(impl, n, args.repeat)
            times.append(t)
            blocks.append(b)
        assert all(np.array_equal(blocks[0], b) for b in blocks)
        _row("sector block (universal)", blocks[0].shape[0], times)
    for n in (10, 14, 16):
        times, ys = [], []
        for _, impl in impls:
            t, y = bench_apply(impl, n, args.repeat)
            times.append(t)
            ys.append(y)
        assert all(np.allclose(ys[0], y, atol=1e-12) for y in ys)
        _row("apply R (universal)", 2 ** (n + 1), times)


def _row(label, size, times):
    speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
    print(f"{label:<28}{size:>8}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
