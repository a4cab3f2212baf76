#!/usr/bin/env python3
"""Benchmark the compiled polynomial kernel against the pure-Python one.

Runs a set of representative workloads twice, in subprocesses (so the
kernel selection is a clean import-time decision), and prints a table.

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "exchange_suite_n3": (
        "from hdeform import rmatrix\n"
        "assert rmatrix.run_suite(3, 'all') == []\n"),
    "dybe_n4": (
        "from hdeform import rmatrix\n"
        "assert rmatrix.check_dybe(4) == []\n"),
    "reflection_weyl_2_2": (
        "from hdeform import weyl\n"
        "assert weyl.verify_reflection(2, 2) == []\n"),
    "reflection_weyl_3_1": (
        "from hdeform import weyl\n"
        "assert weyl.verify_reflection(3, 1) == []\n"),
    "confluence_3_1": (
        "from hdeform import weyl\n"
        "assert weyl.check_confluence(3, 1) == []\n"),
    "central_n2_N3": (
        "from hdeform import dra\n"
        "assert dra.check_central(2, 3) == []\n"),
    "rule_extraction_n3": (
        "from hdeform import dra\n"
        "assert len(dra.extract_rewrite_rules(3)) == 36\n"),
}

DRIVER = """
import json, time
import hdeform
times = {{}}
for name, src in {workloads!r}.items():
    t0 = time.perf_counter()
    exec(src, {{}})
    times[name] = time.perf_counter() - t0
print(json.dumps({{"backend": hdeform.KERNEL_BACKEND, "times": times}}))
"""


def run_backend(pure, repeat):
    env = dict(os.environ)
    if pure:
        env["HDEFORM_PURE"] = "1"
    else:
        env.pop("HDEFORM_PURE", None)
    best = {}
    backend = None
    for _ in range(repeat):
        out = subprocess.run(
            [sys.executable, "-c", DRIVER.format(workloads=WORKLOADS)],
            capture_output=True, text=True, env=env, check=True)
        payload = json.loads(out.stdout)
        backend = payload["backend"]
        for name, t in payload["times"].items():
            best[name] = min(best.get(name, t), t)
    return backend, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=1,
                    help="repetitions per backend (best-of)")
    args = ap.parse_args()
    fast_backend, fast = run_backend(False, args.repeat)
    pure_backend, pure = run_backend(True, args.repeat)
    print(f"{'workload':28} {pure_backend:>10} {fast_backend:>10}  speedup")
    print("-" * 62)
    for name in WORKLOADS:
        ratio = pure[name] / fast[name] if fast[name] else float("inf")
        print(f"{name:28} {pure[name]:9.3f}s {fast[name]:9.3f}s  {ratio:6.2f}x")
    total_p = sum(pure.values())
    total_f = sum(fast.values())
    print("-" * 62)
    print(f"{'total':28} {total_p:9.3f}s {total_f:9.3f}s  "
          f"{total_p / total_f:6.2f}x")
    if fast_backend == pure_backend:
        print("note: compiled kernel unavailable; both runs used the "
              "pure-Python fallback")


if __name__ == "__main__":
    main()
