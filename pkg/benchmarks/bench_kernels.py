"""Compare the compiled integration kernels against the numpy fallback.

Runs the same workload (flagship construction plus a probe sweep) in two
subprocesses, one with SSFLOW_NO_NUMBA=1, and reports wall times.  The
compiled path pays a one-time JIT cost, so the workload is timed after a
warmup pass.
"""

import argparse
import os
import subprocess
import sys

WORKLOAD = r"""
import math, time
from ssflow.builder import (assemble, build_gamma1, build_gamma2,
                            build_separatrices)
from ssflow.params import SimilarityParams
from ssflow.shock import guderley_probe

def run():
    p = SimilarityParams.isentropic(3, 12.0, 0.02)
    g1 = build_gamma1(p)
    sep = build_separatrices(p)
    g2 = build_gamma2(p, s_target=math.inf, sep=sep)
    assemble(p, g1, g2)
    for lam in (0.2, 0.5, 0.8):
        for gamma in (1.4, 3.0, 10.0):
            guderley_probe(3, gamma, lam)

run()  # warmup (JIT compile on the compiled path)
t0 = time.perf_counter()
for _ in range(REPEATS):
    run()
print((time.perf_counter() - t0) / REPEATS)
"""


def timed(no_numba, repeats):
    env = dict(os.environ, SSFLOW_NO_NUMBA="1" if no_numba else "0")
    code = WORKLOAD.replace("REPEATS", str(repeats))
    r = subprocess.run([sys.executable, "-c", code], env=env,
                       capture_output=True, text=True, check=True)
    return float(r.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    t_jit = timed(False, args.repeats)
    t_np = timed(True, args.repeats)
    print(f"compiled kernels : {t_jit:8.3f} s/run")
    print(f"numpy fallback   : {t_np:8.3f} s/run")
    print(f"speedup          : {t_np / t_jit:8.2f}x")


if __name__ == "__main__":
    main()
