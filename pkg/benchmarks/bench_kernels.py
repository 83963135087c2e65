"""Compare the numba and pure-numpy kernels.

    python benchmarks/bench_kernels.py [--dim 512] [--tokens 20000] [--repeat 5]

Part one times each kernel in-process through its ``*_numba`` / ``*_numpy``
name. Part two runs a sentence-pair scoring loop in two subprocesses, one with
HTP_DISABLE_NUMBA=1, so the end-to-end path uses whichever backend the env
flag selects.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from htp import kernels
from htp.codec import CodecConfig, token_digits

WORDS = ("man woman dog cat guitar piano plays runs eats rides the a is of on with "
         "tomato onion slicing football stadium airplane yesterday").split()

E2E_SNIPPET = r"""
import json, sys, time, numpy as np
import htp
from htp.codec import CodecConfig
from htp.evaluation import StsRecord, run_eval
from htp.lexicon import WeightingScheme, build_frequency_table
words = sys.argv[2].split()
rng = np.random.default_rng(0)
recs = [StsRecord(" ".join(rng.choice(words, 10)), " ".join(rng.choice(words, 10)), float(rng.uniform(0, 5)))
        for _ in range(1379)]
codec = CodecConfig.for_dim(int(sys.argv[1]))
scheme = WeightingScheme("tfidf", build_frequency_table([]))
run_eval(recs[:20], scheme, codec)
best = min(run_eval(recs, scheme, codec).mean_latency_ms_per_pair for _ in range(3))
print(json.dumps({"backend": htp.BACKEND, "ms_per_pair": best}))
"""


def best_of(fn, repeat):
    fn()  # warm-up / JIT
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_table(dim, n_tokens, repeat):
    rng = np.random.default_rng(0)
    cfg = CodecConfig.for_dim(dim)
    tokens = ["".join(rng.choice(list("abcdefghijklmnopqrstuvwxyz"), rng.integers(2, 12)))
              for _ in range(n_tokens)]
    digits, lengths = token_digits(tokens, cfg)
    m = cfg.basis.moduli_array
    res = kernels.token_residues_numpy(digits, lengths, m, 65536)
    emb = kernels.harmonic_project_numpy(res, m)
    w = rng.uniform(0, 2, n_tokens)

    cases = {
        "token_residues": (lambda f: f(digits, lengths, m, 65536), kernels.token_residues_numba, kernels.token_residues_numpy),
        "harmonic_project": (lambda f: f(res, m), kernels.harmonic_project_numba, kernels.harmonic_project_numpy),
        "recover_residues": (lambda f: f(emb, m), kernels.recover_residues_numba, kernels.recover_residues_numpy),
        "weighted_sum": (lambda f: f(emb, w), kernels.weighted_sum_numba, kernels.weighted_sum_numpy),
    }
    print(f"kernels, D={dim}, {n_tokens} tokens, best of {repeat}")
    print(f"{'kernel':<18} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, (call, fast, slow) in cases.items():
        tn = best_of(lambda: call(fast), repeat)
        tp = best_of(lambda: call(slow), repeat)
        print(f"{name:<18} {1e3 * tn:>10.2f} {1e3 * tp:>10.2f} {tp / tn:>7.1f}x")


def end_to_end(dim):
    print(f"\nend to end run_eval, D={dim}, 1379 pairs of 10 tokens, 1 thread")
    for flag in ("0", "1"):
        env = dict(os.environ, HTP_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E_SNIPPET, str(dim), " ".join(WORDS)],
                             env=env, capture_output=True, text=True, check=True)
        data = json.loads(out.stdout)
        print(f"  HTP_DISABLE_NUMBA={flag}: backend={data['backend']:<6} {data['ms_per_pair']:.3f} ms/pair")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dim", type=int, default=512)
    ap.add_argument("--tokens", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    kernel_table(args.dim, args.tokens, args.repeat)
    end_to_end(args.dim)


if __name__ == "__main__":
    main()
