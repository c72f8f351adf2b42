"""
Dense word counts and a reproducible batch
==========================================

Two things at once: the dense-words inequality on a single explicit
instance, then a small seeded batch driven the same way the command
line tool drives it.  Running this script twice produces byte
identical report lines.
"""

import json
import tempfile
from pathlib import Path

from fporbits import (
    ExperimentSpec,
    Polynomial,
    PrimeFieldCtx,
    build_graph,
    dense_words_search,
    run_batch,
    verify_lemma_dense,
)

# single instance: f = X + 1 over F_31, orbit of 0 out to depth 12,
# words of length exactly 3 landing in A = all residues
ctx = PrimeFieldCtx(31)
f = Polynomial(ctx, [1, 1])
graph = build_graph([f], ctx)
res = dense_words_search(graph, u=0, A=list(range(31)), N=12, h=3, ell=1)
print(f"L = {res.L} words stay in A, nu = {res.nu}, A_N = {res.A_N}")
print(f"hypothesis met: {res.hypothesis_met}, bound L >= {res.derived_bound}")

# a seeded suite of random instances, counted two independent ways
rep = verify_lemma_dense(ExperimentSpec(kind="dense", trials=25, seed=7))
print(
    f"\nsuite: {rep.stats['trials']} trials, "
    f"{rep.stats['hypothesis_met']} met the hypothesis, "
    f"worst status {rep.worst_status}"
)

# the batch runner streams one canonical JSON report per spec
config = {
    "specs": [
        {"kind": "thm1", "p": 10007, "repetitions": 5, "seed": 42},
        {"kind": "thm2", "p": 10007, "eps": "1/4", "repetitions": 5, "seed": 42},
        {"kind": "dense", "trials": 10, "seed": 3},
    ]
}
out = Path(tempfile.mkdtemp()) / "reports.jsonl"
exit_code = run_batch(config, out=str(out), preflight=False)
print(f"\nbatch exit code {exit_code}")
for line in out.read_text().splitlines():
    obj = json.loads(line)
    print(f"  {obj['kind']}: {len(obj['cases'])} cases, {len(obj['checks'])} checks")
