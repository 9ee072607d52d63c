"""Recover one value of a corrupted Reed-Muller word, showing every step.

    python demos/walkthrough.py
"""

import numpy as np

from codex_lcc.codex import rational_codex
from codex_lcc.decoders import view_decode_batch, view_radius
from codex_lcc.local_decoding import plan_queries_alg1
from codex_lcc.rm import CorruptedWordOracle, rm_random_poly

q, m, d = 31, 3, 2
cdx = rational_codex(q, 1, 2, d, 5, 29)
f = rm_random_poly(q, d, m, seed=7, F=cdx.field)
oracle = CorruptedWordOracle(f, delta=0.15, model="prf", seed=1)

target = np.array([[4, 9, 17]])
plan = plan_queries_alg1(cdx, target, seed=3)
print(f"codex over GF({q}): n={cdx.n}, t={cdx.t}, dim={cdx.dim}")
print("query points (first five):\n", plan.points[:5])

answers = oracle.query(plan.points)
print(f"{oracle.corrupted(plan.points).sum()} of {cdx.n} answers are corrupted")

# the answers form a noisy word of the square code; decode it and read off psi
view = cdx.power(d)
res = view_decode_batch(view, answers[None])
print(f"decoder radius {view_radius(view)}, decoded ok={bool(res.ok[0])}")
print(f"recovered f(target) = {view.psi(res.words[0])[0]}, truth = {f(target)[0]}")
