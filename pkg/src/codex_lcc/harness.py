"""Monte-Carlo runner for the local decoders.

Trial ``i`` of a run with master seed ``S`` draws its targets and coset
randomness from ``numpy.random.default_rng([S, 1, i])``.  The polynomial is
drawn from ``[S, 0xF]`` and the error pattern is keyed by a word derived from
``[S, 0xC]``, so failure counts depend on nothing but the config.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from . import bounds
from .codex import Codex, hermitian_codex, rational_codex
from .config import ConfigError, ExperimentConfig
from .decoders import GMDDecoder, view_radius
from .local_decoding import alg1_batch, alg2_batch, coset_codewords
from .mfp import InterleavedCodex, build_mfp, interleave
from .rm import (CorruptedWordOracle, all_points, load_adversarial_csv, rm_dimension, rm_random_poly,
                 rm_sparse_poly)

BATCH = 2000
DENSE_LIMIT = 20000
CSV_COLUMNS = ("preset", "scheme", "q", "m", "d", "k", "t", "n", "delta", "error_model", "trials", "failures",
               "emp_rate", "wilson_lo", "wilson_hi", "eps_nominal", "eps_effective", "queries_per_trial",
               "seed", "wall_ms")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CODEX_LCC_WORKERS", "1")))
    except ValueError:
        return 1


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = stats.binomtest(failures, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def within_bound(failures: int, trials: int, eps: float, z: float = 3.0) -> bool:
    """One-sided check: the Wilson lower limit at z standard errors does not exceed eps."""
    conf = 1 - 2 * stats.norm.sf(z)
    lo, _ = wilson_interval(failures, trials, conf)
    return lo <= eps


@dataclass
class TrialStats:
    trials: int
    failures: int
    fail_outputs: int
    wrong_outputs: int
    queries_per_trial: int
    wall_ms: float
    eps_nominal: float | None
    eps_effective: float | None
    radius: int
    conditional_violations: int = 0
    config: ExperimentConfig | None = None
    wilson: tuple = field(default=(0.0, 1.0))

    @property
    def emp_rate(self) -> float:
        return self.failures / self.trials

    def row(self) -> dict:
        c = self.config
        return {
            "preset": c.preset or "", "scheme": c.scheme, "q": c.q, "m": c.m, "d": c.d, "k": c.k, "t": c.t,
            "n": c.n, "delta": c.delta, "error_model": c.error_model, "trials": self.trials,
            "failures": self.failures, "emp_rate": self.emp_rate, "wilson_lo": self.wilson[0],
            "wilson_hi": self.wilson[1], "eps_nominal": "" if self.eps_nominal is None else self.eps_nominal,
            "eps_effective": "" if self.eps_effective is None else self.eps_effective,
            "queries_per_trial": self.queries_per_trial, "seed": c.seed, "wall_ms": round(self.wall_ms, 1),
        }


# -- experiment setup -------------------------------------------------------

@dataclass
class Setup:
    cfg: ExperimentConfig
    code: Codex | InterleavedCodex
    oracle: CorruptedWordOracle
    radius: int
    target_q: int
    gmd: GMDDecoder | None = None

    @property
    def cdx(self) -> Codex:
        return self.code.outer if isinstance(self.code, InterleavedCodex) else self.code

    @property
    def queries_expected(self) -> int:
        c = self.cfg
        if c.scheme == "alg2-hermitian":
            return self.code.q * self.code.n
        if c.scheme == "baseline-repetition":
            return c.k * self.cdx.n * c.s
        return self.cdx.n


def oracle_seed(master: int) -> int:
    return int(np.random.SeedSequence([master, 0xC]).generate_state(1, np.uint64)[0] >> np.uint64(1))


def build_code(cfg: ExperimentConfig):
    try:
        if cfg.scheme == "alg1-rational":
            return rational_codex(cfg.q, cfg.k, cfg.t, cfg.d, cfg.r, cfg.n)
        if cfg.scheme == "baseline-repetition":
            return rational_codex(cfg.q, 1, cfg.t, cfg.d, cfg.r, cfg.n)
        if cfg.scheme == "alg1-hermitian":
            return hermitian_codex(math.isqrt(cfg.q), cfg.k, cfg.t, cfg.d, cfg.r, cfg.n)
        outer = hermitian_codex(cfg.q, cfg.k, cfg.t, cfg.d, cfg.r, cfg.n)
        return interleave(outer, build_mfp(cfg.d, cfg.q))
    except ValueError as exc:
        raise ConfigError(f"cannot build codex: {exc}") from None


def build_oracle(cfg: ExperimentConfig, F=None) -> CorruptedWordOracle:
    if cfg.seed is None:
        raise ConfigError("a master seed is required")
    fseed = [cfg.seed, 0xF]
    dense = cfg.poly == "dense" or (cfg.poly == "auto" and rm_dimension(cfg.q, cfg.d, cfg.m) <= DENSE_LIMIT)
    f = rm_random_poly(cfg.q, cfg.d, cfg.m, fseed, F) if dense else rm_sparse_poly(cfg.q, cfg.d, cfg.m, fseed, F=F)
    overrides = None
    if cfg.error_model == "file":
        overrides = load_adversarial_csv(cfg.adversarial_file, cfg.m)
    try:
        return CorruptedWordOracle(f, cfg.delta, cfg.error_model, oracle_seed(cfg.seed), overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _setup_key(cfg: ExperimentConfig) -> tuple:
    d = cfg.to_dict()
    d.pop("trials")
    d.pop("note")
    return tuple(sorted(d.items()))


@lru_cache(maxsize=16)
def _setup_cached(key: tuple) -> Setup:
    cfg = ExperimentConfig(**dict(key))
    code = build_code(cfg)
    if isinstance(code, InterleavedCodex):
        oracle = build_oracle(cfg, code.mfp.sub)
        gmd = GMDDecoder(code)
        return Setup(cfg, code, oracle, gmd.radius, cfg.q, gmd)
    if code.field.q != cfg.q:
        raise ConfigError(f"codex field GF({code.field.q}) differs from the alphabet q={cfg.q}")
    oracle = build_oracle(cfg, code.field)
    return Setup(cfg, code, oracle, view_radius(code.power(cfg.d)), cfg.q)


def setup_for(cfg: ExperimentConfig) -> Setup:
    return _setup_cached(_setup_key(cfg))


# -- bounds attached to a config --------------------------------------------

def nominal_epsilon(cfg: ExperimentConfig) -> float | None:
    if not cfg.theorem:
        return None
    eps = bounds.theorem_presets(cfg.theorem, **cfg.theorem_params()).eps_nominal
    if eps is None:
        return None
    if cfg.scheme == "baseline-repetition":
        return min(1.0, cfg.k * bounds.eps_repetition(eps, cfg.s))
    return eps


REALIZE_LIMIT = 10 ** 6


def realized_delta(oracle: CorruptedWordOracle) -> float:
    """Fraction of corrupted points, enumerated when q^m is small and the nominal rate otherwise."""
    if oracle.model == "none":
        return 0.0
    if oracle.model in ("exact", "file"):
        return oracle.error_size() / oracle.N
    if oracle.delta == 0:
        return 0.0
    if oracle.N <= REALIZE_LIMIT:
        return float(oracle.corrupted(all_points(oracle.field.q, oracle.m)).mean())
    return oracle.delta


def effective_epsilon(cfg: ExperimentConfig, setup: Setup | None = None) -> float | None:
    """Tail bound at the radius the implemented decoder actually guarantees.

    Uses the realized corruption rate where it can be enumerated.  Only the
    keyed-hash model gives the t-wise independent errors the tail bounds
    assume, so other models report no effective bound.
    """
    setup = setup or setup_for(cfg)
    if cfg.error_model == "none" or cfg.delta == 0:
        return 0.0
    if cfg.error_model != "prf":
        return None
    delta = realized_delta(setup.oracle)
    if cfg.scheme == "alg2-hermitian":
        return bounds.eps_alg2(delta, 0.0, 0.0, setup.code.q, setup.code.n, cfg.t, radius_override=setup.radius)
    b = bounds.eps_alg1_effective(delta, setup.cdx.n, cfg.t, setup.radius)
    if cfg.scheme == "baseline-repetition":
        return min(1.0, cfg.k * bounds.eps_repetition(b, cfg.s))
    return b


# -- trial execution --------------------------------------------------------

def _trial_randomness(cfg: ExperimentConfig, setup: Setup, idx: np.ndarray):
    cdx = setup.cdx
    kd = cdx.kernel.shape[0]
    dq = cdx.field.q
    reps = cfg.s if cfg.scheme == "baseline-repetition" else None
    T, D = [], []
    for i in idx:
        rng = np.random.default_rng([cfg.seed, 1, int(i)])
        T.append(rng.integers(0, setup.target_q, size=(cfg.k, cfg.m)))
        shape = (cfg.k, reps, cfg.m, kd) if reps else (cfg.m, kd)
        D.append(rng.integers(0, dq, size=shape))
    return np.stack(T), np.stack(D)


def run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> dict:
    """Trials [start, stop); returns summable counts."""
    setup = setup_for(cfg)
    oracle = setup.oracle
    out = dict(failures=0, fail_outputs=0, wrong_outputs=0, queries=0, violations=0)
    for s0 in range(start, stop, BATCH):
        idx = np.arange(s0, min(stop, s0 + BATCH))
        targets, draws = _trial_randomness(cfg, setup, idx)
        truth = np.asarray(oracle.f(targets))
        before = oracle.queries
        if cfg.scheme == "baseline-repetition":
            B, k, s = len(idx), cfg.k, cfg.s
            t_rep = np.broadcast_to(targets[:, :, None, None, :], (B, k, s, 1, cfg.m)).reshape(-1, 1, cfg.m)
            ok, vals, _ = alg1_batch(setup.cdx, oracle, t_rep, draws.reshape((-1,) + draws.shape[-2:]))
            ok, vals = ok.reshape(B, k, s), vals.reshape(B, k, s)
            good = (ok & (vals == truth[:, :, None])).sum(axis=2)
            fail = np.any(good <= s // 2, axis=1)
            out["fail_outputs"] += int(np.sum(fail & np.any((~ok).sum(axis=2) > s // 2, axis=1)))
        else:
            if cfg.scheme == "alg2-hermitian":
                ok, vals, pts = alg2_batch(setup.code, oracle, targets, draws, setup.gmd)
            else:
                ok, vals, pts = alg1_batch(setup.code, oracle, targets, draws)
                errs = oracle.corrupted(pts).sum(axis=1)
                wrong_or_fail = ~ok | np.any(vals != truth, axis=1)
                out["violations"] += int(np.sum(wrong_or_fail & (errs <= setup.radius)))
            fail = ~ok | np.any(vals != truth, axis=1)
            out["fail_outputs"] += int(np.sum(~ok))
        out["failures"] += int(fail.sum())
        out["queries"] += oracle.queries - before
    out["wrong_outputs"] = out["failures"] - out["fail_outputs"]
    return out


def _chunks(trials: int, workers: int):
    size = max(BATCH, math.ceil(trials / max(workers, 1) / BATCH) * BATCH)
    return [(a, min(trials, a + size)) for a in range(0, trials, size)]


def run_trials(cfg: ExperimentConfig, workers: int | None = None) -> TrialStats:
    """Run ``cfg.trials`` independent recoveries and summarize them."""
    if cfg.seed is None:
        raise ConfigError("a master seed is required")
    cfg.validate()
    workers = workers or default_workers()
    t0 = time.perf_counter()
    setup = setup_for(cfg)
    parts = _chunks(cfg.trials, workers)
    if workers > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_chunk, [cfg] * len(parts), *zip(*parts)))
    else:
        results = [run_chunk(cfg, a, b) for a, b in parts]
    tot = {k: sum(r[k] for r in results) for k in results[0]}
    if tot["queries"] != setup.queries_expected * cfg.trials:
        raise RuntimeError(f"query count {tot['queries']} differs from {setup.queries_expected} per trial")
    st = TrialStats(
        trials=cfg.trials, failures=tot["failures"], fail_outputs=tot["fail_outputs"],
        wrong_outputs=tot["wrong_outputs"], queries_per_trial=setup.queries_expected,
        wall_ms=(time.perf_counter() - t0) * 1000, eps_nominal=nominal_epsilon(cfg),
        eps_effective=effective_epsilon(cfg, setup), radius=setup.radius,
        conditional_violations=tot["violations"], config=cfg,
    )
    st.wilson = wilson_interval(st.failures, st.trials)
    return st


def run_repetition_baseline(cfg: ExperimentConfig, workers: int | None = None) -> TrialStats:
    if cfg.s % 2 == 0:
        raise ConfigError(f"repetition count s={cfg.s} must be odd")
    if cfg.scheme != "baseline-repetition":
        cfg = cfg.replace(scheme="baseline-repetition")
    return run_trials(cfg, workers)


# -- CSV --------------------------------------------------------------------

def stats_csv(rows, include_timing: bool = True) -> str:
    buf = io.StringIO()
    cols = CSV_COLUMNS if include_timing else CSV_COLUMNS[:-1]
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.row() if isinstance(r, TrialStats) else r)
    return buf.getvalue()


def write_csv(path, rows, include_timing: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(stats_csv(rows, include_timing))


# -- independence audit -----------------------------------------------------

EXACT_LIMIT = 10 ** 6


def _audit_columns(code, t: int, rng, max_sets: int):
    """Column index sets of size t; single-column sets for an interleaved codex."""
    if isinstance(code, InterleavedCodex):
        sets = []
        for _ in range(max_sets):
            j = int(rng.integers(code.q))
            rows = np.sort(rng.choice(code.n, t, replace=False))
            sets.append(code.column_positions(j)[rows])
        return sets
    n = code.n
    if math.comb(n, t) <= max_sets:
        return [np.array(c) for c in itertools.combinations(range(n), t)]
    return [np.sort(rng.choice(n, t, replace=False)) for _ in range(max_sets)]


def _plan_words(code, targets, draws):
    """Query coordinates for many plans: (N, m, length) over the query alphabet."""
    if isinstance(code, InterleavedCodex):
        return code.mfp.pi(coset_codewords(code.outer, targets, draws))
    return coset_codewords(code, targets, draws)


def independence_audit(code, t: int | None = None, samples: int = 100_000, seed: int = 0,
                       biased: bool = False, m: int = 2, max_sets: int = 20, exact: bool | None = None) -> dict:
    """Check that any t query points of a plan are independent and uniform.

    Exact mode enumerates every choice of coset randomness for m variables and
    requires identical counts on every t-set of columns.  Otherwise plans are
    sampled and each column set is binned (each symbol reduced modulo the
    largest divisor b of q with b^t <= 4096) for a chi-square test.
    ``biased`` replaces the kernel randomness by zeros as a negative control.
    """
    cdx = code.outer if isinstance(code, InterleavedCodex) else code
    qa = code.q if isinstance(code, InterleavedCodex) else cdx.field.q  # query alphabet
    t = t or cdx.t
    kd = cdx.kernel.shape[0]
    rng = np.random.default_rng([seed, 0xA])
    target = rng.integers(0, qa, size=(cdx.k, m))
    n_plans = cdx.field.q ** (kd * m)
    if exact is None:
        exact = n_plans <= EXACT_LIMIT and not isinstance(code, InterleavedCodex)
    sets = _audit_columns(code, t, rng, max_sets)
    if exact:
        digits = np.array(list(itertools.product(range(cdx.field.q), repeat=kd * m)), dtype=np.int64)
        draws = digits.reshape(-1, m, kd)
        if biased:
            draws = np.zeros_like(draws)
        W = _plan_words(code, np.broadcast_to(target, (len(draws),) + target.shape), draws)
        cells = qa ** (m * t)
        uniform = True
        worst = 0
        for J in sets:
            sym = W[:, :, J].reshape(len(W), -1)
            idx = sym @ (qa ** np.arange(sym.shape[1], dtype=np.int64))
            cnt = np.bincount(idx, minlength=cells)
            uniform &= bool(cnt.min() == cnt.max())
            worst = max(worst, int(cnt.max() - cnt.min()))
        return {"mode": "exact", "t": t, "plans": len(draws), "column_sets": len(sets), "cells": cells,
                "max_count_spread": worst, "passed": uniform}
    # sampled: one variable suffices since the m codewords are drawn independently
    draws = rng.integers(0, cdx.field.q, size=(samples, 1, kd))
    if biased:
        draws = np.zeros_like(draws)
    W = _plan_words(code, np.broadcast_to(target[:, :1], (samples, cdx.k, 1)), draws)[:, 0, :]
    b = max(x for x in range(1, qa + 1) if qa % x == 0 and x ** t <= 4096)
    cells = b ** t
    pvals = []
    for J in sets:
        sym = W[:, J] % b
        idx = sym @ (b ** np.arange(t, dtype=np.int64))
        cnt = np.bincount(idx, minlength=cells)
        pvals.append(float(stats.chisquare(cnt).pvalue))
    pmin = min(pvals)
    return {"mode": "chi2", "t": t, "plans": samples, "column_sets": len(sets), "cells": cells,
            "min_p": pmin, "threshold": 1e-3, "passed": bool(pmin > 1e-3)}


# -- matched-epsilon comparison ---------------------------------------------

def comparison_table(delta: float = 0.05) -> list[dict]:
    """Query counts of the local decoder against s-fold repetition of a single-point decoder.

    The first row is the many-point tower shape (bound-only).  The second
    row is the executable Reed-Solomon multi-point preset, matched against
    repeating the degree-2 curve decoder at its effective epsilon.
    """
    rows = [bounds.thm2_comparison(delta=delta)]
    from .config import preset_config
    multi = preset_config("thm4.5ii").replace(delta=delta, seed=0)
    single = preset_config("ex4.1ii").replace(delta=delta, seed=0)
    n_single = single.n
    tau_multi = rational_codex(multi.q, multi.k, multi.t, multi.d, multi.r, multi.n).power(multi.d)
    tau_single = rational_codex(single.q, 1, single.t, single.d, single.r, single.n).power(single.d)
    eps_multi = bounds.eps_alg1_effective(delta, multi.n, multi.t, view_radius(tau_multi))
    b = bounds.eps_alg1_effective(delta, n_single, single.t, view_radius(tau_single))
    row = bounds.repetition_comparison(multi.q, multi.n, multi.k, b, math.log(eps_multi),
                                       queries_alg=multi.n, label="thm4.5ii")
    row["t"] = multi.t
    if row["s"]:
        row["queries_repetition_actual"] = multi.k * n_single * row["s"]
    rows.append(row)
    return rows
