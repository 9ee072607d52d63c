"""Closed-form failure-probability bounds and the parameter sets they belong to.

Every function returns a probability clamped to [0, 1] and raises
:class:`BoundError` when its inputs are outside the regime where the formula
was derived.  ``*_effective`` variants recompute a tail bound at the radius an
implemented decoder actually reaches instead of the nominal half distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp


class BoundError(ValueError):
    pass


def _clamp(x: float) -> float:
    return float(min(1.0, max(0.0, x)))


def _rate(name: str, v: float, lo_open=False):
    if not (0 <= v < 1) or (lo_open and v == 0):
        raise BoundError(f"{name}={v} must lie in [0, 1)")


# -- tail inequalities ------------------------------------------------------

def chebyshev_tail(delta: float, n: float, A: float) -> float:
    """Pr[|X - delta n| >= A] <= (delta - delta^2) n / A^2 for pairwise independent X_j."""
    if A <= 0:
        raise BoundError("A must be positive")
    return _clamp((delta - delta * delta) * n / (A * A))


def twise_tail(t: int, mu: float, A: float) -> float:
    """Pr[|X - mu| >= A] <= 8 ((t mu + t^2) / A^2)^(t/2) for t-wise independent X_j, t even >= 4."""
    if t < 4 or t % 2:
        raise BoundError(f"t={t} must be an even integer >= 4")
    if A <= 0:
        raise BoundError("A must be positive")
    return _clamp(8.0 * ((t * mu + t * t) / (A * A)) ** (t / 2))


def markov_tail(delta: float, n: float, threshold: float) -> float:
    if threshold <= 0:
        raise BoundError("threshold must be positive")
    return _clamp(delta * n / threshold)


# -- single-point decodings on lines and curves -----------------------------

def eps_line(delta: float, sigma: float) -> float:
    """2 delta / (1 - sigma), valid for delta < (1 - sigma) / 2."""
    _rate("sigma", sigma)
    if not 0 <= delta < (1 - sigma) / 2:
        raise BoundError(f"delta < (1-sigma)/2 violated (delta={delta}, sigma={sigma})")
    return _clamp(2 * delta / (1 - sigma))


def eps_curve(delta: float, sigma: float, q: int) -> float:
    """4 (delta - delta^2) / (1 - 2 sigma - 2 delta)^2 / (q - 1), for delta < (1 - 2 sigma) / 2."""
    _rate("sigma", sigma)
    if not 0 <= delta < (1 - 2 * sigma) / 2:
        raise BoundError(f"delta < (1-2sigma)/2 violated (delta={delta}, sigma={sigma})")
    return _clamp(4 * (delta - delta * delta) / (1 - 2 * sigma - 2 * delta) ** 2 / (q - 1))


def eps_tcurve(delta: float, sigma: float, q: int, t: int) -> float:
    """8 ((4 t delta (q-1) + 4 t^2) / ((1 - sigma - 2 delta)^2 (q-1)^2))^(t/2)."""
    if t < 4 or t % 2:
        raise BoundError(f"t={t} must be an even integer >= 4")
    _rate("sigma", sigma)
    if not 0 <= delta < (1 - sigma) / 2:
        raise BoundError(f"delta < (1-sigma)/2 violated (delta={delta}, sigma={sigma})")
    Q = q - 1
    return _clamp(8.0 * ((4 * t * delta * Q + 4 * t * t) / ((1 - sigma - 2 * delta) ** 2 * Q * Q)) ** (t / 2))


def tcurve_cap(delta: float, sigma: float, q: int, t: int) -> float:
    """The simplified form 8 (lambda t / sqrt(q))^t with lambda = sqrt(8) / (1 - sigma - 2 delta)."""
    if not 0 <= delta < (1 - sigma) / 2:
        raise BoundError(f"delta < (1-sigma)/2 violated (delta={delta}, sigma={sigma})")
    lam = math.sqrt(8) / (1 - sigma - 2 * delta)
    return _clamp(8.0 * (lam * t / math.sqrt(q)) ** t)


# -- interleaved codex ------------------------------------------------------

def eps_alg2(delta: float, sigma: float, rho: float, q: int, n: int, t: int,
             radius_override: int | None = None) -> float:
    """Union over q columns of the t-wise tail at A = (1 - sigma - rho) n / 2 - delta n.

    With ``radius_override`` (a concatenated decoding radius in GF(q)
    symbols) the per-column threshold becomes radius/q and the sigma/rho
    regime no longer enters.
    """
    if t < 4 or t % 2:
        raise BoundError(f"t={t} must be an even integer >= 4")
    if radius_override is not None:
        A = radius_override / q - delta * n
        if A <= 0:
            return 1.0
        return _clamp(8.0 * q * ((t * delta * n + t * t) / (A * A)) ** (t / 2))
    if not 0 <= delta < (1 - sigma - rho) / 2:
        raise BoundError(f"delta < (1-sigma-rho)/2 violated (delta={delta}, sigma={sigma}, rho={rho})")
    return _clamp(8.0 * q * ((4 * t * delta * n + 4 * t * t) / ((1 - sigma - rho - 2 * delta) ** 2 * n * n)) ** (t / 2))


# -- effective bounds at an implemented radius ------------------------------

def eps_alg1_effective(delta: float, n: int, t: int, radius: int) -> float:
    """Tail bound for Pr[X > radius], X a sum of n t-wise independent Bernoulli(delta).

    Markov for t = 1, Chebyshev for t = 2, 3, the t-wise inequality (largest
    even order <= t) for t >= 4.
    """
    thr = radius + 1
    if t == 1:
        return markov_tail(delta, n, thr)
    A = thr - delta * n
    if A <= 0:
        return 1.0
    if t < 4:
        return chebyshev_tail(delta, n, A)
    return twise_tail(t - t % 2, delta * n, A)


# -- repetition baseline ----------------------------------------------------

def eps_repetition(b: float, s: int) -> float:
    """Pr[at least s/2 of s independent rounds fail], each failing w.p. b."""
    if not 0 <= b <= 1:
        raise BoundError("b must be a probability")
    if s < 1:
        raise BoundError("s must be positive")
    lo = math.ceil(s / 2)
    return _clamp(math.fsum(math.comb(s, i) * b ** i * (1 - b) ** (s - i) for i in range(lo, s + 1)))


def log_eps_repetition(b: float, s: int) -> float:
    """Natural log of :func:`eps_repetition`, stable for large s."""
    if not 0 < b < 1:
        return 0.0 if b >= 1 else -math.inf
    i = np.arange(math.ceil(s / 2), s + 1)
    terms = gammaln(s + 1) - gammaln(i + 1) - gammaln(s - i + 1) + i * math.log(b) + (s - i) * math.log1p(-b)
    return float(min(0.0, logsumexp(terms)))


def queries_repetition(q: int, k: int, s: int) -> int:
    return k * q * s


def minimal_odd_s(b: float, log_target: float, k: int = 1, s_max: int = 10 ** 6) -> int | None:
    """Least odd s with k * eps_repetition(b, s) <= exp(log_target)."""
    lk = math.log(k)
    # eps_repetition is non-increasing along odd s for b < 1/2; bisect on odd indices
    if b >= 0.5:
        return None
    ok = lambda s: lk + log_eps_repetition(b, s) <= log_target
    hi = 1
    while not ok(hi):
        hi = 2 * hi + 1
        if hi > s_max:
            return None
    lo = -1  # odd indices (lo, hi]; lo fails or is a sentinel
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mid += 1 - mid % 2
        if mid >= hi:
            break
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# -- named theorem shapes ---------------------------------------------------

@dataclass
class TheoremPreset:
    name: str
    title: str
    params: dict
    constraints: list  # (text, holds)
    formula: str
    eps_nominal: float | None
    queries: int | None
    executable: bool = True
    bound_only: bool = False
    notes: list = field(default_factory=list)

    @property
    def violated(self) -> list:
        return [c for c, ok in self.constraints if not ok]

    def to_dict(self) -> dict:
        return {
            "name": self.name, "title": self.title, "params": self.params,
            "constraints": [{"inequality": c, "holds": bool(ok)} for c, ok in self.constraints],
            "formula": self.formula, "eps_nominal": self.eps_nominal, "queries": self.queries,
            "executable": self.executable, "bound_only": self.bound_only, "notes": self.notes,
        }


def _safe(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except BoundError:
        return None


def _t45_common(p):
    return 8.0 * ((4 * p["t"] * p["delta"] * p["n"] + 4 * p["t"] ** 2) / p["_den"] ** 2) ** (p["t"] / 2) * (1 / p["n"]) ** p["t"]


_DEFAULTS = {
    "prop1.2i": dict(q=256, d=126, m=4, delta=0.05, sigma=0.5),
    "prop1.2ii": dict(q=256, d=50, m=8, delta=0.05, sigma=0.2),
    "ex4.1i": dict(q=256, d=126, m=4, delta=0.05, sigma=0.5),
    "ex4.1ii": dict(q=256, d=50, m=8, delta=0.05, sigma=0.2),
    "ex4.1iii": dict(q=256, d=12, m=8, t=4, delta=0.05, sigma=0.2),
    "thm4.3": dict(q=4, d=2, m=4, t=4, delta=0.05, sigma=0.5),
    "thm4.4": dict(q=64, e=2, d=2, t=4, delta=0.05, sigma=0.05),
    "cor4.4": dict(q=64, e=2, d=2, delta=0.05, sigma=0.05),
    "thm4.5i": dict(q=256, k=8, n=200, t=1, d=12, delta=0.05, sigma=0.5),
    "thm4.5ii": dict(q=256, k=8, n=200, t=2, d=3, delta=0.05, sigma=0.16),
    "thm4.5iii": dict(q=256, k=8, n=200, t=4, d=8, delta=0.05, sigma=0.5),
    "thm4.5iv": dict(q=4, k=4, n=60, t=4, d=2, delta=0.05, sigma=0.6),
    "thm4.5v": dict(q=64, e=2, d=2, delta=0.05, sigma=0.05, k=None, t=None, n=None),
    "thm2": dict(q=64, e=2, d=2, delta=0.05, sigma=0.05),
}


def preset_names() -> list[str]:
    return list(_DEFAULTS)


def normalize_name(name: str) -> str:
    return name.lower().replace("(", "").replace(")", "").replace(" ", "")


def theorem_presets(name: str, **overrides) -> TheoremPreset:
    """Constraints, explicit epsilon and query count of a named result."""
    key = normalize_name(name)
    if key not in _DEFAULTS:
        raise BoundError(f"unknown theorem preset {name!r}; known: {', '.join(_DEFAULTS)}")
    p = {**_DEFAULTS[key], **{k: v for k, v in overrides.items() if v is not None}}
    q, d, delta, sigma = p["q"], p["d"], p["delta"], p["sigma"]
    C = []

    if key in ("prop1.2i", "ex4.1i"):
        C += [("d <= sigma(q-1) - 1", d <= sigma * (q - 1) - 1),
              ("delta < (1-sigma)/2", delta < (1 - sigma) / 2)]
        return TheoremPreset(key, "line decoding, t = 1", p, C, "2 delta / (1 - sigma)",
                             _safe(eps_line, delta, sigma), q - 1,
                             notes=["example form allows d <= sigma(q-1) + 1; the stricter -1 is enforced"])
    if key in ("prop1.2ii", "ex4.1ii"):
        C += [("d <= sigma(q-1) - 1", d <= sigma * (q - 1) - 1),
              ("delta < (1-2sigma)/2", delta < (1 - 2 * sigma) / 2)]
        gamma = (delta - delta ** 2) / (1 - 2 * sigma - 2 * delta) if delta < (1 - 2 * sigma) / 2 else None
        pr = TheoremPreset(key, "curve decoding, t = 2", p, C,
                           "4 (delta - delta^2) / (1 - 2 sigma - 2 delta)^2 / (q - 1)",
                           _safe(eps_curve, delta, sigma, q), q - 1)
        if gamma is not None:
            pr.notes.append(f"gamma = {gamma!r}; O-form gamma/sqrt(q) = {gamma / math.sqrt(q)!r}")
        return pr
    if key == "ex4.1iii":
        t = p["t"]
        C += [("t even, t >= 4", t >= 4 and t % 2 == 0),
              ("1 < d <= sigma(q-1)/t - 1/t", 1 < d <= sigma * (q - 1) / t - 1 / t),
              ("delta < (1-sigma)/2", delta < (1 - sigma) / 2)]
        pr = TheoremPreset(key, "degree-t curve decoding", p, C,
                           "8 ((4 t delta (q-1) + 4 t^2) / ((1 - sigma - 2 delta)^2 (q-1)^2))^(t/2)",
                           _safe(eps_tcurve, delta, sigma, q, t), q - 1)
        cap = _safe(tcurve_cap, delta, sigma, q, t)
        pr.notes.append(f"cap 8 (lambda t / sqrt q)^t = {cap!r}")
        return pr
    if key == "thm4.3":
        t = p["t"]
        n = q ** 3 - 1
        C += [("4 <= t <= q", 4 <= t <= q), ("d > 1", d > 1),
              ("sigma < (1 - 2 delta)/2", sigma < (1 - 2 * delta) / 2), ("d <= sigma q", d <= sigma * q)]
        den = 1 - 2 * sigma - 2 * delta
        eps = _clamp(8 * q * ((4 * t * delta * n + 4 * t * t) / (den ** 2 * n * n)) ** (t / 2)) if den > 0 else None
        pr = TheoremPreset(key, "Hermitian interleaved codex, single point", {**p, "n": n}, C,
                           "8 q ((4 t delta n + 4 t^2) / ((1 - 2 sigma - 2 delta)^2 n^2))^(t/2), n = q^3 - 1",
                           eps if not [c for c, ok in C if not ok] else None, q * n)
        if den > 0:
            nu = math.sqrt(8) / den
            pr.notes.append(f"cap 8 q (nu t / sqrt(q^3-1))^t = {_clamp(8 * q * (nu * t / math.sqrt(n)) ** t)!r}")
        return pr
    if key == "thm4.4":
        e, t = p["e"], p["t"]
        n = q ** e * (q - 1) - 1
        C += [("q a square", int(math.isqrt(q)) ** 2 == q), ("e >= 2", e >= 2), ("4 <= t <= q^e", 4 <= t <= q ** e),
              ("sigma < (1 - 2 delta)/4", sigma < (1 - 2 * delta) / 4), ("d <= sigma q", d <= sigma * q)]
        den = 1 - 4 * sigma - 2 * delta
        eps = _clamp(8 * q * ((4 * t * delta * n + 4 * t * t) / (den ** 2 * n * n)) ** (t / 2)) if den > 0 else None
        return TheoremPreset(key, "tower interleaved codex, single point", {**p, "n": n}, C,
                             "8 q ((4 t delta n + 4 t^2) / ((1 - 4 sigma - 2 delta)^2 n^2))^(t/2), n = q^e (q-1) - 1",
                             eps, q * n, executable=False, bound_only=True,
                             notes=["bound-only: no executable codex for the recursive tower"])
    if key == "cor4.4":
        e = p["e"]
        n = q ** e * (q - 1) - 1
        t = p.get("t") or n // q
        den = 1 - 4 * sigma - 2 * delta
        mu = math.sqrt(8) / den if den > 0 else None
        C += [("delta < (1 - 4 sigma)/2", delta < (1 - 4 * sigma) / 2),
              ("reading A: d <= sigma q", d <= sigma * q),
              ("reading B: d <= sigma sqrt(q)", d <= sigma * math.sqrt(q))]
        log_eps = t * math.log(mu / math.sqrt(q)) if mu else None
        return TheoremPreset(key, "tower, single point with t = n/q", {**p, "n": n, "t": t}, C,
                             "(mu / sqrt q)^t, mu = sqrt(8) / (1 - 4 sigma - 2 delta) (constant of the O-form taken as 1)",
                             _clamp(math.exp(log_eps)) if log_eps is not None else None, q * q * t,
                             executable=False, bound_only=True,
                             notes=["bound-only: no executable codex for the recursive tower",
                                    "two readings of the degree constraint are recorded; neither is chosen",
                                    f"log eps = {log_eps!r}"])
    if key.startswith("thm4.5"):
        part = key[len("thm4.5"):]
        k, t = p["k"], p["t"]
        if part in ("i", "ii", "iii"):
            n = p["n"]
            div = {"i": k, "ii": k + 2, "iii": k + t}[part]
            C += [("k + n <= q", k + n <= q), ("d > 1", d > 1),
                  (f"d < sigma n/({'k' if part == 'i' else 'k+2' if part == 'ii' else 'k+t'})", d < sigma * n / div),
                  ("delta < (1-sigma)/2", delta < (1 - sigma) / 2)]
            if part == "i":
                C.append(("t = 1", t == 1))
                eps, formula = _safe(eps_line, delta, sigma), "2 delta / (1 - sigma)"
            elif part == "ii":
                C.append(("t = 2", t == 2))
                den = 1 - sigma - 2 * delta
                eps = _clamp((delta - delta ** 2) / (den ** 2 * n)) if den > 0 else None
                formula = "(delta - delta^2) / ((1 - sigma - 2 delta)^2 n)"
            else:
                C.append(("t even, t >= 4", t >= 4 and t % 2 == 0))
                den = 1 - sigma - 2 * delta
                eps = _clamp(_t45_common({**p, "_den": den})) if den > 0 else None
                formula = "8 ((4 t delta n + 4 t^2) / (1 - sigma - 2 delta)^2)^(t/2) (1/n)^t"
            return TheoremPreset(key, f"Reed-Solomon codex, t = {t}", p, C, formula, eps, n)
        if part == "iv":
            n = p["n"]
            rho = (k + t + q * q - q) / q ** 2
            den = 1 - sigma - rho - 2 * delta
            C += [("k + n <= q^3", k + n <= q ** 3), ("d > 1", d > 1), ("d < sigma q", d < sigma * q),
                  ("t >= 4", t >= 4), ("delta < (1-sigma)/2", delta < (1 - sigma) / 2),
                  ("1 - sigma - rho - 2 delta > 0", den > 0)]
            eps = _clamp(_t45_common({**p, "_den": den})) if den > 0 else None
            return TheoremPreset(key, "Hermitian interleaved codex, t >= 4", {**p, "rho": rho}, C,
                                 "8 ((4 t delta n + 4 t^2) / (1 - sigma - rho - 2 delta)^2)^(t/2) (1/n)^t, "
                                 "rho = (k + t + q^2 - q) / q^2", eps, q * n,
                                 notes=[f"rho = {rho!r}"])
        if part == "v":
            e = p["e"]
            n = p.get("n") or (q ** e * (q - 1)) // 2
            k = p.get("k") or max(1, n // (2 * q))
            t = p.get("t") or k
            rho = (2 * q ** (e + 1) + q * k + q * t) / n
            den = 1 - sigma - rho - 2 * delta
            C += [("e >= 2", e >= 2), ("t <= n", t <= n), ("k <= n", k <= n),
                  ("k + n <= q^e (q-1)", k + n <= q ** e * (q - 1)), ("d < sigma n", d < sigma * n),
                  ("1 - sigma - rho - 2 delta > 0", den > 0)]
            eps = (_clamp(8 * q * ((4 * t * delta + 4 * t * t) / den ** 2) ** (t / 2) * (1 / n) ** t)
                   if den > 0 else None)
            return TheoremPreset(key, "tower interleaved codex, t >= 4", {**p, "n": n, "k": k, "t": t, "rho": rho}, C,
                                 "8 q ((4 t delta + 4 t^2) / (1 - sigma - rho - 2 delta)^2)^(t/2) (1/n)^t, "
                                 "rho = (2 q^(e+1) + q k + q t) / n", eps, q * n,
                                 executable=False, bound_only=True,
                                 notes=["bound-only: no executable codex for the recursive tower", f"rho = {rho!r}"])
    # thm2: many-point decoding from the tower
    e = p["e"]
    n = math.floor(2 * q / (2 * q + 1) * q ** e * (q - 1))
    k = t = n // (2 * q)
    den = 1 - 4 * sigma - 2 * delta
    C += [("d > 1", d > 1), ("delta < (1 - 4 sigma)/2", delta < (1 - 4 * sigma) / 2), ("d < sigma q", d < sigma * q)]
    mu = math.sqrt(8) / den if den > 0 else None
    log_eps = k * math.log(mu / math.sqrt(q)) if mu else None
    return TheoremPreset("thm2", "many-point decoding, k = t = floor(n / 2q)", {**p, "n": n, "k": k, "t": t}, C,
                         "(mu / sqrt q)^k, mu = sqrt(8) / (1 - 4 sigma - 2 delta) (constant of the O-form taken as 1)",
                         math.exp(log_eps) if log_eps is not None else None, q * n,
                         executable=False, bound_only=True,
                         notes=["bound-only: no executable codex for the recursive tower",
                                f"log eps = {log_eps!r}", f"query scale q^2 k = {q * q * k}"])


def log_eps_nominal(pr: TheoremPreset) -> float | None:
    """Natural log of the nominal epsilon, computed without underflow where it matters."""
    for note in pr.notes:
        if note.startswith("log eps = "):
            v = note[len("log eps = "):]
            return None if v == "None" else float(v)
    return None if not pr.eps_nominal else math.log(pr.eps_nominal)


def repetition_comparison(q: int, n: int, k: int, b: float, log_target: float,
                          queries_alg: int | None = None, label: str = "") -> dict:
    """Matched-epsilon repetition count s and the query ratio alg / repetition."""
    s = minimal_odd_s(b, log_target, k)
    qa = q * n if queries_alg is None else queries_alg
    qr = queries_repetition(q, k, s) if s else None
    return {
        "preset": label, "q": q, "n": n, "k": k, "b": b, "log_eps_target": log_target,
        "s": s, "queries_alg": qa, "queries_repetition": qr,
        "ratio": (qa / qr) if qr else None,
    }


def thm2_comparison(q: int = 64, e: int = 2, d: int = 2, sigma: float = 0.05, delta: float = 0.05) -> dict:
    pr = theorem_presets("thm2", q=q, e=e, d=d, sigma=sigma, delta=delta)
    b = eps_curve(delta, sigma, q)
    row = repetition_comparison(q, pr.params["n"], pr.params["k"], b, log_eps_nominal(pr), label="thm2")
    row["t"] = pr.params["t"]
    return row
