"""Numerical computation of the discrete constants C_{k,m} and Cbar_{k,m}.

Three routes, kept deliberately independent so they can cross-check each
other:

* ``general_constant`` — multistart coordinate descent over k independent
  simplex factors.  Each factor subproblem is a piecewise-linear minimax and
  is solved exactly: by envelope-crossing enumeration at m = 1 (each output
  entry is affine in the free parameter) and by a small LP for m > 1.
* ``diagonal_constant`` — all factors identical.  At m = 1 the objective is
  the one-dimensional diagonal envelope, minimized exactly over its rational
  crossing points.  For m > 1: multistart projected subgradient with Polyak
  steps followed by an SLSQP polish of the epigraph formulation.
* ``grid_oracle`` — exhaustive exact-rational sweep over simplex grid points
  with denominator n; its minimum is an upper bound for the true constant and
  is exactly the best value any solver restricted to that grid can reach.

All solvers return upper estimates of the true constants (they evaluate the
objective at feasible points).  Whether C_{k,m} = Cbar_{k,m} for m > 1 is
open; the two are reported side by side and never asserted equal.

Everything is deterministic given the config seed: argmax ties during descent
break toward the smaller index, multistarts are reduced by minimum, and the
parallel-schedule question never arises because reductions are associative.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog, minimize

from .constants import optimal_constant
from .errors import BudgetExceeded
from .pb import intersection_point, pb_pmf


@dataclass(frozen=True)
class SolverConfig:
    multistarts: int = 64
    tol: float = 1e-9            # objective-change stopping tolerance
    max_sweeps: int = 100_000    # coordinate-sweep cap per start
    subgradient_iters: int = 400
    cert_tol: float = 1e-7       # tolerance for the mode-sharing certificate
    seed: int = 0
    threads: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "SolverConfig":
        return cls(**json.loads(s))


@dataclass
class MinimaxResult:
    value: float
    argument: List[List[float]]      # k weight vectors; one vector in diagonal mode
    shared_modes: List[int]
    method: str
    iterations: int
    tolerance: float
    seed: int
    converged: bool
    diagonal: bool
    k: int
    m: int
    value_exact: Optional[Fraction] = None
    config: Optional[SolverConfig] = None

    def to_dict(self) -> dict:
        d = {
            "k": self.k,
            "m": self.m,
            "diagonal": self.diagonal,
            "value": self.value,
            "value_exact": str(self.value_exact) if self.value_exact is not None else None,
            "argument": self.argument,
            "shared_modes": self.shared_modes,
            "method": self.method,
            "iterations": self.iterations,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "converged": self.converged,
            "config": asdict(self.config) if self.config is not None else None,
        }
        return d


# ---------------------------------------------------------------------------
# Shared numeric helpers
# ---------------------------------------------------------------------------

def _conv_all(ws: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([1.0])
    for w in ws:
        out = np.convolve(out, w)
    return out


def _conv_pow(w: np.ndarray, k: int) -> np.ndarray:
    out = np.array([1.0])
    for _ in range(k):
        out = np.convolve(out, w)
    return out


def _conv_seq(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _conv_seq_pow(a: Sequence, k: int) -> list:
    out = [1]
    for _ in range(k):
        out = _conv_seq(out, a)
    return out


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _shared_modes(profile: np.ndarray, tol: float) -> List[int]:
    top = float(np.max(profile))
    return [i for i, v in enumerate(profile) if v >= top - tol]


def _clean_weights(w: np.ndarray) -> np.ndarray:
    w = np.maximum(np.asarray(w, dtype=float), 0.0)
    return w / w.sum()


# ---------------------------------------------------------------------------
# Exact 1-d subproblems
# ---------------------------------------------------------------------------

def _envelope_min_affine(slopes: Sequence[float], offsets: Sequence[float]) -> Tuple[float, float]:
    """Minimize max_i (a_i p + b_i) over p in [0,1]; exact for affine pieces."""
    cands = [0.0, 1.0]
    n = len(slopes)
    for i in range(n):
        for j in range(i + 1, n):
            da = slopes[i] - slopes[j]
            if da != 0.0:
                p = (offsets[j] - offsets[i]) / da
                if 0.0 < p < 1.0:
                    cands.append(p)
    best_p, best_v = 0.0, math.inf
    for p in cands:
        v = max(a * p + b for a, b in zip(slopes, offsets))
        if v < best_v - 0.0:
            best_p, best_v = p, v
    return best_p, best_v


def _diagonal_envelope_exact(k: int) -> Tuple[Fraction, Fraction, List[int]]:
    """Exact diagonal minimum at m = 1 over the envelope crossing points.

    Adjacent binomial pmf entries cross at p = i/(k+1); the envelope minimum
    over [0,1] sits at one of these points.
    """
    best_p, best_v, best_modes = None, None, None
    for i in range(0, k + 2):
        p = Fraction(i, k + 1)
        pmf = [math.comb(k, t) * p**t * (1 - p) ** (k - t) for t in range(k + 1)]
        v = max(pmf)
        if best_v is None or v < best_v:
            best_p, best_v = p, v
            best_modes = [t for t, x in enumerate(pmf) if x == v]
    return best_p, best_v, best_modes


# ---------------------------------------------------------------------------
# General constant: k independent factors
# ---------------------------------------------------------------------------

def _lp_factor_step(R: np.ndarray, m: int) -> Tuple[np.ndarray, float]:
    """Exact minimax over one simplex factor given the others' convolution R."""
    n_out = len(R) + m
    A = np.zeros((n_out, m + 2))
    for i in range(n_out):
        for a in range(m + 1):
            t = i - a
            if 0 <= t < len(R):
                A[i, a] = R[t]
        A[i, m + 1] = -1.0
    c = np.zeros(m + 2)
    c[m + 1] = 1.0
    A_eq = np.zeros((1, m + 2))
    A_eq[0, : m + 1] = 1.0
    bounds = [(0.0, 1.0)] * (m + 1) + [(None, None)]
    res = linprog(c, A_ub=A, b_ub=np.zeros(n_out), A_eq=A_eq, b_eq=[1.0],
                  bounds=bounds, method="highs")
    if not res.success:  # pragma: no cover - tiny well-posed LP
        raise RuntimeError(f"factor LP failed: {res.message}")
    return _clean_weights(res.x[: m + 1]), float(res.x[m + 1])


def _coordinate_descent(ws: List[np.ndarray], k: int, m: int,
                        cfg: SolverConfig) -> Tuple[List[np.ndarray], float, int, bool]:
    prev = float(np.max(_conv_all(ws)))
    sweeps = 0
    converged = False
    while sweeps < cfg.max_sweeps:
        sweeps += 1
        for j in range(k):
            R = _conv_all([ws[t] for t in range(k) if t != j])
            if m == 1:
                # f_i(p) = (1-p) R_i + p R_{i-1}: affine pieces in p.
                Rp = np.concatenate(([0.0], R, [0.0]))
                slopes = [Rp[i] - Rp[i + 1] for i in range(len(R) + 1)]
                offsets = [Rp[i + 1] for i in range(len(R) + 1)]
                p, _ = _envelope_min_affine(slopes, offsets)
                ws[j] = np.array([1.0 - p, p])
            else:
                ws[j], _ = _lp_factor_step(R, m)
        cur = float(np.max(_conv_all(ws)))
        if prev - cur < cfg.tol:
            converged = True
            prev = min(prev, cur)
            break
        prev = cur
    return ws, prev, sweeps, converged


def general_constant(k: int, m: int, cfg: Optional[SolverConfig] = None) -> MinimaxResult:
    """Upper estimate of C_{k,m} by multistart coordinate descent."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(cfg.seed)

    p_diag, _, _ = _diagonal_envelope_exact(k)
    diag_w = np.zeros(m + 1)
    diag_w[0], diag_w[1] = 1.0 - float(p_diag), float(p_diag)
    uniform = np.full(m + 1, 1.0 / (m + 1))

    starts: List[List[np.ndarray]] = [
        [diag_w.copy() for _ in range(k)],
        [uniform.copy() for _ in range(k)],
    ]
    for _ in range(max(0, cfg.multistarts - len(starts))):
        starts.append([_clean_weights(rng.exponential(size=m + 1)) for _ in range(k)])

    best_ws, best_v, best_it, best_conv = None, math.inf, 0, False
    total_it = 0
    for ws0 in starts:
        ws, v, it, conv = _coordinate_descent([w.copy() for w in ws0], k, m, cfg)
        total_it += it
        if v < best_v:
            best_ws, best_v, best_it, best_conv = ws, v, it, conv

    ws = [_clean_weights(w) for w in best_ws]
    profile = _conv_all(ws)
    value = float(np.max(profile))
    return MinimaxResult(
        value=value,
        argument=[list(map(float, w)) for w in ws],
        shared_modes=_shared_modes(profile, cfg.cert_tol),
        method="coordinate-descent" + ("-envelope" if m == 1 else "-lp"),
        iterations=total_it,
        tolerance=cfg.tol,
        seed=cfg.seed,
        converged=best_conv,
        diagonal=False,
        k=k,
        m=m,
        config=cfg,
    )


# ---------------------------------------------------------------------------
# Diagonal constant: all factors equal
# ---------------------------------------------------------------------------

def _diag_obj(w: np.ndarray, k: int) -> float:
    return float(np.max(_conv_pow(w, k)))


def _diag_subgradient(w: np.ndarray, k: int, iters: int) -> Tuple[np.ndarray, float]:
    """Projected subgradient with Polyak-style steps on max_i (w^{*k})_i."""
    m = len(w) - 1
    best_w, best_v = w.copy(), _diag_obj(w, k)
    for _ in range(iters):
        ckm1 = _conv_pow(w, k - 1)
        c = np.convolve(ckm1, w)
        i = int(np.argmax(c))  # ties break toward the smaller index
        v = float(c[i])
        if v < best_v:
            best_w, best_v = w.copy(), v
        g = np.array([ckm1[i - a] if 0 <= i - a < len(ckm1) else 0.0
                      for a in range(m + 1)]) * k
        gg = float(g @ g)
        if gg == 0.0:
            break
        step = (v - best_v + 1e-6) / gg
        w = _project_simplex(w - step * g)
    return best_w, best_v


def _diag_polish(w0: np.ndarray, k: int) -> Tuple[np.ndarray, float, bool]:
    """SLSQP on the epigraph form: min t s.t. (w^{*k})_i <= t, w in simplex."""
    m = len(w0) - 1
    n_out = k * m + 1

    def cons_f(x):
        return x[-1] - _conv_pow(x[:-1], k)

    def cons_jac(x):
        w = x[:-1]
        ckm1 = _conv_pow(w, k - 1)
        J = np.zeros((n_out, m + 2))
        for i in range(n_out):
            for a in range(m + 1):
                t = i - a
                if 0 <= t < len(ckm1):
                    J[i, a] = -k * ckm1[t]
            J[i, m + 1] = 1.0
        return J

    x0 = np.concatenate([w0, [_diag_obj(w0, k)]])
    res = minimize(
        lambda x: x[-1], x0, method="SLSQP",
        jac=lambda x: np.concatenate([np.zeros(m + 1), [1.0]]),
        constraints=[
            {"type": "ineq", "fun": cons_f, "jac": cons_jac},
            {"type": "eq", "fun": lambda x: np.sum(x[:-1]) - 1.0,
             "jac": lambda x: np.concatenate([np.ones(m + 1), [0.0]])},
        ],
        bounds=[(0.0, 1.0)] * (m + 1) + [(None, None)],
        options={"maxiter": 300, "ftol": 1e-14},
    )
    w = _clean_weights(res.x[: m + 1])
    return w, _diag_obj(w, k), bool(res.success)


def _coarse_grid_seeds(k: int, m: int, top: int = 3) -> List[np.ndarray]:
    """Best few points of a coarse float sweep of the diagonal simplex grid."""
    n = 2
    while math.comb(n + 1 + m, m) <= 4000:
        n += 1
    scored = []
    for comp in itertools.combinations_with_replacement(range(m + 1), n):
        w = np.bincount(comp, minlength=m + 1) / n
        scored.append((_diag_obj(w, k), tuple(w)))
    scored.sort()
    return [np.array(w) for _, w in scored[:top]]


def diagonal_constant(k: int, m: int, cfg: Optional[SolverConfig] = None,
                      extra_seeds: Optional[Sequence[Sequence[float]]] = None) -> MinimaxResult:
    """Upper estimate of Cbar_{k,m}; exact at m = 1 via the envelope."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    cfg = cfg or SolverConfig()

    if m == 1:
        p, v, modes = _diagonal_envelope_exact(k)
        w = [1.0 - float(p), float(p)]
        return MinimaxResult(
            value=float(v),
            argument=[w],
            shared_modes=modes,
            method="diagonal-envelope-exact",
            iterations=k + 2,
            tolerance=0.0,
            seed=cfg.seed,
            converged=True,
            diagonal=True,
            k=k,
            m=m,
            value_exact=v,
            config=cfg,
        )

    rng = np.random.default_rng(cfg.seed)
    p_diag, _, _ = _diagonal_envelope_exact(k)
    padded = np.zeros(m + 1)
    padded[0], padded[1] = 1.0 - float(p_diag), float(p_diag)
    seeds: List[np.ndarray] = [np.full(m + 1, 1.0 / (m + 1)), padded]
    seeds.extend(_coarse_grid_seeds(k, m))
    if extra_seeds:
        seeds.extend(_clean_weights(np.array(s, dtype=float)) for s in extra_seeds)
    for _ in range(max(0, cfg.multistarts - len(seeds))):
        seeds.append(_clean_weights(rng.exponential(size=m + 1)))

    best_w, best_v, any_conv = None, math.inf, False
    for w0 in seeds:
        w1, _ = _diag_subgradient(w0.copy(), k, cfg.subgradient_iters)
        w2, v2, ok = _diag_polish(w1, k)
        if v2 < best_v:
            best_w, best_v, any_conv = w2, v2, ok

    profile = _conv_pow(best_w, k)
    value = float(np.max(profile))
    return MinimaxResult(
        value=value,
        argument=[list(map(float, best_w))],
        shared_modes=_shared_modes(profile, cfg.cert_tol),
        method="subgradient+slsqp",
        iterations=cfg.subgradient_iters * len(seeds),
        tolerance=cfg.tol,
        seed=cfg.seed,
        converged=any_conv,
        diagonal=True,
        k=k,
        m=m,
        config=cfg,
    )


# ---------------------------------------------------------------------------
# Exhaustive rational grid oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridOracleResult:
    k: int
    m: int
    n: int
    diagonal: bool
    grid_min: Fraction           # exact minimum over the grid
    upper_bound: Fraction        # = grid_min: an upper bound for the constant
    argmin: tuple                # weight tuples with denominator n
    points_evaluated: int

    def to_dict(self) -> dict:
        return {
            "k": self.k, "m": self.m, "n": self.n, "diagonal": self.diagonal,
            "grid_min": str(self.grid_min),
            "grid_min_decimal": float(self.grid_min),
            "argmin": [[str(x) for x in w] for w in self.argmin],
            "points_evaluated": self.points_evaluated,
        }


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for i in range(n + 1):
        for rest in _compositions(n - i, parts - 1):
            yield (i,) + rest


def grid_oracle(k: int, m: int, n: int, diagonal: bool = False,
                budget: int = 2_000_000) -> GridOracleResult:
    """Exact sweep of simplex points with weight denominator n.

    The grid minimum is an upper bound for the true constant; every point is
    evaluated in exact rational arithmetic.
    """
    if k < 2 or m < 1 or n < 1:
        raise ValueError(f"need k >= 2, m >= 1, n >= 1; got k={k}, m={m}, n={n}")
    per = math.comb(n + m, m)
    total = per if diagonal else per**k
    if total > budget:
        raise BudgetExceeded(f"{total} grid points exceed budget {budget}")

    best_v, best_arg = None, None
    count = 0
    if diagonal:
        for comp in _compositions(n, m + 1):
            count += 1
            w = [Fraction(c, n) for c in comp]
            v = max(_conv_seq_pow(w, k))
            if best_v is None or v < best_v:
                best_v, best_arg = v, (tuple(w),)
    else:
        comps = [tuple(Fraction(c, n) for c in comp) for comp in _compositions(n, m + 1)]
        for combo in itertools.product(comps, repeat=k):
            count += 1
            prof = [1]
            for w in combo:
                prof = _conv_seq(prof, w)
            v = max(prof)
            if best_v is None or v < best_v:
                best_v, best_arg = v, combo
    return GridOracleResult(k, m, n, diagonal, best_v, best_v, best_arg, count)


# ---------------------------------------------------------------------------
# Proof-mirroring exact solver at m = 1
# ---------------------------------------------------------------------------

def intersection_restricted_solve(k: int) -> MinimaxResult:
    """Exact m = 1 solution restricted to shared-mode diagonal points.

    On the diagonal, adjacent pmf entries i-1 and i intersect exactly at
    p = i/(k+1); the minimax value is the smallest envelope value over those
    intersection points and equals the closed-form constant exactly.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    best_p, best_v, best_modes = None, None, None
    for i in range(1, k + 1):
        p = Fraction(i, k + 1)
        if 0 < p < 1:
            # self-consistency with the generic intersection formula
            pstar = intersection_point((p,) * (k - 1), i)
            if pstar != p:  # pragma: no cover - would signal a bug
                raise AssertionError(f"intersection fixed point failed at k={k}, i={i}")
        pmf = pb_pmf((p,) * k).pmf
        if pmf[i] != pmf[i - 1]:  # pragma: no cover
            raise AssertionError(f"entries {i - 1},{i} not tied at p={p}")
        v = max(pmf)
        if best_v is None or v < best_v:
            best_p, best_v = p, v
            best_modes = [t for t, x in enumerate(pmf) if x == v]
    assert best_v == optimal_constant(k)
    return MinimaxResult(
        value=float(best_v),
        argument=[[float(1 - best_p), float(best_p)]],
        shared_modes=best_modes,
        method="intersection-restricted-exact",
        iterations=k,
        tolerance=0.0,
        seed=0,
        converged=True,
        diagonal=True,
        k=k,
        m=1,
        value_exact=best_v,
    )
