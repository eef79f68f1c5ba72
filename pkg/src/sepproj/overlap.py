"""Directional overlap of the hidden property and its maximization over
projection directions.

Two overlap scores for a labeled set along a direction v:

* interval: length of the intersection of the two sides' projection ranges,
  ``|[min,max](v.P-) ∩ [min,max](v.P+)|``;
* svm: the soft-margin objective ``lam*|v|^2 + mean(max(0, 1 - y (v.p - b)))``.

The overlap of the hidden property after projecting along w equals the
minimum of the score over directions orthogonal to w (the score depends on
points only through their dot products with v, so re-projecting the data is
unnecessary).  The outer problem maximizes that overlap over unit vectors w,
optionally constrained to a subspace (fixed separating hyperplanes survive
exactly when w is orthogonal to their normals) and to a feasible region such
as "the kept properties remain strictly separable after projection".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .config import DEFAULT_TOLS, Tolerances
from .data import LabeledPointSet
from .errors import BadParamsError, EmptySubspaceError
from .geometry import (
    OrthoBasis,
    complement_basis,
    flat_coordinates,
    orthonormalize,
    project_points,
)
from .separability import max_slack_separator


@dataclass(frozen=True)
class OverlapSpec:
    """Overlap score selection plus inner-solver settings."""

    kind: str = "svm"               # "interval" or "svm"
    lam: float = 1.0                # svm regularization weight, > 0
    inner_tol: float = 1e-12        # KKT violation target for the svm dual
    inner_max_iter: int = 200000
    n_directions: int = 4096        # interval kind: sampled directions
    refine_iters: int = 60          # interval kind: local refinement rounds

    def __post_init__(self):
        if self.kind not in ("interval", "svm"):
            raise BadParamsError(f"unknown overlap kind {self.kind!r}")
        if self.kind == "svm" and not self.lam > 0:
            raise BadParamsError("svm overlap requires lam > 0")


def g_interval(ps: LabeledPointSet, v, hidden: int = 0) -> float:
    """Length of the overlap of the two sides' ranges along v (0 if disjoint)."""
    v = np.asarray(v, dtype=float)
    sn = ps.side(hidden, -1) @ v
    sp = ps.side(hidden, +1) @ v
    lo = max(sn.min(), sp.min())
    hi = min(sn.max(), sp.max())
    return float(max(0.0, hi - lo))


def g_svm(ps: LabeledPointSet, v, b: float, lam: float, hidden: int = 0) -> float:
    """Soft-margin objective at (v, b): lam*|v|^2 + mean hinge loss."""
    v = np.asarray(v, dtype=float)
    y = ps.labels[hidden].astype(float)
    margins = 1.0 - y * (ps.points @ v - b)
    return float(lam * v @ v + np.maximum(0.0, margins).mean())


def _reduced_data(ps: LabeledPointSet, constraints: OrthoBasis, hidden: int):
    Z = complement_basis(constraints)
    if Z.count == 0:
        raise EmptySubspaceError("constraints leave no direction for the score")
    X = ps.points @ Z.vectors.T
    y = ps.labels[hidden].astype(float)
    return X, y, Z


def _fix_equality(alpha, y, C):
    """Clip a warm start to the box and restore y.alpha = 0 by shrinking the
    heavier side."""
    alpha = np.clip(alpha, 0.0, C)
    r = float(alpha @ y)
    if abs(r) > 1e-15:
        pos = y > 0
        mass = alpha[pos].sum() if r > 0 else alpha[~pos].sum()
        if mass > abs(r):
            alpha[pos if r > 0 else ~pos] *= (mass - abs(r)) / mass
        else:
            alpha[:] = 0.0
    return alpha


def _solve_svm_gram(K, y, lam, spec: OverlapSpec, alpha0=None):
    """Exact dual solve (SMO to tiny KKT violation + equality-system polish),
    entirely in Gram-matrix space.  Returns (alpha, u_vals, b, value) where
    u_vals[i] = v . x_i for the primal minimizer v."""
    n = K.shape[0]
    C = 1.0 / n
    if alpha0 is not None and alpha0.shape[0] == n:
        alpha = _fix_equality(alpha0.copy(), y, C)
    else:
        alpha = np.zeros(n)
    _kernels.smo_box_equality(K, y, C, lam, alpha, spec.inner_tol,
                              spec.inner_max_iter)
    alpha = _kkt_polish(K, y, lam, alpha, C)
    coef = alpha * y
    u_vals = K @ coef / (2.0 * lam)
    b = _offset_from_dual(y, alpha, u_vals, C)
    margins = 1.0 - y * (u_vals - b)
    vv = float(coef @ u_vals) / (2.0 * lam)  # = |v|^2
    value = float(lam * vv + np.maximum(0.0, margins).mean())
    return alpha, u_vals, b, value


def _kkt_polish(K, y, lam, alpha, C):
    """Solve the stationarity system exactly on the identified free set."""
    tol = 1e-9 * C
    free = (alpha > tol) & (alpha < C - tol)
    if not free.any():
        return alpha
    at_c = alpha >= C - tol
    F = np.nonzero(free)[0]
    m = len(F)
    A = np.zeros((m + 1, m + 1))
    A[:m, :m] = K[np.ix_(F, F)] * y[F][None, :] / (2.0 * lam)
    A[:m, m] = 1.0
    A[m, :m] = y[F]
    rhs = np.zeros(m + 1)
    rhs[:m] = y[F]
    if at_c.any():
        rhs[:m] -= (K[np.ix_(F, np.nonzero(at_c)[0])] @ (y[at_c] * C)) / (2.0 * lam)
        rhs[m] = -float(y[at_c].sum()) * C
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        return alpha
    aF = sol[:m]
    if (aF < -1e-12).any() or (aF > C + 1e-12).any():
        return alpha
    out = alpha.copy()
    out[F] = np.clip(aF, 0.0, C)
    return out


def _offset_from_dual(y, alpha, u_vals, C):
    tol = 1e-9 * C
    t = y - u_vals
    free = (alpha > tol) & (alpha < C - tol)
    if free.any():
        return -float(t[free].mean())
    up = ((y > 0) & (alpha < C - tol)) | ((y < 0) & (alpha > tol))
    dn = ((y > 0) & (alpha > tol)) | ((y < 0) & (alpha < C - tol))
    lo = t[up].max() if up.any() else None
    hi = t[dn].min() if dn.any() else None
    if lo is None and hi is None:
        return 0.0
    if lo is None:
        return -float(hi)
    if hi is None:
        return -float(lo)
    return -0.5 * float(lo + hi)


def _interval_directions(m: int, n_dir: int, seed: int = 0x5EED) -> np.ndarray:
    if m == 1:
        return np.array([[1.0]])
    if m == 2:
        ang = np.pi * np.arange(n_dir) / n_dir
        return np.column_stack([np.cos(ang), np.sin(ang)])
    rng = np.random.default_rng(seed)
    V = rng.normal(size=(n_dir, m))
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def min_overlap(ps: LabeledPointSet, spec: OverlapSpec,
                constraints: OrthoBasis | None = None, hidden: int = 0,
                _warm: np.ndarray | None = None):
    """Minimize the overlap score over directions orthogonal to the constraint
    vectors.  Returns (v, b, value); b is 0.0 for the interval kind.

    The svm kind is convex and solved essentially exactly via its dual; the
    interval kind is nonconvex in the direction and is minimized by dense
    direction sampling plus local refinement (documented approximate).
    """
    if constraints is None:
        constraints = OrthoBasis.empty(ps.d)
    if spec.kind == "svm":
        X, y, Z = _reduced_data(ps, constraints, hidden)
        K = np.ascontiguousarray(X @ X.T)
        alpha, u_vals, b, value = _solve_svm_gram(K, y, spec.lam, spec, _warm)
        u = X.T @ (alpha * y) / (2.0 * spec.lam)
        return Z.vectors.T @ u, float(b), value, alpha
    X, y, Z = _reduced_data(ps, constraints, hidden)
    dirs = _interval_directions(Z.count, spec.n_directions)
    sn_all = X[y < 0] @ dirs.T
    sp_all = X[y > 0] @ dirs.T
    lo = np.maximum(sn_all.min(axis=0), sp_all.min(axis=0))
    hi = np.minimum(sn_all.max(axis=0), sp_all.max(axis=0))
    vals = np.maximum(0.0, hi - lo)
    best = int(np.argmin(vals))
    u = dirs[best]
    value = float(vals[best])

    def g_of(uvec):
        sn = X[y < 0] @ uvec
        sp = X[y > 0] @ uvec
        return max(0.0, min(sn.max(), sp.max()) - max(sn.min(), sp.min()))

    step = np.pi / spec.n_directions if Z.count == 2 else 0.05
    for _ in range(spec.refine_iters):
        improved = False
        for axis in range(Z.count):
            e = np.zeros(Z.count)
            e[axis] = 1.0
            for sgn in (1.0, -1.0):
                cand = u + sgn * step * e
                nc = np.linalg.norm(cand)
                if nc == 0:
                    continue
                cand /= nc
                cv = g_of(cand)
                if cv < value - 1e-15:
                    u, value = cand, cv
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-10:
                break
    return Z.vectors.T @ u, 0.0, float(value), None


def f_value(ps: LabeledPointSet, w, spec: OverlapSpec,
            keep_normals: np.ndarray | None = None, hidden: int = 0,
            _warm: np.ndarray | None = None):
    """Overlap of the hidden property after projecting along unit w: the score
    minimum over directions orthogonal to w (and to any fixed keep normals).
    The data itself is not re-projected; the constraint substitutes for it."""
    w = np.asarray(w, dtype=float)
    rows = [w[None, :]]
    if keep_normals is not None and len(keep_normals):
        rows.append(np.asarray(keep_normals, dtype=float))
    constraints = orthonormalize(np.vstack(rows))
    v, b, value, alpha = min_overlap(ps, spec, constraints, hidden, _warm=_warm)
    return value, (v, b, alpha)


class _SvmClimbEngine:
    """Per-instance cache making one svm overlap evaluation O(n^2 + n d):
    the reduced Gram matrix for any direction w is a rank-one downdate of the
    keep-normal-reduced Gram matrix."""

    def __init__(self, ps: LabeledPointSet, spec: OverlapSpec, keep_normals,
                 hidden: int):
        self.spec = spec
        self.lam = spec.lam
        self.y = ps.labels[hidden].astype(float)
        self.P = ps.points
        if keep_normals is not None and len(keep_normals):
            self.N = orthonormalize(np.asarray(keep_normals, dtype=float)).vectors
            self.PN = self.P - (self.P @ self.N.T) @ self.N
        else:
            self.N = None
            self.PN = self.P
        self.KN = np.ascontiguousarray(self.PN @ self.PN.T)

    def value(self, w, warm=None):
        z = w if self.N is None else w - self.N.T @ (self.N @ w)
        nz = np.linalg.norm(z)
        t = (self.PN @ w) / nz
        K = self.KN - np.outer(t, t)
        alpha, _, _, value = _solve_svm_gram(K, self.y, self.lam, self.spec, warm)
        return value, alpha

    def gradient(self, w, alpha):
        s = self.P.T @ (alpha * self.y)
        return (w @ s) / (2.0 * self.lam) * s


# ---------------------------------------------------------------------------
# outer maximization


@dataclass
class MaximaCluster:
    w: np.ndarray
    value: float
    members: list[tuple[np.ndarray, float]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def value_spread(self) -> float:
        vals = [v for _, v in self.members]
        return max(vals) - min(vals)


@dataclass
class OptResult:
    best: np.ndarray
    value: float
    starts: int
    maxima: list[MaximaCluster]
    trace: list[float]
    finals: list[tuple[np.ndarray, float]]


class SlackOracle:
    """Signed feasibility slack over projection directions.

    ``slack(w) >= 0`` means feasible; the magnitude is meaningful, so an
    exact-penalty climb can crawl along the boundary instead of stalling
    against a binary accept/reject test."""

    def __init__(self, slack_fn: Callable, name: str = "constraint"):
        self._slack = slack_fn
        self.name = name

    def slack(self, w) -> float:
        return float(self._slack(np.asarray(w, dtype=float)))

    def __call__(self, w) -> bool:
        return self.slack(w) >= 0.0


def _interval_depth(A, B, n_dir: int = 1024) -> float:
    """Minimum directional range-overlap of two point clouds: a penetration
    depth that is zero exactly when some direction separates them (weakly)."""
    m = A.shape[1]
    dirs = _interval_directions(m, n_dir)
    sa = A @ dirs.T
    sb = B @ dirs.T
    lo = np.maximum(sa.min(axis=0), sb.min(axis=0))
    hi = np.minimum(sa.max(axis=0), sb.max(axis=0))
    return float(max(0.0, (hi - lo).min()))


def separability_feasibility(ps: LabeledPointSet, keep: tuple[int, ...],
                             require_hidden_overlap: bool = False,
                             hidden: int = 0, keep_floor: float = 1e-7,
                             tols: Tolerances = DEFAULT_TOLS) -> SlackOracle:
    """Feasibility over directions w: after projecting along w, every property
    in ``keep`` stays strictly separable with slack at least ``keep_floor``
    (and, optionally, the hidden property does not stay strictly separable).

    The signed slack is the LP separation slack on the feasible side and the
    negated penetration depth on the violated side, so a penalized climb sees
    a genuine gradient in both regimes.
    """
    def signed_separation(flat_neg, flat_pos) -> float:
        s, _, _ = max_slack_separator(flat_neg, flat_pos, tols)
        if s > tols.lp:
            return s
        return -_interval_depth(flat_neg, flat_pos)

    def slack_fn(w: np.ndarray) -> float:
        basis = OrthoBasis(w[None, :])
        flat = flat_coordinates(project_points(ps.points, basis), basis)
        s = np.inf
        for i in keep:
            si = signed_separation(flat[ps.labels[i] == -1],
                                   flat[ps.labels[i] == +1]) - keep_floor
            s = min(s, si)
        if require_hidden_overlap:
            sh = signed_separation(flat[ps.labels[hidden] == -1],
                                   flat[ps.labels[hidden] == +1])
            s = min(s, -sh)  # feasible when the hidden sides overlap or touch
        return s

    return SlackOracle(slack_fn, name="separability")


def _tangent_basis(w: np.ndarray, keep_normals) -> np.ndarray:
    rows = [w[None, :]]
    if keep_normals is not None and len(keep_normals):
        rows.append(np.asarray(keep_normals, dtype=float))
    return complement_basis(orthonormalize(np.vstack(rows))).vectors


def _svm_outer_gradient(ps, w, inner, lam, hidden):
    """Gradient of the projected-overlap value in w, from the inner dual
    solution: with s = sum_i alpha_i y_i p_i, the value depends on w only
    through -(w.s)^2/(4 lam)."""
    v, b, alpha = inner
    y = ps.labels[hidden].astype(float)
    s = ps.points.T @ (alpha * y)
    return (w @ s) / (2.0 * lam) * s


def _fd_outer_gradient(ps, w, spec, keep_normals, hidden, E, h=1e-5):
    g = np.zeros(E.shape[0])
    for i, e in enumerate(E):
        wp = w + h * e
        wp /= np.linalg.norm(wp)
        wm = w - h * e
        wm /= np.linalg.norm(wm)
        fp, _ = f_value(ps, wp, spec, keep_normals, hidden)
        fm, _ = f_value(ps, wm, spec, keep_normals, hidden)
        g[i] = (fp - fm) / (2 * h)
    return E.T @ g


PENALTY_WEIGHT = 1.0


def _climb(ps, spec, w0, keep_normals, feasible, hidden,
           step0=0.25, step_min=1e-8, max_iter=2000):
    """Ascent with retraction to the unit sphere.

    The gradient step is tried first (greedy); when rejected, an eight-point
    tangent compass is probed.  A feasibility SlackOracle turns into an exact
    penalty (value + weight * min(0, slack)), so the climb crawls cleanly
    along curved constraint boundaries instead of stalling against them.
    Accepted steps never decrease the (penalized) value."""
    svm = spec.kind == "svm"
    engine = _SvmClimbEngine(ps, spec, keep_normals, hidden) if svm else None
    oracle = feasible if isinstance(feasible, SlackOracle) else None

    def evaluate(wv, warm):
        if svm:
            fv, cwarm = engine.value(wv, warm)
        else:
            fv, _ = f_value(ps, wv, spec, keep_normals, hidden)
            cwarm = None
        return fv, cwarm

    def penalized(wv, fv):
        if oracle is None:
            return fv, None
        s = oracle.slack(wv)
        return fv + PENALTY_WEIGHT * min(0.0, s), s

    def ok(wv, slack_val):
        if feasible is None:
            return True
        if oracle is not None:
            return slack_val >= 0.0
        return feasible(wv)

    w = np.asarray(w0, dtype=float)
    w = w / np.linalg.norm(w)
    fval, warm = evaluate(w, None)
    val, slack = penalized(w, fval)
    best_feasible = (w, fval) if ok(w, slack) else None
    trace = [val]
    step = step0
    it = 0
    while it < max_iter and step > step_min:
        it += 1
        E = _tangent_basis(w, keep_normals)
        if E.shape[0] == 0:
            break
        if svm:
            grad = engine.gradient(w, warm)
        else:
            grad = _fd_outer_gradient(ps, w, spec, keep_normals, hidden, E)
        gt = E.T @ (E @ grad)
        gn = np.linalg.norm(gt)
        candidates = []
        if gn > 0:
            candidates.append(gt / gn)
        moved = False
        for dvec in candidates:
            cand = w + step * dvec
            cand /= np.linalg.norm(cand)
            cf, cwarm = evaluate(cand, warm)
            if oracle is None and feasible is not None and cf > val + 1e-15 \
                    and not feasible(cand):
                continue
            if oracle is None:
                cv, cs = cf, None
            else:
                if cf + 0.0 <= val + 1e-15:  # penalty can only lower it
                    continue
                cv, cs = penalized(cand, cf)
            if cv > val + 1e-15:
                w, val, fval, slack, warm = cand, cv, cf, cs, cwarm
                if ok(w, slack) and (best_feasible is None or fval > best_feasible[1]):
                    best_feasible = (w, fval)
                trace.append(val)
                step = min(step * 1.7, step0)
                moved = True
                break
        if not moved:
            dirs = []
            if E.shape[0] >= 2:
                e1, e2 = E[0], E[1]
                for a in range(8):
                    ang = np.pi * a / 4.0
                    dirs.append(np.cos(ang) * e1 + np.sin(ang) * e2)
                for extra in E[2:]:
                    dirs.extend([extra, -extra])
            else:
                dirs.extend([E[0], -E[0]])
            scored = []
            for dvec in dirs:
                cand = w + step * dvec
                cand /= np.linalg.norm(cand)
                cf, cwarm = evaluate(cand, warm)
                scored.append((cf, cand, cwarm))
            scored.sort(key=lambda t: -t[0])
            for cf, cand, cwarm in scored:
                if oracle is not None and cf <= val + 1e-15:
                    break  # penalty only subtracts; no later entry can win
                if oracle is not None:
                    cv, cs = penalized(cand, cf)
                    if cv > val + 1e-15:
                        w, val, fval, slack, warm = cand, cv, cf, cs, cwarm
                        if ok(w, slack) and (best_feasible is None
                                             or fval > best_feasible[1]):
                            best_feasible = (w, fval)
                        trace.append(val)
                        step = min(step * 1.7, step0)
                        moved = True
                        break
                else:
                    if cf > val + 1e-15 and (feasible is None or feasible(cand)):
                        w, val, fval, warm = cand, cf, cf, cwarm
                        if best_feasible is None or fval > best_feasible[1]:
                            best_feasible = (w, fval)
                        trace.append(val)
                        step = min(step * 1.7, step0)
                        moved = True
                        break
        if not moved:
            step *= 0.5
    if feasible is not None and best_feasible is not None:
        w, fval = best_feasible
    return w, fval, trace


def _spokes(E):
    dirs = []
    if E.shape[0] >= 2:
        e1, e2 = E[0], E[1]
        for a in range(16):
            ang = 2.0 * np.pi * a / 16.0
            dirs.append(np.cos(ang) * e1 + np.sin(ang) * e2)
        for extra in E[2:]:
            dirs.extend([extra, -extra])
    elif E.shape[0] == 1:
        dirs.extend([E[0], -E[0]])
    return dirs


def _plateau_walk(evalF, w, val, warm, keep_normals, delta=0.01,
                  budget=400, tie_tol=1e-12):
    """Traverse an exactly-flat ridge of the (penalized) objective.

    The saturated inner problem makes the outer value depend on w only through
    one linear form over whole regions, so ascent can park anywhere on a flat
    boundary arc.  Walking equal-value spokes with momentum either finds a
    strictly better point (returned for further climbing) or exhausts the
    ridge."""
    start = (w, val, warm)
    for first_sign in (1.0, -1.0):
        w, val, warm = start
        prev = None
        for _ in range(budget):
            E = _tangent_basis(w, keep_normals)
            if E.shape[0] == 0:
                break
            best_tie = None
            for dvec in _spokes(E):
                if prev is None:
                    if first_sign * (dvec @ E[0]) < 0.3:
                        continue
                elif dvec @ prev < 0.3:
                    continue
                cand = w + delta * dvec
                cand /= np.linalg.norm(cand)
                cval, cwarm = evalF(cand, warm)
                if cval > val + 1e-15:
                    return cand, cval, cwarm, True
                if cval >= val - tie_tol and (best_tie is None or cval > best_tie[1]):
                    best_tie = (cand, cval, cwarm, dvec)
            if best_tie is None:
                break
            prev = best_tie[3]
            w, val, warm = best_tie[0], best_tie[1], best_tie[2]
    return start[0], start[1], start[2], False


def _angular_distance(w1, w2) -> float:
    c = abs(float(np.dot(w1, w2)))
    return float(np.arccos(min(1.0, c)))


def maximize_overlap(ps: LabeledPointSet, spec: OverlapSpec,
                     keep_normals=None, starts: int = 20, seed: int = 0,
                     feasible: Callable | None = None, hidden: int = 0,
                     cluster_angle: float = 0.2,
                     max_start_tries: int = 200000) -> OptResult:
    """Multi-start hill climbing of the projected overlap over unit vectors.

    Starts are seeded deterministically (per-start streams derived from the
    master seed, order-independent), filtered by the feasibility oracle when
    given, and climbed with monotone ascent.  Final vectors are clustered by
    angular distance with w and -w identified.
    """
    if starts < 1:
        raise BadParamsError("needs at least one start")
    d = ps.d
    start_vecs = []
    tries = 0
    idx = 0
    while len(start_vecs) < starts and tries < max_start_tries:
        rng = np.random.default_rng([seed, idx])
        idx += 1
        tries += 1
        w = rng.normal(size=d)
        nw = np.linalg.norm(w)
        if nw == 0:
            continue
        w /= nw
        if keep_normals is not None and len(keep_normals):
            K = orthonormalize(np.asarray(keep_normals, dtype=float))
            w = w - K.vectors.T @ (K.vectors @ w)
            nw = np.linalg.norm(w)
            if nw < 1e-12:
                continue
            w /= nw
        if w[np.argmax(np.abs(w))] < 0:
            w = -w
        if feasible is not None and not feasible(w):
            continue
        start_vecs.append(w)
    if len(start_vecs) < starts:
        raise BadParamsError(
            f"could only sample {len(start_vecs)} feasible starts"
        )
    finals = []
    best_trace = None
    for w0 in start_vecs:
        w, val, trace = _climb(ps, spec, w0, keep_normals, feasible, hidden)
        finals.append((w, val))
        if best_trace is None or val > best_trace[0]:
            best_trace = (val, trace)
    clusters: list[MaximaCluster] = []
    for w, val in sorted(finals, key=lambda t: -t[1]):
        for cl in clusters:
            if _angular_distance(w, cl.w) <= cluster_angle:
                cl.members.append((w, val))
                break
        else:
            clusters.append(MaximaCluster(w, val, [(w, val)]))
    best = clusters[0]
    return OptResult(best.w, best.value, starts, clusters, best_trace[1], finals)
