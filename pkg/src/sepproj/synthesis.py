"""Synthesis of separation-preserving projections.

Given a labeled point set whose properties are all strictly linearly
separable, with fixed separating hyperplanes H_2..H_k for the properties to
keep, any projection along a vector parallel to every H_i keeps those exact
separators valid.  This module constructs such vectors that simultaneously
destroy the separability of the hidden property:

* ``construct_eliminating_projection`` builds one unit vector by reducing a
  common hull point of the side-coordinate images to a small witness, then
  aiming the projection so the witness collapses onto a single flat.
* ``perturb_general_position`` nudges that vector so the projected data is
  not even non-strictly separable and is free of the collapse degeneracy.
* ``multi_projection_driver`` generalizes to any well-behaved separability
  predicate with a witness extractor, emitting an orthonormal family of
  projection vectors or a certified impossibility.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .data import LabeledPointSet
from .errors import (
    ActuallySeparableError,
    DegeneratePositionError,
    NotAllLabelsError,
    NotIntersectingError,
    NotSeparableInputError,
    TooFewPointsError,
    WitnessSearchExceededError,
)
from .geometry import (
    Flat,
    OrthoBasis,
    affine_rank,
    barycentric_coords,
    complement_basis,
    orthonormalize,
    project_points,
    subspace_intersection,
)
from .separability import (
    Hyperplane,
    SeparationResult,
    bc_separable_bruteforce,
    check_common_point_certificate,
    common_point,
    kirchberger_reduce,
    linear_separability,
    max_slack_separator,
    one_infty_separable,
    one_infty_witness,
    point_in_hull,
    weak_separator,
)

GP_JITTER = 1e-7  # magnitude of the deterministic jitter used to restore rank


@dataclass
class SynthesisProblem:
    """Input bundle: data, which property to hide, and the hyperplanes whose
    separations must survive (one per property other than ``hidden``).

    ``keep_planes`` maps property index -> Hyperplane; when omitted, maximum
    margin planes are computed at construction time.
    """

    data: LabeledPointSet
    hidden: int = 0
    keep_planes: dict[int, Hyperplane] = field(default_factory=dict)

    def keep_indices(self) -> list[int]:
        return [i for i in range(self.data.k) if i != self.hidden]


@dataclass
class ProjectionOutcome:
    basis: OrthoBasis
    projected: LabeledPointSet
    hidden_result: SeparationResult
    keep_results: dict[int, SeparationResult]
    keep_planes: dict[int, Hyperplane]
    preserving_residual: float
    witness: np.ndarray | None = None   # original indices of the collapse witness
    evidence: object = None             # predicate-specific failure evidence

    @property
    def impossible(self) -> bool:
        return False


@dataclass
class ImpossibleOutcome:
    reason: str
    evidence: object
    projected_sides: tuple[np.ndarray, np.ndarray]
    keep_planes: dict[int, Hyperplane]

    @property
    def impossible(self) -> bool:
        return True


def is_separation_preserving(w, normals, tol: float = DEFAULT_TOLS.orth) -> bool:
    """A projection direction keeps every fixed hyperplane separating iff it is
    orthogonal to each of their normals."""
    w = np.asarray(w, dtype=float)
    normals = np.asarray(normals, dtype=float)
    if normals.size == 0:
        return True
    if normals.shape[-1] != w.shape[0]:
        raise ValueError("normal and direction dimensions differ")
    return bool(np.abs(normals @ w).max() <= tol)


def max_margin_planes(ps: LabeledPointSet, props,
                      tols: Tolerances = DEFAULT_TOLS) -> dict[int, Hyperplane]:
    """Maximum-margin separating hyperplane per requested property."""
    planes: dict[int, Hyperplane] = {}
    for i in props:
        res = linear_separability(ps.side(i, -1), ps.side(i, +1), tols=tols)
        if not res.separable or not res.strict:
            raise NotSeparableInputError(f"property {i} is not strictly separable")
        planes[i] = res.hyperplane
    return planes


def _side_coordinates(ps: LabeledPointSet, planes: dict[int, Hyperplane],
                      order: list[int]) -> np.ndarray:
    """Signed side values of every point against each keep plane (n, k-1)."""
    cols = [planes[i].side_values(ps.points) for i in order]
    return np.column_stack(cols) if cols else np.zeros((ps.n, 0))


def _resolve_problem(prob: SynthesisProblem, tols: Tolerances):
    ps = prob.data
    keep = prob.keep_indices()
    planes = dict(prob.keep_planes)
    missing = [i for i in keep if i not in planes]
    if missing:
        planes.update(max_margin_planes(ps, missing, tols))
    for i in keep:
        h = planes[i]
        if not h.separates(ps.side(i, -1), ps.side(i, +1), strict=True, tol=tols.lp):
            raise NotSeparableInputError(
                f"supplied plane for property {i} does not strictly separate it"
            )
    normals = np.array([planes[i].normal for i in keep]) if keep else np.zeros((0, ps.d))
    if keep:
        basis_a = orthonormalize(normals, tols)
        if basis_a.count != len(keep):
            raise DegeneratePositionError("keep-plane normals are linearly dependent")
    else:
        basis_a = OrthoBasis.empty(ps.d)
    return ps, keep, planes, normals, basis_a


def _keep_certificates(projected: LabeledPointSet, keep, planes,
                       tols: Tolerances) -> dict[int, SeparationResult]:
    out: dict[int, SeparationResult] = {}
    for i in keep:
        h = planes[i]
        sn = h.side_values(projected.side(i, -1))
        sp = h.side_values(projected.side(i, +1))
        margin = 0.5 * float(sp.min() - sn.max())
        if margin <= tols.lp:
            raise DegeneratePositionError(
                f"projection failed to preserve the separator of property {i}"
            )
        res = SeparationResult(True, strict=True, hyperplane=h, margin=margin)
        res.validate(projected.side(i, -1), projected.side(i, +1))
        out[i] = res
    return out


def construct_eliminating_projection(prob: SynthesisProblem,
                                     tols: Tolerances = DEFAULT_TOLS,
                                     strict_labels: bool = False):
    """One separation-preserving unit vector whose projection makes the hidden
    property lose strict linear separability, certified on the output.

    Requires all properties strictly separable.  With every label combination
    present the construction always succeeds; otherwise it can return
    ``ImpossibleOutcome`` (or raise NotAllLabelsError with strict_labels).
    """
    ps, keep, planes, normals, basis_a = _resolve_problem(prob, tols)
    hidden = prob.hidden
    hres = linear_separability(ps.side(hidden, -1), ps.side(hidden, +1), tols=tols)
    if not (hres.separable and hres.strict):
        raise NotSeparableInputError("hidden property is not strictly separable")
    if not ps.uses_all_labels():
        if strict_labels:
            raise NotAllLabelsError(
                f"{len(ps.label_tuples())} of {2 ** ps.k} label combinations present"
            )
    elif ps.d < ps.k:
        raise DegeneratePositionError("all labels present requires d >= k")

    side = _side_coordinates(ps, planes, keep)      # (n, k-1)
    neg_idx = ps.side_indices(hidden, -1)
    pos_idx = ps.side_indices(hidden, +1)
    q_neg = side[neg_idx]
    q_pos = side[pos_idx]

    if ps.k == 1:
        # no separators to keep: collapse along the hidden property's own
        # max-margin normal, which folds the two sides together
        w = hres.hyperplane.normal
        return _finish_single(prob, ps, keep, planes, basis_a, w, None, tols)

    # the hidden property must overlap after projecting onto the span of the
    # keep normals; with all labels present both hulls contain the origin
    origin = np.zeros(len(keep))
    in_neg, lam = point_in_hull(origin, q_neg, tols)
    in_pos, mu = point_in_hull(origin, q_pos, tols)
    if in_neg and in_pos:
        x0 = origin
    else:
        try:
            x0, lam, mu = common_point(q_neg, q_pos, tols)
        except ActuallySeparableError:
            evidence = linear_separability(q_neg, q_pos, tols=tols)
            return ImpossibleOutcome(
                "hidden property stays strictly separable on the projection "
                "onto the keep-normal span",
                evidence, (q_neg, q_pos), planes,
            )
    witness = kirchberger_reduce(q_neg, q_pos, x0, lam, mu, tols)

    star_idx = np.concatenate([neg_idx[witness.idx_p], pos_idx[witness.idx_q]])
    p_star_pos = int(np.argmin(star_idx))
    p_star = ps.points[star_idx[p_star_pos]]
    others = ps.points[np.delete(star_idx, p_star_pos)]

    try:
        dirs = orthonormalize(others[1:] - others[0], tols) if len(others) > 1 \
            else OrthoBasis.empty(ps.d)
    except Exception as exc:
        raise DegeneratePositionError(f"witness flat is degenerate: {exc}") from exc
    f1 = Flat(others[0], dirs)
    f2 = Flat(p_star, complement_basis(basis_a, tols))
    r = _intersection_point(f1, f2, tols)
    w_raw = r - p_star
    if np.linalg.norm(w_raw) <= tols.geom:
        raise DegeneratePositionError("witness point already lies on the target flat")
    w = w_raw / np.linalg.norm(w_raw)
    if basis_a.count:
        w = w - basis_a.vectors.T @ (basis_a.vectors @ w)
        w = w / np.linalg.norm(w)

    lam_full = np.zeros(len(neg_idx))
    lam_full[witness.idx_p] = witness.lam
    mu_full = np.zeros(len(pos_idx))
    mu_full[witness.idx_q] = witness.mu
    return _finish_single(prob, ps, keep, planes, basis_a, w, (lam_full, mu_full),
                          tols, witness_idx=star_idx)


def _intersection_point(f1: Flat, f2: Flat, tols: Tolerances) -> np.ndarray:
    r = None
    from .geometry import intersect_flats

    out = intersect_flats(f1, f2, tols)
    if out is None:
        raise DegeneratePositionError("witness flats do not intersect")
    if isinstance(out, Flat):
        raise DegeneratePositionError("witness flats intersect in a positive-dimensional flat")
    return out


def _finish_single(prob, ps, keep, planes, basis_a, w, cert, tols,
                   witness_idx=None):
    basis = OrthoBasis(w[None, :])
    projected = ps.with_points(project_points(ps.points, basis))
    pn = projected.side(prob.hidden, -1)
    pp = projected.side(prob.hidden, +1)
    hidden_result = None
    if cert is not None:
        lam_full, mu_full = cert
        x = 0.5 * (lam_full @ pn + mu_full @ pp)
        try:
            check_common_point_certificate(pn, pp, x, lam_full, mu_full,
                                           tol=max(tols.geom, 1e-7))
            hidden_result = SeparationResult(False, point=x, lam=lam_full, mu=mu_full)
        except Exception:
            hidden_result = None
    if hidden_result is None:
        hidden_result = linear_separability(pn, pp, tols=tols)
        if hidden_result.separable:
            raise DegeneratePositionError(
                "projected hidden property is unexpectedly still strictly separable"
            )
    residual = float(np.abs(basis_a.vectors @ w).max()) if basis_a.count else 0.0
    keep_results = _keep_certificates(projected, keep, planes, tols)
    return ProjectionOutcome(basis, projected, hidden_result, keep_results,
                             planes, residual, witness=witness_idx)


# ---------------------------------------------------------------------------
# degeneracy-removing perturbation


def general_position_violations(points: np.ndarray, subset_size: int,
                                tols: Tolerances = DEFAULT_TOLS,
                                max_subsets: int = 200000):
    """Subsets (of the given size) whose affine rank falls below the generic
    value min(subset_size - 1, ambient dim), i.e. the subset sits on a common
    lower-dimensional flat.  Returns a list of index tuples (empty = generic)."""
    n = points.shape[0]
    if subset_size > n:
        return []
    idx = list(combinations(range(n), subset_size))
    if len(idx) > max_subsets:
        raise DegeneratePositionError(
            f"general-position check over {len(idx)} subsets exceeds the cap"
        )
    arr = np.array(idx)
    diffs = points[arr[:, 1:]] - points[arr[:, :1]]
    sv = np.linalg.svd(diffs, compute_uv=False)
    scale = max(1.0, float(np.abs(points).max()))
    # generic affine rank of s points in dim-space is min(s-1, dim); flag any
    # subset falling below it (all points on a common lower-dim flat)
    generic = min(subset_size - 1, points.shape[1])
    bad = sv[:, generic - 1] <= tols.rank * scale
    return [tuple(t) for t in arr[bad]]


def _pad_selection(act_p, act_q, Pf, Qf, need, anchor, anchor_locked):
    """Extend the active index sets to exactly ``need`` points, preferring
    points that grow the affine rank of the selection.

    When the anchor's coefficient consumes its side's whole mass, that side
    cannot receive extra points (they could not be made strictly positive),
    so padding draws from the other side only."""
    sel_p = list(act_p)
    sel_q = list(act_q)

    def current_rank():
        pts = np.vstack([Pf[sel_p], Qf[sel_q]]) if sel_q else Pf[sel_p]
        return affine_rank(pts)

    pool = [(1, j) for j in range(len(Qf)) if j not in sel_q]
    pool += [(0, i) for i in range(len(Pf)) if i not in sel_p]
    if anchor_locked:
        pool = [(s, i) for s, i in pool if s != anchor[0]]
    for choosy in (True, False):
        for side_, idx in pool:
            if len(sel_p) + len(sel_q) >= need:
                break
            tgt = sel_p if side_ == 0 else sel_q
            if idx in tgt:
                continue
            before = current_rank()
            tgt.append(idx)
            if choosy and current_rank() == before:
                tgt.pop()
    if len(sel_p) + len(sel_q) < need:
        raise TooFewPointsError(
            f"need {need} points to span the space, usable pool exhausted"
        )
    return sorted(sel_p), sorted(sel_q)


def perturb_general_position(P, Q, w, eps_perturb: float = 1e-6,
                             retries: int = 40,
                             tols: Tolerances = DEFAULT_TOLS):
    """Perturb a projection direction so the projected sets are not linearly
    separable at all and carry no hyperplane-degenerate (d+1)-subset.

    The projected hulls must already intersect.  The perturbation moves the
    convex-combination certificate to strictly positive coefficients on d+1
    points while keeping one distinguished coefficient fixed, then re-aims the
    projection at the point realizing the perturbed combination.  Returns
    (w_new, info dict).
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    w = np.asarray(w, dtype=float)
    w = w / np.linalg.norm(w)
    d = P.shape[1]
    n, m = P.shape[0], Q.shape[0]
    if n + m < d + 1:
        raise TooFewPointsError("the two sets together must span the space")

    Z = complement_basis(OrthoBasis(w[None, :]), tols)

    def flat_coords(X, direction):
        Zb = complement_basis(OrthoBasis(direction[None, :]), tols)
        Xp = project_points(X, OrthoBasis(direction[None, :]))
        return Xp @ Zb.vectors.T, Zb

    Pf, _ = flat_coords(P, w)
    Qf, _ = flat_coords(Q, w)
    try:
        x0, lam0, mu0 = common_point(Pf, Qf, tols)
    except ActuallySeparableError as exc:
        raise NotIntersectingError("projected hulls do not intersect") from exc
    witness = kirchberger_reduce(Pf, Qf, x0, lam0, mu0, tols)

    lam = np.zeros(n)
    lam[witness.idx_p] = witness.lam
    mu = np.zeros(m)
    mu[witness.idx_q] = witness.mu
    act_p = [int(i) for i in witness.idx_p]
    act_q = [int(j) for j in witness.idx_q]

    # anchor: any support point works; mid-mass anchors leave the most room
    # for making every other selected coefficient strictly positive
    anchors = [(0, i, lam[i]) for i in act_p] + [(1, j, mu[j]) for j in act_q]
    anchors.sort(key=lambda t: (abs(t[2] - 0.5), t[0], t[1]))

    last_err = "exhausted retries"
    for side_a, idx_a, coeff_a in anchors:
        locked = coeff_a >= 1.0 - 1e-12
        try:
            sel_p, sel_q = _pad_selection(act_p, act_q, Pf, Qf, d + 1,
                                          (side_a, idx_a), locked)
        except TooFewPointsError as exc:
            last_err = str(exc)
            continue
        info = {"selected_p": sel_p, "selected_q": sel_q,
                "anchor": (side_a, idx_a)}
        delta = 1.0
        for attempt in range(retries):
            try:
                w_new = _perturbed_direction(P, Q, w, sel_p, sel_q, lam, mu,
                                             (side_a, idx_a), delta, tols)
            except DegeneratePositionError as exc:
                last_err = str(exc)
                delta *= 0.5
                continue
            dist = min(np.linalg.norm(w_new - w), np.linalg.norm(w_new + w))
            if dist > eps_perturb:
                delta *= 0.5
                continue
            both = np.vstack([P, Q])
            proj = project_points(both, OrthoBasis(w_new[None, :]))
            Zb = complement_basis(OrthoBasis(w_new[None, :]), tols)
            flat = proj @ Zb.vectors.T
            if weak_separator(flat[:n], flat[n:], tols) is not None:
                last_err = "projection still weakly separable"
                delta *= 0.5
                continue
            if general_position_violations(flat, d + 1, tols):
                last_err = "projected points still hyperplane-degenerate"
                delta *= 0.5
                continue
            info.update({"delta": delta, "distance": dist, "attempts": attempt + 1})
            return w_new, info
    raise DegeneratePositionError(f"perturbation failed: {last_err}")


def _perturbed_direction(P, Q, w, sel_p, sel_q, lam, mu, anchor, delta, tols):
    """Apply the coefficient perturbation at scale ``delta`` and re-aim the
    projection at the point realizing the perturbed combination."""
    basis_w = OrthoBasis(w[None, :])
    Zb = complement_basis(basis_w, tols)
    Pf = project_points(P, basis_w) @ Zb.vectors.T
    Qf = project_points(Q, basis_w) @ Zb.vectors.T
    side_a, idx_a = anchor
    coeff_a = lam[idx_a] if side_a == 0 else mu[idx_a]
    anchor_flat = Pf[idx_a] if side_a == 0 else Qf[idx_a]
    anchor_orig = P[idx_a] if side_a == 0 else Q[idx_a]

    lam_new = {i: lam[i] for i in sel_p}
    mu_new = {j: mu[j] for j in sel_q}
    a_side_new = lam_new if side_a == 0 else mu_new
    b_side_new = mu_new if side_a == 0 else lam_new
    others = [i for i in a_side_new if i != idx_a]
    if others:
        rest = 1.0 - coeff_a
        for i in others:
            a_side_new[i] = (1.0 - delta) * a_side_new[i] + delta * rest / len(others)
    for j in b_side_new:
        b_side_new[j] = (1.0 - delta) * b_side_new[j] + delta / len(b_side_new)

    # barycentric system: every selected point except the anchor
    sys_flat, sys_orig = [], []
    for i in sel_p:
        if not (side_a == 0 and i == idx_a):
            sys_flat.append(Pf[i])
            sys_orig.append(P[i])
    for j in sel_q:
        if not (side_a == 1 and j == idx_a):
            sys_flat.append(Qf[j])
            sys_orig.append(Q[j])
    S_flat = np.array(sys_flat)
    S_orig = np.array(sys_orig)
    if affine_rank(S_flat, tols) < len(S_flat) - 1:
        raise DegeneratePositionError("barycentric reference points are degenerate")

    target_p = sum(lam_new[i] * Pf[i] for i in sel_p)
    target_q = sum(mu_new[j] * Qf[j] for j in sel_q)
    target_own = target_p if side_a == 0 else target_q
    target_other = target_q if side_a == 0 else target_p
    c_anchor = barycentric_coords(anchor_flat, S_flat, tols)
    c_own = barycentric_coords(target_own, S_flat, tols)
    c_other = barycentric_coords(target_other, S_flat, tols)
    c_star = c_anchor + (c_other - c_own) / coeff_a
    p_star = c_star @ S_orig
    w_raw = anchor_orig - p_star
    norm = np.linalg.norm(w_raw)
    if norm <= tols.rank:
        raise DegeneratePositionError("perturbed direction collapsed to zero")
    w_new = w_raw / norm
    if w_new @ w < 0:
        w_new = -w_new
    return w_new


# ---------------------------------------------------------------------------
# generic predicate driver


@dataclass
class SeparabilityPredicate:
    """A separability decision procedure with a small-witness extractor.

    ``holds(P, Q) -> (flag, evidence)`` and
    ``witness(P, Q) -> (idx_p, idx_q)`` for inputs where the predicate fails.
    """

    name: str
    holds: Callable
    witness: Callable


def one_infty_predicate(tols: Tolerances = DEFAULT_TOLS) -> SeparabilityPredicate:
    def holds(P, Q):
        flag, p_idx, q_idx = one_infty_separable(P, Q, tols)
        return flag, (p_idx, q_idx)

    def witness(P, Q):
        flag, p_idx, q_idx = one_infty_separable(P, Q, tols)
        if flag:
            raise ActuallySeparableError("predicate holds; no witness exists")
        return one_infty_witness(P, Q, p_idx, q_idx, tols)

    return SeparabilityPredicate("1,inf", holds, witness)


def bc_predicate(b: int, c: int, max_points: int = 14, witness_cap: int = 12,
                 tols: Tolerances = DEFAULT_TOLS) -> SeparabilityPredicate:
    def holds(P, Q):
        return bc_separable_bruteforce(P, Q, b, c, max_points=max_points, tols=tols)

    def witness(P, Q):
        P = np.asarray(P, dtype=float)
        Q = np.asarray(Q, dtype=float)
        for total in range(2, witness_cap + 1):
            for np_ in range(1, total):
                nq = total - np_
                if np_ > len(P) or nq > len(Q):
                    continue
                for ip in combinations(range(len(P)), np_):
                    for iq in combinations(range(len(Q)), nq):
                        flag, _ = bc_separable_bruteforce(
                            P[list(ip)], Q[list(iq)], b, c,
                            max_points=max_points, tols=tols)
                        if not flag:
                            return np.array(ip), np.array(iq)
        raise WitnessSearchExceededError(
            f"no non-separable subset of at most {witness_cap} points found"
        )

    return SeparabilityPredicate(f"{b},{c}", holds, witness)


def linear_predicate(tols: Tolerances = DEFAULT_TOLS) -> SeparabilityPredicate:
    def holds(P, Q):
        res = linear_separability(P, Q, tols=tols)
        return (res.separable and res.strict), res

    def witness(P, Q):
        P = np.asarray(P, dtype=float)
        Q = np.asarray(Q, dtype=float)
        x, lam, mu = common_point(P, Q, tols)
        wit = kirchberger_reduce(P, Q, x, lam, mu, tols)
        return wit.idx_p, wit.idx_q

    return SeparabilityPredicate("1,1", holds, witness)


def multi_projection_driver(prob: SynthesisProblem,
                            predicate: SeparabilityPredicate,
                            tols: Tolerances = DEFAULT_TOLS):
    """Eliminate a well-behaved separability predicate for the hidden property
    with few separation-preserving projections, or certify impossibility.

    If the predicate survives the full orthogonal projection onto the span of
    the keep normals, no sequence of separation-preserving projections can
    remove it and an ImpossibleOutcome carries the evidence.  Otherwise a
    failure witness is extracted there; projecting out the witness directions
    orthogonal to the span transfers the failure to the projected data.  The
    emitted basis size never exceeds min(|witness| - k, d - k + 1).
    """
    ps, keep, planes, normals, basis_a = _resolve_problem(prob, tols)
    hidden = prob.hidden
    k = ps.k
    d = ps.d
    side = _side_coordinates(ps, planes, keep)
    neg_idx = ps.side_indices(hidden, -1)
    pos_idx = ps.side_indices(hidden, +1)
    q_neg = side[neg_idx]
    q_pos = side[pos_idx]

    flag, evidence = predicate.holds(q_neg, q_pos)
    if flag:
        return ImpossibleOutcome(
            f"predicate {predicate.name} holds on the projection onto the "
            "keep-normal span; separation-preserving projections cannot "
            "eliminate it",
            evidence, (q_neg, q_pos), planes,
        )

    idx_p, idx_q = predicate.witness(q_neg, q_pos)
    star_idx = np.concatenate([neg_idx[idx_p], pos_idx[idx_q]])
    witness_size = len(star_idx)
    star_pts = ps.points[star_idx]
    a_perp = complement_basis(basis_a, tols) if basis_a.count else OrthoBasis(np.eye(d))

    basis = None
    if witness_size >= 2:
        try:
            span_b = orthonormalize(star_pts[1:] - star_pts[0], tols)
            cand = subspace_intersection(span_b, a_perp, tols)
            if cand.count <= min(witness_size - k, d - k + 1):
                basis = cand
        except Exception:
            basis = None
    else:
        basis = OrthoBasis.empty(d)

    def attempt(candidate: OrthoBasis):
        projected = ps.with_points(project_points(ps.points, candidate))
        fl, _ = predicate.holds(projected.side(hidden, -1), projected.side(hidden, +1))
        return (None if fl else projected)

    projected = attempt(basis) if basis is not None else None
    if projected is None:
        # fall back to projecting fully onto the keep-normal span
        basis = a_perp
        projected = attempt(basis)
        if projected is None:
            raise DegeneratePositionError(
                "predicate survived even the full projection onto the span; "
                "evidence and witness disagree"
            )
    _, fail_evidence = predicate.holds(projected.side(hidden, -1),
                                       projected.side(hidden, +1))
    residual = float(np.abs(basis_a.vectors @ basis.vectors.T).max()) \
        if basis_a.count and basis.count else 0.0
    keep_results = _keep_certificates(projected, keep, planes, tols) if basis.count else {}
    hidden_result = linear_separability(projected.side(hidden, -1),
                                        projected.side(hidden, +1), tols=tols)
    return ProjectionOutcome(basis, projected, hidden_result, keep_results,
                             planes, residual, witness=star_idx,
                             evidence=fail_evidence)


# ---------------------------------------------------------------------------
# verification report


@dataclass
class PropertyCheck:
    prop: int
    strict: bool
    weak: bool
    margin: float | None
    result: SeparationResult


@dataclass
class ProjectionReport:
    properties: list[PropertyCheck]
    preserving_residual: float
    basis: OrthoBasis

    def property_check(self, prop: int) -> PropertyCheck:
        return next(c for c in self.properties if c.prop == prop)


def verify_after_projection(ps: LabeledPointSet, basis: OrthoBasis,
                            keep_planes: dict[int, Hyperplane] | None = None,
                            tols: Tolerances = DEFAULT_TOLS) -> ProjectionReport:
    """Re-derive the separability state of every property on the projected
    data, with certificates, margins, and the orthogonality residuals of the
    basis against the keep-plane normals."""
    projected = ps.with_points(project_points(ps.points, basis)) if basis.count else ps
    checks = []
    for i in range(ps.k):
        pn = projected.side(i, -1)
        pp = projected.side(i, +1)
        res = linear_separability(pn, pp, strict=False, tols=tols)
        strict = res.separable and res.strict
        weak = res.separable
        margin = res.margin if res.separable else None
        checks.append(PropertyCheck(i, strict, weak, margin, res))
    residual = 0.0
    if keep_planes and basis.count:
        normals = np.array([h.normal for h in keep_planes.values()])
        residual = float(np.abs(normals @ basis.vectors.T).max())
    return ProjectionReport(checks, residual, basis)
