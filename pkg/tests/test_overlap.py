import numpy as np
import pytest

from sepproj.data import LabeledPointSet
from sepproj.errors import BadParamsError, EmptySubspaceError
from sepproj.geometry import OrthoBasis, orthonormalize, project_points
from sepproj.overlap import (
    OverlapSpec,
    f_value,
    g_interval,
    g_svm,
    maximize_overlap,
    min_overlap,
    separability_feasibility,
)
from sepproj.constructions import gen_cube_two_maxima


def _labeled(points, labels):
    return LabeledPointSet(np.asarray(points, dtype=float),
                           np.asarray(labels)[None, :])


def _svm_reference(ps, v, b, lam, hidden=0):
    """Straight transcription of the objective, kept independent on purpose."""
    total = 0.0
    y = ps.labels[hidden]
    for i in range(ps.n):
        margin = 1.0 - y[i] * (float(np.dot(v, ps.points[i])) - b)
        total += max(0.0, margin)
    return lam * float(np.dot(v, v)) + total / ps.n


class TestIntervalScore:
    def test_disjoint(self):
        ps = _labeled([[-2.0], [2.0]], [-1, 1])
        assert g_interval(ps, np.array([1.0])) == 0.0

    def test_interleaved(self):
        ps = _labeled([[0.0], [2.0], [1.0], [3.0]], [-1, -1, 1, 1])
        assert g_interval(ps, np.array([1.0])) == pytest.approx(1.0)

    def test_matches_bruteforce_recomputation(self):
        rng = np.random.default_rng(0)
        for _ in range(40):
            n, d = 10, 4
            pts = rng.normal(size=(n, d))
            labels = rng.choice([-1, 1], size=n)
            labels[0], labels[1] = -1, 1
            ps = _labeled(pts, labels)
            v = rng.normal(size=d)
            v /= np.linalg.norm(v)
            sn = sorted(float(v @ p) for p, l in zip(pts, labels) if l < 0)
            sp = sorted(float(v @ p) for p, l in zip(pts, labels) if l > 0)
            expect = max(0.0, min(sn[-1], sp[-1]) - max(sn[0], sp[0]))
            assert g_interval(ps, v) == pytest.approx(expect, abs=1e-12)

    def test_sign_symmetry(self):
        rng = np.random.default_rng(1)
        pts = rng.normal(size=(8, 3))
        labels = np.array([-1, -1, -1, 1, 1, 1, 1, -1])
        ps = _labeled(pts, labels)
        v = rng.normal(size=3)
        assert g_interval(ps, v) == g_interval(ps, -v)


class TestSvmScore:
    def test_wide_margin_tiny_lambda(self):
        ps = _labeled([[-2.0], [2.0]], [-1, 1])
        val = g_svm(ps, np.array([1.0]), 0.0, 1e-12)
        assert val == pytest.approx(1e-12, abs=1e-15)

    def test_zero_vector_all_hinges_one(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(7, 3))
        labels = rng.choice([-1, 1], size=7)
        labels[:2] = [-1, 1]
        ps = _labeled(pts, labels)
        assert g_svm(ps, np.zeros(3), 0.0, 5.0) == pytest.approx(1.0)

    def test_matches_independent_evaluator_on_cube(self):
        ps = gen_cube_two_maxima(0.2)
        rng = np.random.default_rng(3)
        for _ in range(50):
            v = rng.normal(size=3)
            b = rng.normal()
            ours = g_svm(ps, v, b, 10.0)
            ref = _svm_reference(ps, v, b, 10.0)
            assert ours == pytest.approx(ref, abs=1e-12)

    def test_convexity_probe(self):
        rng = np.random.default_rng(4)
        pts = rng.normal(size=(9, 3))
        labels = rng.choice([-1, 1], size=9)
        labels[:2] = [-1, 1]
        ps = _labeled(pts, labels)
        for _ in range(50):
            v1, v2 = rng.normal(size=3), rng.normal(size=3)
            b1, b2 = rng.normal(), rng.normal()
            mid = g_svm(ps, 0.5 * (v1 + v2), 0.5 * (b1 + b2), 2.0)
            avg = 0.5 * (g_svm(ps, v1, b1, 2.0) + g_svm(ps, v2, b2, 2.0))
            assert mid <= avg + 1e-9

    def test_bad_lambda(self):
        with pytest.raises(BadParamsError):
            OverlapSpec(kind="svm", lam=0.0)


class TestMinOverlap:
    def test_svm_separable_data_small_value(self):
        ps = _labeled([[-3.0, 0.0], [3.0, 0.0]], [-1, 1])
        spec = OverlapSpec(kind="svm", lam=1e-6)
        v, b, value, _ = min_overlap(ps, spec)
        assert value <= 1e-4

    def test_interval_one_dimensional_exact(self):
        ps = _labeled([[0.0], [2.0], [1.0], [3.0]], [-1, -1, 1, 1])
        spec = OverlapSpec(kind="interval")
        v, b, value, _ = min_overlap(ps, spec)
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_svm_beats_random_probes(self):
        rng = np.random.default_rng(5)
        for trial in range(5):
            pts = rng.normal(size=(8, 3))
            labels = rng.choice([-1, 1], size=8)
            labels[:2] = [-1, 1]
            ps = _labeled(pts, labels)
            spec = OverlapSpec(kind="svm", lam=0.7)
            _, _, value, _ = min_overlap(ps, spec)
            probes = min(
                g_svm(ps, rng.normal(size=3), rng.normal(), 0.7)
                for _ in range(1000)
            )
            assert value <= probes + 1e-9

    def test_empty_subspace(self):
        ps = _labeled([[0.0], [1.0]], [-1, 1])
        with pytest.raises(EmptySubspaceError):
            min_overlap(ps, OverlapSpec(kind="svm", lam=1.0),
                        OrthoBasis(np.array([[1.0]])))


class TestFValue:
    def test_projectionability_identity_both_kinds(self):
        rng = np.random.default_rng(6)
        for kind in ("interval", "svm"):
            spec = OverlapSpec(kind=kind, lam=3.0)
            for _ in range(30):
                pts = rng.normal(size=(9, 4))
                labels = rng.choice([-1, 1], size=9)
                labels[:2] = [-1, 1]
                ps = _labeled(pts, labels)
                w = rng.normal(size=4)
                w /= np.linalg.norm(w)
                v = rng.normal(size=4)
                v -= (v @ w) * w
                projected = ps.with_points(
                    project_points(ps.points, OrthoBasis(w[None, :])))
                if kind == "interval":
                    a = g_interval(projected, v)
                    bval = g_interval(ps, v)
                else:
                    a = g_svm(projected, v, 0.3, 3.0)
                    bval = g_svm(ps, v, 0.3, 3.0)
                assert abs(a - bval) <= 1e-9

    def test_w_orthogonal_to_data_variation(self):
        # data confined to the xy plane; w = e_z leaves the score minimum alone
        rng = np.random.default_rng(7)
        pts = np.zeros((8, 3))
        pts[:, :2] = rng.normal(size=(8, 2))
        labels = rng.choice([-1, 1], size=8)
        labels[:2] = [-1, 1]
        ps = _labeled(pts, labels)
        spec = OverlapSpec(kind="svm", lam=1.0)
        _, _, global_min, _ = min_overlap(ps, spec)
        fw, _ = f_value(ps, np.array([0.0, 0.0, 1.0]), spec)
        assert fw == pytest.approx(global_min, abs=1e-10)

    def test_sign_symmetry(self):
        ps = gen_cube_two_maxima(0.2)
        spec = OverlapSpec(kind="svm", lam=10.0)
        w = np.array([0.3, 0.9, 1.0])
        w /= np.linalg.norm(w)
        f1, _ = f_value(ps, w, spec)
        f2, _ = f_value(ps, -w, spec)
        assert f1 == pytest.approx(f2, abs=1e-10)

    def test_gradient_matches_finite_differences(self):
        from sepproj.overlap import _svm_outer_gradient, _tangent_basis
        ps = gen_cube_two_maxima(0.2)
        spec = OverlapSpec(kind="svm", lam=10.0)
        rng = np.random.default_rng(8)
        for _ in range(10):
            w = rng.normal(size=3)
            w /= np.linalg.norm(w)
            val, inner = f_value(ps, w, spec)
            grad = _svm_outer_gradient(ps, w, inner, 10.0, 0)
            E = _tangent_basis(w, None)
            for e in E:
                h = 1e-6
                wp = (w + h * e) / np.linalg.norm(w + h * e)
                wm = (w - h * e) / np.linalg.norm(w - h * e)
                fp, _ = f_value(ps, wp, spec)
                fm, _ = f_value(ps, wm, spec)
                fd = (fp - fm) / (2 * h)
                assert abs(fd - grad @ e) <= 5e-5


class TestMaximize:
    def test_constant_landscape_returns_any_direction(self):
        # fully symmetric data: the overlap is direction-independent
        ps = _labeled([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
                      [1, 1, -1, -1])
        spec = OverlapSpec(kind="svm", lam=1.0)
        res = maximize_overlap(ps, spec, starts=4, seed=0)
        vals = [v for _, v in res.finals]
        assert max(vals) - min(vals) <= 1e-8

    def test_monotone_trace(self):
        ps = gen_cube_two_maxima(0.2)
        spec = OverlapSpec(kind="svm", lam=10.0)
        res = maximize_overlap(ps, spec, starts=3, seed=1)
        assert all(b >= a - 1e-15 for a, b in zip(res.trace, res.trace[1:]))

    def test_single_property_single_cluster(self):
        # anisotropic two-signal family: a strict peak at the strong-signal
        # direction, so every start must land in one angular cluster
        for seed in range(4):
            rng = np.random.default_rng([seed, 77])
            n = 12
            y = np.where(np.arange(n) % 2 == 0, 1, -1)
            mean = np.array([1.0, 0.4, 0.0])
            pts = np.outer(y, mean) + 0.5 * rng.normal(size=(n, 3))
            ps = _labeled(pts, y)
            spec = OverlapSpec(kind="svm", lam=0.05)
            res = maximize_overlap(ps, spec, starts=8, seed=seed)
            assert len(res.maxima) == 1
            assert res.maxima[0].size == 8

    def test_deterministic_in_seed(self):
        ps = gen_cube_two_maxima(0.2)
        spec = OverlapSpec(kind="svm", lam=10.0)
        r1 = maximize_overlap(ps, spec, starts=3, seed=42)
        r2 = maximize_overlap(ps, spec, starts=3, seed=42)
        assert r1.value == r2.value
        assert np.array_equal(r1.best, r2.best)

    def test_feasibility_oracle_respected(self):
        ps = gen_cube_two_maxima(0.2)
        spec = OverlapSpec(kind="svm", lam=10.0)
        feas = separability_feasibility(ps, keep=(1,), require_hidden_overlap=True)
        res = maximize_overlap(ps, spec, starts=4, seed=3, feasible=feas)
        for w, _ in res.finals:
            assert feas(w)

    def test_constraint_residuals(self):
        rng = np.random.default_rng(10)
        pts = rng.normal(size=(10, 4))
        labels = np.vstack([rng.choice([-1, 1], size=10)])
        labels[0, :2] = [-1, 1]
        ps = LabeledPointSet(pts, labels)
        normal = rng.normal(size=4)
        normal /= np.linalg.norm(normal)
        spec = OverlapSpec(kind="svm", lam=1.0)
        res = maximize_overlap(ps, spec, keep_normals=normal[None, :],
                               starts=4, seed=4)
        for w, _ in res.finals:
            assert abs(w @ normal) <= 1e-10
            assert abs(np.linalg.norm(w) - 1.0) <= 1e-10
