import math

import numpy as np
import pytest

from conftest import CASES, random_pair, random_unit_pair
from dqproj.dq import DualQuaternion
from dqproj.projection import (Candidate, NonFinite, ProjectionCase,
                               build_quartic, candidate_from_root, classify,
                               dependence_ratio, kkt_residual, oracle_project,
                               project, project_dependent, project_dual_zero,
                               project_independent, project_std_zero,
                               project_vectors, unit_orthogonal_to)

E1 = np.array([1.0, 0.0, 0.0, 0.0])
Z4 = np.zeros(4)


def objective(std, dual, qs, qd):
    return 0.5 * float((qs - std) @ (qs - std)) + 0.5 * float((qd - dual) @ (qd - dual))


class TestClassify:
    def test_examples(self):
        assert classify(Z4, E1) is ProjectionCase.STD_ZERO
        assert classify(E1, 2 * E1) is ProjectionCase.DEPENDENT
        assert classify(E1, [0, 1, 0, 0]) is ProjectionCase.INDEPENDENT
        assert classify(E1, Z4) is ProjectionCase.DUAL_ZERO
        assert classify(Z4, Z4) is ProjectionCase.STD_ZERO

    def test_non_finite(self):
        with pytest.raises(NonFinite):
            classify([np.nan, 0, 0, 0], E1)
        with pytest.raises(NonFinite):
            project_vectors(E1, [np.inf, 0, 0, 0])

    def test_near_zero_scale_aware(self):
        assert classify([1e-15, 0, 0, 0], E1) is ProjectionCase.STD_ZERO
        assert classify([1e-15, 0, 0, 0], 1e-15 * E1) is ProjectionCase.STD_ZERO


class TestStdZeroCase:
    def test_zero_dual(self):
        res = project_vectors(Z4, Z4)
        assert np.array_equal(res.q.std.to_array(), E1)
        assert np.array_equal(res.q.dual.to_array(), Z4)
        assert res.best.objective == pytest.approx(0.5, abs=1e-15)

    def test_axis_dual(self):
        ad = np.array([0.0, 0.0, 0.0, 2.0])
        res = project_vectors(Z4, ad)
        assert np.array_equal(res.q.dual.to_array(), ad)
        qs = res.q.std.to_array()
        assert abs(qs @ qs - 1.0) <= 1e-15
        assert abs(qs @ ad) <= 1e-13

    def test_generic_dual_matches_gram_schmidt(self):
        ad = np.array([1.0, 1.0, 1.0, 1.0])
        res = project_vectors(Z4, ad)
        qs = res.q.std.to_array()
        # independent orthonormal completion of e1 against ad
        n = ad / np.linalg.norm(ad)
        u = np.array([1.0, 0, 0, 0]) - (np.array([1.0, 0, 0, 0]) @ n) * n
        u /= np.linalg.norm(u)
        assert np.max(np.abs(qs - u)) <= 1e-12
        assert abs(qs @ ad) <= 1e-13
        assert np.array_equal(res.q.dual.to_array(), ad)

    def test_dual_part_unchanged_bitwise(self, rng):
        for _ in range(50):
            ad = rng.standard_normal(4) * 10 ** rng.uniform(-2, 2)
            res = project_vectors(Z4, ad)
            assert np.array_equal(res.q.dual.to_array(), ad)
            assert res.case is ProjectionCase.STD_ZERO


class TestDualZeroCase:
    def test_axis(self):
        res = project_vectors(2 * E1, Z4)
        assert np.array_equal(res.q.std.to_array(), E1)
        assert np.array_equal(res.q.dual.to_array(), Z4)

    def test_radial(self):
        res = project_vectors([3.0, 4.0, 0.0, 0.0], Z4)
        assert np.allclose(res.q.std.to_array(), [0.6, 0.8, 0, 0], atol=1e-15)

    def test_scale_invariance(self, rng):
        for _ in range(30):
            std = rng.standard_normal(4)
            c = 10 ** rng.uniform(-3, 3)
            a = project_vectors(std, Z4).q.std.to_array()
            b = project_vectors(c * std, Z4).q.std.to_array()
            assert np.max(np.abs(a - b)) <= 1e-14


class TestDependentCase:
    def test_family_inadmissible(self):
        # std = 2 * dual: only the two radial candidates are feasible
        std = np.array([1.0, 0, 0, 0])
        dual = np.array([0.5, 0, 0, 0])
        res = project_vectors(std, dual)
        assert res.case is ProjectionCase.DEPENDENT
        assert res.best.objective == pytest.approx(0.125, abs=1e-12)
        assert np.allclose(res.q.std.to_array(), E1, atol=1e-12)
        assert np.allclose(res.q.dual.to_array(), Z4, atol=1e-12)
        flagged = [c for c in res.candidates if not c.feasible]
        assert any(c.origin == "tangent-family-inadmissible" for c in flagged)
        ob = oracle_project(std, dual, samples=50_000, seed=5)
        assert res.best.objective <= ob.objective + 1e-8

    def test_family_wins(self):
        std = np.array([0.5, 0, 0, 0])
        dual = np.array([1.0, 0, 0, 0])
        res = project_vectors(std, dual)
        assert res.best.objective == pytest.approx(0.5, abs=1e-12)
        radial = [c for c in res.candidates if c.origin == "parallel+"]
        assert radial[0].objective == pytest.approx(0.625, abs=1e-12)
        ob = oracle_project(std, dual, samples=50_000, seed=6)
        assert res.best.objective <= ob.objective + 1e-8

    def test_boundary_ratio(self):
        std = np.array([1.0, 0, 0, 0])
        dual = np.array([1.0, 0, 0, 0])
        res = project_vectors(std, dual)
        assert res.best.objective == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(res.q.std.to_array(), E1, atol=1e-10)
        assert np.allclose(res.q.dual.to_array(), Z4, atol=1e-10)
        ob = oracle_project(std, dual, samples=50_000, seed=7)
        assert res.best.objective <= ob.objective + 1e-8

    def test_ledger_complete(self, rng):
        for _ in range(30):
            dual = rng.standard_normal(4)
            std = rng.uniform(-2, 2) * dual
            cands = project_dependent(std, dual)
            assert len(cands) >= 3
            assert sum(c.feasible for c in cands) >= 2
            for c in cands:
                if c.feasible:
                    assert c.objective == pytest.approx(
                        objective(std, dual, c.qs, c.qd), abs=1e-12)

    def test_dependence_ratio(self, rng):
        dual = rng.standard_normal(4)
        k = -1.37
        assert dependence_ratio(k * dual, dual) == pytest.approx(k, rel=1e-12)


class TestQuartic:
    def test_orthonormal_pair(self):
        c = build_quartic(E1, [0, 1, 0, 0])
        assert np.allclose(c, [0, 0, 0, 0, -1], atol=1e-15)

    def test_scaled_pair(self):
        c = build_quartic(2 * E1, [0, 1, 0, 0])
        assert np.allclose(c, [0, 0, -3, 0, -1], atol=1e-15)

    def test_sign_symmetry(self, rng):
        # negating the dual part mirrors the polynomial in mu
        for _ in range(30):
            std = rng.standard_normal(4)
            dual = rng.standard_normal(4)
            c = build_quartic(std, dual)
            cneg = build_quartic(std, -dual)
            mirrored = c * np.array([1.0, -1.0, 1.0, -1.0, 1.0])
            assert np.allclose(cneg, mirrored, rtol=1e-13, atol=1e-13)


class TestRootRecovery:
    def test_zero_root_fixed_point(self):
        cand = candidate_from_root(E1, [0, 1, 0, 0], 0.0)
        assert cand.feasible
        assert np.array_equal(cand.qs, E1)
        assert np.array_equal(cand.qd, [0, 1, 0, 0])
        assert cand.objective == 0.0

    def test_double_zero_root(self):
        std = 2 * E1
        dual = np.array([0.0, 1.0, 0.0, 0.0])
        res = project_vectors(std, dual)
        assert res.best.objective == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(res.q.std.to_array(), E1, atol=1e-12)
        assert np.allclose(res.q.dual.to_array(), dual, atol=1e-12)

    def test_feasible_candidates_satisfy_stationarity(self, rng):
        for _ in range(100):
            std, dual = random_pair(rng, "Independent")
            for c in project_independent(std, dual):
                if c.feasible:
                    assert c.kkt_residual <= 1e-8


class TestProject:
    def test_unit_fixed_point(self, rng):
        for _ in range(100):
            qs, qd = random_unit_pair(rng)
            res = project_vectors(qs, qd)
            out = res.q.to_vec8()
            assert np.max(np.abs(out - np.concatenate([qs, qd]))) <= 1e-12
            assert res.dist_2r <= 1e-12

    def test_idempotent(self, rng):
        for _ in range(300):
            std, dual = random_pair(rng)
            first = project_vectors(std, dual).q.to_vec8()
            second = project_vectors(first[:4], first[4:]).q.to_vec8()
            assert np.max(np.abs(second - first)) <= 1e-12

    def test_feasibility(self, rng):
        for _ in range(1000):
            std, dual = random_pair(rng)
            res = project_vectors(std, dual)
            assert res.e_r <= 1e-10
            assert res.e_o <= 1e-10
            assert res.best.objective == pytest.approx(
                min(c.objective for c in res.candidates if c.feasible), abs=0)

    def test_dual_quaternion_interface(self):
        dq = DualQuaternion.from_vectors(2 * E1, Z4)
        res = project(dq)
        assert res.q == DualQuaternion.identity()
        assert res.dist_2r == pytest.approx(1.0, abs=1e-15)

    def test_dist_matches_norm(self, rng):
        std, dual = random_pair(rng)
        res = project_vectors(std, dual)
        diff = res.q - DualQuaternion.from_vectors(std, dual)
        assert res.dist_2r == pytest.approx(diff.norm_2r(), abs=1e-12)

    def test_dominates_random_feasible_points(self, rng):
        for _ in range(10):
            std, dual = random_pair(rng)
            res = project_vectors(std, dual)
            for _ in range(1000):
                qs, qd = random_unit_pair(rng)
                assert res.best.objective <= objective(std, dual, qs, qd) + 1e-10

    def test_zero_root_only_when_parts_orthogonal(self, rng):
        for _ in range(200):
            std, dual = random_pair(rng, "Independent")
            res = project_vectors(std, dual)
            if any(c.origin == "root-zero" for c in res.candidates):
                ns = np.linalg.norm(std)
                nd = np.linalg.norm(dual)
                assert abs(std @ dual) <= 1e-6 * ns * nd


class TestKktResidual:
    def test_closed_form_radial(self):
        std = np.array([3.0, 4.0, 0.0, 0.0])
        qs = std / 5.0
        lam = (5.0 - 1.0) / 2.0
        assert kkt_residual(std, Z4, qs, Z4, lam, 0.0) <= 1e-14

    def test_sensitive_to_perturbation(self):
        std = np.array([3.0, 4.0, 0.0, 0.0])
        qs = std / 5.0 + np.array([1e-3, 0, 0, 0])
        lam = (5.0 - 1.0) / 2.0
        assert kkt_residual(std, Z4, qs, Z4, lam, 0.0) > 1e-4

    def test_returned_solutions(self, rng):
        for _ in range(200):
            std, dual = random_pair(rng)
            res = project_vectors(std, dual)
            assert res.best.kkt_residual <= 1e-8
            back = kkt_residual(std, dual, res.best.qs, res.best.qd,
                                res.best.lam, res.best.mu)
            assert back == pytest.approx(res.best.kkt_residual, abs=1e-15)


class TestOracle:
    def test_known_closed_form(self):
        ob = oracle_project(2 * E1, Z4, samples=50_000, seed=3)
        assert np.max(np.abs(ob.qs - E1)) <= 1e-6
        assert ob.objective == pytest.approx(0.5, abs=1e-9)

    def test_upper_bounds_algorithm(self, rng):
        for i in range(50):
            std, dual = random_pair(rng)
            res = project_vectors(std, dual)
            ob = oracle_project(std, dual, samples=20_000, seed=i)
            assert ob.objective >= res.best.objective - 1e-8

    def test_algorithm_matches_oracle(self, rng):
        for i in range(60):
            std, dual = random_pair(rng, "Independent", log_scale=(-1.5, 1.5))
            res = project_vectors(std, dual)
            ob = oracle_project(std, dual, samples=50_000, seed=1000 + i)
            assert res.best.objective <= ob.objective + 1e-8

    def test_deterministic(self):
        a = oracle_project([1.0, 2, 3, 4], [4.0, 3, 2, 1], samples=20_000, seed=9)
        b = oracle_project([1.0, 2, 3, 4], [4.0, 3, 2, 1], samples=20_000, seed=9)
        assert np.array_equal(a.qs, b.qs)
        assert a.objective == b.objective

    def test_rejects_tiny_sample_counts(self):
        with pytest.raises(ValueError):
            oracle_project(E1, Z4, samples=100, seed=0)

    def test_result_always_feasible(self, rng):
        std, dual = random_pair(rng)
        ob = oracle_project(std, dual, samples=20_000, seed=4)
        assert abs(ob.qs @ ob.qs - 1.0) <= 1e-12
        assert abs(ob.qs @ ob.qd) <= 1e-12


class TestHelpers:
    def test_unit_orthogonal(self, rng):
        for _ in range(100):
            v = rng.standard_normal(4) * 10 ** rng.uniform(-3, 3)
            u = unit_orthogonal_to(v)
            assert abs(u @ u - 1.0) <= 1e-14
            assert abs(u @ v) <= 1e-12 * (1 + np.linalg.norm(v))
        assert np.array_equal(unit_orthogonal_to(Z4), E1)

    def test_case_labels(self):
        assert {c.value for c in ProjectionCase} == set(CASES)

    def test_candidate_is_frozen(self):
        cand = candidate_from_root(E1, [0, 1, 0, 0], 0.0)
        assert isinstance(cand, Candidate)
        with pytest.raises(AttributeError):
            cand.mu = 1.0


class TestDependenceBoundary:
    def test_sweep_continuity(self, rng):
        # push inputs from exact dependence through growing defects and
        # require the objective to track the oracle with no branch jump
        dual = np.array([0.9, -0.4, 0.3, 0.1])
        nd = np.linalg.norm(dual)
        w = unit_orthogonal_to(dual)
        for k in (0.35 * nd, 1.4 * nd):
            base = k * dual / nd
            prev = None
            for defect in [0.0] + list(np.logspace(-15, -6, 10)):
                std = base + math.sqrt(defect) * np.linalg.norm(base) * w
                res = project_vectors(std, dual)
                ob = oracle_project(std, dual, samples=50_000, seed=11)
                assert res.best.objective <= ob.objective + 1e-8
                assert abs(res.best.objective - ob.objective) <= 1e-6
                if prev is not None:
                    assert abs(res.best.objective - prev) <= 1e-5
                prev = res.best.objective
