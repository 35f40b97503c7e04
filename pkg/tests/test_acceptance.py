"""Acceptance gate: one test per criterion, each at its stated tolerance and time budget.

``conftest.py`` prints a PASS/FAIL line per criterion at the end of the run.
"""
import time
from functools import lru_cache

import numpy as np
import pytest

from ortho.auerbach import auerbach_basis, biorthogonality_defect, verify_property_star
from ortho.harness import run_suite
from ortho.harness import suites as suites_mod
from ortho.harness.config import ScenarioConfig
from ortho.harness.report import checks_json
from ortho.harness.suites import auerbach_spaces, auerbach_tolerance, perturbation, scaled_isometry
from ortho.normed_space import NormedSpace, basis_vector
from ortho.operators import (LinearOperator, birkhoff_kernel_witness, bounded_below_floor,
                             image_eta, isometry_deviation, isometry_eta_bound,
                             local_preservation_constant, perturbed_eta_bound,
                             preservation_constant, verify_floor)
from ortho.orthogonality import (BIRKHOFF, ROBERTS, chmielinski, chmielinski_defect_batch, dragomir,
                                 dragomir_eps_batch, dual_check, dual_margin, holds, holds_batch,
                                 min_gap_batch, orthogonal_partner, roberts_witness_search,
                                 sample_ortho_pairs)
from oracles import eps_from_alpha, grid_min_gap

BAND = 1e-6
SLACK = 1e-9
L12 = NormedSpace.lp(1, 2)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


@pytest.fixture
def criterion(record_property):
    def tag(number, title):
        record_property("criterion", f"{number}|{title}")
    return tag


# -- shared operator families ----------------------------------------------------------


ISOMETRY_DOMAINS = [NormedSpace.euclidean(2), NormedSpace.euclidean(3), NormedSpace.euclidean(4),
                    NormedSpace.lp(1, 2), NormedSpace.lp(1, 3), NormedSpace.lp(1, 4),
                    NormedSpace.lp(np.inf, 2), NormedSpace.lp(np.inf, 3),
                    NormedSpace.lp(3, 2), NormedSpace.lp(3, 3)]
PERTURB_EPS = (0.05, 0.1, 0.2)
CLAUSE_RELATIONS = [dragomir(b) for b in (0.0, 0.1, 0.3)] + [chmielinski(b) for b in (0.0, 0.1, 0.2)]


def roberts_supported(space):
    return space.is_euclidean or space.dim == 2


@lru_cache(maxsize=None)
def certified_operators():
    """20 scaled isometries and 20 perturbations, each with its deviation profile."""
    rng = np.random.default_rng(np.random.SeedSequence((5, 0)))
    isos, perts = [], []
    for k, scale in enumerate((0.5, 3.0)):
        for space in ISOMETRY_DOMAINS:
            T = scaled_isometry(space, rng, scale)
            isos.append((T, isometry_deviation(T, seed=len(isos))))
    for i, (T, prof) in enumerate(isos):
        e = PERTURB_EPS[i % 3]
        perts.append((T + perturbation(T, rng, e), prof, e))
    return isos, perts


@lru_cache(maxsize=None)
def clause_pairs(space, relation, count=2000):
    return sample_ortho_pairs(space, relation, np.random.SeedSequence((5, 1)), count, tol=0.0)


@lru_cache(maxsize=None)
def rank_deficient_l1():
    """20 singular operators on l_1^n: half kill a basis vector, half a dense vector."""
    rng = np.random.default_rng(np.random.SeedSequence((4, 1)))
    out = []
    for i in range(20):
        n = (2, 3, 4)[i % 3]
        M = rng.uniform(-1, 1, (n, n))
        if i % 2 == 0:
            M[:, rng.integers(n)] = 0.0
        else:
            k = rng.uniform(0.2, 1.0, n) * rng.choice([-1.0, 1.0], n)
            M = M - np.outer(M @ k, k) / (k @ k)
        space = NormedSpace.lp(1, n)
        out.append(LinearOperator(M, space, space))
    return out


# -- 1 ----------------------------------------------------------------------------------


def test_criterion_1_roberts_counterexample(criterion):
    criterion(1, "Roberts counterexample in l1^2")
    with Budget(1.0):
        x = np.array([0.75, -0.25])
        assert roberts_witness_search(L12, x, grid=10 ** 4) is None
        # J(x) is the single functional (1, -1), so x ⊥_B y forces y on the diagonal
        assert L12.support_set(x).vertices.tolist() == [[1.0, -1.0]]
        norms = []
        for s in (1.0, -1.0):
            y = s * np.array([0.5, 0.5])
            assert L12.norm(y) == 1.0
            assert holds(L12, BIRKHOFF, x, y, tol=0.0)
            norms.append((L12.norm(x + y), L12.norm(x - y)))
        assert norms[0] == pytest.approx((1.5, 1.0), abs=1e-12)
        assert norms[1] == pytest.approx((1.0, 1.5), abs=1e-12)


# -- 2 ----------------------------------------------------------------------------------


def independent_unit_pairs(space, rng, n):
    X, Y = space.sample_sphere(rng, n), space.sample_sphere(rng, n)
    for i in range(n):
        while np.linalg.svd(np.vstack([X[i], Y[i]]), compute_uv=False)[-1] < 1e-3:
            Y[i] = space.sample_sphere(rng, 1)[0]
    return X, Y


def test_criterion_2_minimal_constant(criterion):
    criterion(2, "dragomir_eps vs grid oracle and threshold flip")
    with Budget(30.0):
        rng = np.random.default_rng(np.random.SeedSequence((2, 0)))
        checked_flips = 0
        for space in auerbach_spaces():
            X, Y = independent_unit_pairs(space, rng, 100)
            eps = dragomir_eps_batch(space, X, Y)
            oracle = eps_from_alpha(grid_min_gap(space, X, Y), 1.0)
            np.testing.assert_allclose(eps, oracle, rtol=0, atol=1e-6, err_msg=space.describe())
            for x, y, e in zip(X, Y, eps):
                if e + BAND < 1.0:
                    assert holds(space, dragomir(e + BAND), x, y, tol=0.0)
                if e - BAND >= 0.0:
                    assert not holds(space, dragomir(e - BAND), x, y, tol=0.0)
                checked_flips += 1
        assert checked_flips == 1500


# -- 3 ----------------------------------------------------------------------------------


def nonsmooth_points(space, rng, n):
    """Unit points where at least two norming functionals tie."""
    X = space.sample_sphere(rng, n)
    if space.kind == "lp" and space.effective_p == 1:
        for x in X:
            x[rng.choice(space.dim, size=rng.integers(1, space.dim), replace=False)] = 0.0
    elif space.kind == "poly" or (space.kind == "lp" and space.effective_p == np.inf):
        A = space.A if space.kind == "poly" else np.eye(space.dim)
        for x in X:
            v = A @ x
            i, j = np.argsort(-np.abs(v))[:2]
            d = np.sign(v[i]) * A[i] - np.sign(v[j]) * A[j]
            x -= (d @ x) / (d @ d) * d
    else:
        return X
    return X / space.norm(X)[:, None]


def decision_pairs(space, rng, n=1000):
    X = space.sample_sphere(rng, n)
    X[: n // 3] = nonsmooth_points(space, rng, n // 3)
    Y = space.sample_sphere(rng, n)
    half = n // 2
    P = np.array([orthogonal_partner(space, x, z)
                  for x, z in zip(X[:half], rng.standard_normal((half, space.dim)))])
    Y[:half] = P + rng.standard_normal((half, space.dim)) * 10.0 ** rng.uniform(-4, 0, (half, 1))
    return X, Y


def test_criterion_3_dual_characterization(criterion):
    criterion(3, "definitional vs J(x) decisions for B and B^eps")
    with Budget(30.0):
        rng = np.random.default_rng(np.random.SeedSequence((3, 0)))
        relations = [BIRKHOFF] + [chmielinski(e) for e in (0.0, 0.1, 0.5, 0.9)]
        compared = {str(r): [0, 0] for r in relations}
        for space in auerbach_spaces():
            X, Y = decision_pairs(space, rng)
            nx = space.norm(X)
            for rel in relations:
                if rel.tag == "birkhoff":
                    gap = min_gap_batch(space, X, Y)[0] / nx - 1.0
                else:
                    gap = chmielinski_defect_batch(space, X, Y, rel.eps)
                definitional = holds_batch(space, rel, X, Y)
                for x, y, g, d in zip(X, Y, gap, definitional):
                    m = dual_margin(space, rel, x, y)
                    if abs(m) < BAND or -BAND < g < -1e-14:
                        continue
                    assert d == dual_check(space, rel, x, y), (space.describe(), str(rel), x, y)
                    compared[str(rel)][int(d)] += 1
        for rel, (false, true) in compared.items():
            # both decisions are exercised for every relation
            assert false > 100 and true > 100, (rel, false, true)


# -- 4 ----------------------------------------------------------------------------------


def test_criterion_4_injectivity(criterion):
    criterion(4, "full-rank operators preserve, rank-deficient l1 operators give sentinel 1")
    with Budget(120.0):
        rng = np.random.default_rng(np.random.SeedSequence((4, 0)))
        spaces = auerbach_spaces()
        pairs = {}
        for i in range(50):
            dom = spaces[i % len(spaces)]
            same_dim = [s for s in spaces if s.dim == dom.dim]
            cod = same_dim[rng.integers(len(same_dim))]
            while True:
                M = rng.uniform(-1, 1, (dom.dim, dom.dim))
                if abs(np.linalg.det(M)) > 0.05:
                    break
            T = LinearOperator(M, dom, cod)
            if dom not in pairs:
                pairs[dom] = sample_ortho_pairs(dom, BIRKHOFF, np.random.SeedSequence((4, i)), 10 ** 4)
            X, Y = pairs[dom]
            eps, zero = image_eta(T, X, Y)
            assert not zero.any()
            assert np.nanmax(eps) < 1.0, (dom.describe(), cod.describe(), M)

        for T in rank_deficient_l1():
            n = T.domain.dim
            cols = [T.codomain.norm(T(basis_vector(n, j))) for j in range(n)]
            dead = [j for j in range(n) if cols[j] == 0.0]
            if dead:
                a = next(j for j in range(n) if cols[j] > 0.0)
                x, y = basis_vector(n, a), basis_vector(n, a) + basis_vector(n, dead[0])
                rep = local_preservation_constant(T, BIRKHOFF, x, seed=0, count=2000)
                assert rep.eta_hat == 1.0
            else:
                # same device with e_j + e_k replaced by the kernel vector minus its e_i part
                x, y = birkhoff_kernel_witness(T, np.eye(n))
            assert holds(T.domain, BIRKHOFF, x, y, tol=0.0)
            eta, zero = image_eta(T, x, y)
            assert not zero[0] and eta[0] == 1.0, T.matrix


# -- 5 ----------------------------------------------------------------------------------


def clause_etas(T, rel):
    X, Y = clause_pairs(T.domain, rel)
    fwd, zero = image_eta(T, X, Y)
    assert not zero.any()
    out = [float(np.max(fwd))]
    if rel.tag == "roberts":
        out.append(float(np.max(image_eta(T, X, Y, reverse=True)[0])))
    return out


def test_criterion_5_bound_soundness(criterion):
    criterion(5, "isometry and perturbation bounds dominate measured eta")
    with Budget(180.0):
        isos, perts = certified_operators()
        assert len(isos) == 20 and len(perts) == 20
        n_checks = 0
        for T, prof in isos:
            rels = CLAUSE_RELATIONS + ([ROBERTS] if roberts_supported(T.domain) else [])
            for rel in rels:
                bound = isometry_eta_bound(rel, prof.delta1, prof.delta2)
                assert max(clause_etas(T, rel)) <= bound + SLACK, (T.matrix, str(rel))
                n_checks += 1
        for S, prof, e in perts:
            rels = CLAUSE_RELATIONS + ([ROBERTS] if roberts_supported(S.domain) else [])
            for rel in rels:
                bound = perturbed_eta_bound(rel, prof.delta1, prof.delta2, e)
                assert max(clause_etas(S, rel)) <= bound + SLACK, (S.matrix, str(rel), e)
                n_checks += 1
        assert n_checks == 2 * (20 * 6 + 2 * 6)


# -- 6 ----------------------------------------------------------------------------------


def test_criterion_6_euclidean_closed_form(criterion):
    criterion(6, "diag(1, sigma) against (sigma^2 - 1)/(sigma^2 + 1)")
    with Budget(60.0):
        E2 = NormedSpace.euclidean(2)
        for sigma in (1.0, 1.5, 2.0, 5.0):
            T = LinearOperator(np.diag([1.0, sigma]), E2, E2)
            eta = preservation_constant(T, BIRKHOFF, seed=6).eta_hat
            exact = (sigma ** 2 - 1) / (sigma ** 2 + 1)
            assert abs(eta - exact) <= 2e-2, sigma
            if sigma == 1.0:
                assert eta == 0.0


# -- 7 ----------------------------------------------------------------------------------


def test_criterion_7_floor(criterion):
    criterion(7, "bounded-below floor")
    with Budget(30.0):
        assert bounded_below_floor(0.0) == 1.0 / 15.0
        isos, perts = certified_operators()
        for i, (T, prof) in enumerate(isos):
            ok, worst = verify_floor(T, isometry_eta_bound(BIRKHOFF, prof.delta1, prof.delta2), seed=i)
            assert ok, (T.matrix, worst)
        for i, (S, prof, e) in enumerate(perts):
            ok, worst = verify_floor(S, perturbed_eta_bound(BIRKHOFF, prof.delta1, prof.delta2, e), seed=i)
            assert ok, (S.matrix, worst)
        for i, T in enumerate(rank_deficient_l1()):
            for eta in (0.0, 0.5, 0.9):
                ok, worst = verify_floor(T, eta, seed=i)
                assert not ok and worst <= 1e-12, (T.matrix, eta)


# -- 8 ----------------------------------------------------------------------------------


def test_criterion_8_auerbach(criterion):
    criterion(8, "Auerbach bases with property (*)")
    with Budget(60.0):
        for k, space in enumerate(auerbach_spaces()):
            tol = auerbach_tolerance(space)
            b = auerbach_basis(space, seed=k, max_sweeps=50)
            assert b.sweeps <= 50
            assert biorthogonality_defect(space, b) <= tol, space.describe()
            ok, defect = verify_property_star(space, b, seed=k, tol=tol)
            assert ok, (space.describe(), defect)
        b = auerbach_basis(NormedSpace.lp(np.inf, 2), seed=0)
        assert abs(b.det_abs - 2.0) <= 1e-6


# -- 9 ----------------------------------------------------------------------------------


def test_criterion_9_determinism(criterion):
    criterion(9, "suite reruns give identical check records")
    cfg = ScenarioConfig()
    for name in sorted(suites_mod.SUITES):
        # drop cached pair samples so each run recomputes everything
        suites_mod._relation_pairs.cache_clear()
        first = checks_json(run_suite(name, cfg))
        suites_mod._relation_pairs.cache_clear()
        second = checks_json(run_suite(name, cfg))
        assert first == second, name
