import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import chmielinski_defect_grid, dense_grid_min_gap, eps_from_alpha
from ortho.exceptions import ArgumentError, DegenerateError, SamplingExhaustedError, UnsupportedDimensionError
from ortho.normed_space import NormedSpace
from ortho.orthogonality import (BIRKHOFF, ISOSCELES, ROBERTS, UNIT_ISOSCELES, Relation,
                                 beps_to_deps, chmielinski, chmielinski_defect_batch,
                                 dragomir, dragomir_eps, dual_check, dual_margin, holds,
                                 holds_batch, isosceles_pair, min_gap, min_gap_batch,
                                 orthogonal_partner, roberts_witness_search, sample_ortho_pairs)

L1 = NormedSpace.lp(1, 2)
E2 = NormedSpace.euclidean(2)
X0 = np.array([0.75, -0.25])
HEX = NormedSpace.polyhedral([[1, 0], [0, 1], [1, 1]])
KINDS = [NormedSpace.lp(1, 2), NormedSpace.euclidean(2), NormedSpace.lp(3, 2),
         NormedSpace.lp(np.inf, 2), HEX]
KIND_IDS = [s.describe() for s in KINDS]


# -- worked examples ----------------------------------------------------------------


def test_min_gap_examples():
    g = min_gap(E2, [1, 0], np.array([1, 1]) / math.sqrt(2))
    assert g.alpha == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert g.minimizer_lambda == pytest.approx(-1 / math.sqrt(2), abs=1e-9)
    t = np.arange(-2, 2 + 1e-9, 1e-5)
    grid = np.linalg.norm(np.array([1, 0])[None, :] + t[:, None] * np.array([1, 1])[None, :] / math.sqrt(2), axis=1)
    assert g.alpha == pytest.approx(grid.min(), abs=1e-9)

    g = min_gap(L1, X0, [0.5, 0.5])
    assert g.alpha == pytest.approx(1.0, abs=1e-14)
    assert -1.5 - 1e-9 <= g.minimizer_lambda <= 0.5 + 1e-9
    for space in KINDS:
        assert min_gap(space, X0, -X0).alpha == pytest.approx(0.0, abs=1e-12)


def test_min_gap_rejects_zero():
    with pytest.raises(ArgumentError):
        min_gap(L1, [0, 0], [1, 0])
    with pytest.raises(ArgumentError):
        min_gap(L1, [1, 0], [0, 0])


def test_dragomir_eps_examples():
    assert dragomir_eps(E2, [1, 0], np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    for space in KINDS:
        assert dragomir_eps(space, X0, 2 * X0) == 1.0
    assert dragomir_eps(L1, X0, [0.5, 0.5]) == 0.0
    assert dragomir_eps(E2, [1, 0], [0, 3]) == 0.0


def test_holds_examples():
    assert holds(L1, BIRKHOFF, X0, [0.5, 0.5])
    assert not holds(L1, ISOSCELES, X0, [0.5, 0.5])
    assert L1.norm(X0 + [0.5, 0.5]) == 1.5 and L1.norm(X0 - [0.5, 0.5]) == 1.0
    assert holds(NormedSpace.euclidean(3), ROBERTS, [1, 0, 0], [0, 1, 0])
    assert holds(L1, BIRKHOFF, [1, 0], [0, 0])  # y = 0 is orthogonal to everything
    with pytest.raises(ArgumentError):
        holds(L1, UNIT_ISOSCELES, [2, 0], [0, 1])


def test_dual_check_examples():
    assert dual_check(L1, BIRKHOFF, [1, 0], [0, 1])
    assert holds(L1, BIRKHOFF, [1, 0], [0, 1])
    assert not dual_check(L1, BIRKHOFF, X0, [1, 0])
    assert not holds(L1, BIRKHOFF, X0, [1, 0])
    y = np.array([0.4, math.sqrt(1 - 0.16)])
    assert dual_check(E2, chmielinski(0.5), [1, 0], y)
    assert holds(E2, chmielinski(0.5), [1, 0], y)
    with pytest.raises(ArgumentError):
        dual_check(L1, ROBERTS, [1, 0], [0, 1])
    # J((1, 0)) = {(1, t) : |t| <= 1} in l1
    assert dual_margin(L1, BIRKHOFF, [1, 0], [0, 1]) == 1.0
    assert dual_margin(L1, BIRKHOFF, [1, 0], [0.5, 0.5]) == 0.0
    assert dual_margin(L1, BIRKHOFF, [1, 0], [1, 0]) == -1.0
    assert dual_margin(E2, chmielinski(0.5), [1, 0], y) == pytest.approx(0.1, abs=1e-12)


def test_beps_to_deps_examples():
    assert beps_to_deps(0.0) == 0.0
    g = beps_to_deps(0.18)
    assert g == pytest.approx(2 * math.sqrt(0.1476), abs=1e-15)
    assert g == pytest.approx(0.76837, abs=1e-5)
    assert math.sqrt(1 - g * g) == pytest.approx(1 - 2 * 0.18, abs=1e-12)
    assert beps_to_deps(0.25) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    with pytest.raises(ArgumentError):
        beps_to_deps(0.5)


def test_orthogonal_partner_examples():
    np.testing.assert_allclose(orthogonal_partner(E2, [1, 0], [1, 1]), [0, 1], atol=1e-15)
    y = orthogonal_partner(L1, X0, [0, 1])
    np.testing.assert_allclose(y, [0.75, 0.75], atol=1e-15)
    assert holds(L1, BIRKHOFF, X0, y)
    for space in KINDS:
        x = space.sample_sphere(0, 1)[0]
        with pytest.raises(DegenerateError):
            orthogonal_partner(space, x, x)


def test_isosceles_pair_examples():
    u, v = isosceles_pair([1, 0], [0, 1])
    np.testing.assert_allclose(u, [0.5, 0.5])
    np.testing.assert_allclose(v, [0.5, -0.5])
    for space in KINDS:
        a, b = space.sample_sphere(4, 2)
        assert holds(space, ISOSCELES, *isosceles_pair(a, b), tol=1e-12)
    assert not holds(E2, ISOSCELES, *isosceles_pair([2, 0], [0, 1]))
    with pytest.raises(ArgumentError):
        isosceles_pair([1, 1], [2, 2])


def test_roberts_witness_examples():
    assert roberts_witness_search(L1, X0, grid=10 ** 4) is None
    y = roberts_witness_search(E2, [1, 0], grid=10 ** 4)
    assert y is not None and abs(y[0]) < 1e-9 and abs(abs(y[1]) - 1) < 1e-9
    y = roberts_witness_search(L1, [1, 0], grid=10 ** 4)
    assert y is not None and np.allclose(np.abs(y), [0, 1], atol=1e-9)
    with pytest.raises(UnsupportedDimensionError):
        roberts_witness_search(NormedSpace.lp(1, 3), [1, 0, 0])


def test_relation_parsing():
    assert Relation.parse("dragomir:0.5") == dragomir(0.5)
    assert Relation.parse("birkhoff") == BIRKHOFF
    assert str(chmielinski(0.1)) == "chmielinski:0.1"
    for bad in ("dragomir", "dragomir:1.0", "birkhoff:0.1", "orthogonal", "dragomir:x"):
        with pytest.raises(ArgumentError):
            Relation.parse(bad)


def test_sampler_examples():
    e3 = NormedSpace.euclidean(3)
    X, Y = sample_ortho_pairs(e3, BIRKHOFF, 0, 100)
    assert X.shape == Y.shape == (100, 3)
    cos = np.einsum("ij,ij->i", X, Y) / np.linalg.norm(Y, axis=1)
    assert np.all(np.abs(cos) <= 1e-8)
    l13 = NormedSpace.lp(1, 3)
    X, Y = sample_ortho_pairs(l13, BIRKHOFF, 0, 100)
    assert all(dual_check(l13, BIRKHOFF, x, y) for x, y in zip(X, Y))
    with pytest.raises(SamplingExhaustedError):
        sample_ortho_pairs(L1, ROBERTS, 0, 5, x=X0)


@pytest.mark.parametrize("space", KINDS + [NormedSpace.lp(1.5, 3), NormedSpace.lp(np.inf, 4)],
                         ids=KIND_IDS + ["lp:1.5:3", "lp:inf:4"])
@pytest.mark.parametrize("relation", [BIRKHOFF, dragomir(0.3), chmielinski(0.2), ISOSCELES,
                                      UNIT_ISOSCELES], ids=str)
def test_sampled_pairs_satisfy_relation(space, relation):
    X, Y = sample_ortho_pairs(space, relation, 1, 300)
    assert np.all(holds_batch(space, relation, X, Y, tol=1e-8))
    np.testing.assert_array_equal(X, sample_ortho_pairs(space, relation, 1, 300)[0])


def test_pinned_sampler_hits_structured_partners():
    l13 = NormedSpace.lp(1, 3)
    X, Y = sample_ortho_pairs(l13, BIRKHOFF, 0, 50, x=[1, 0, 0])
    assert np.all(X == [1, 0, 0])
    assert np.all(holds_batch(l13, BIRKHOFF, X, Y))
    # e_1 ⊥_B e_1 + e_2 direction appears among the structured partners
    Yn = Y / l13.norm(Y)[:, None]
    assert np.any(np.all(np.abs(np.abs(Yn) - [0.5, 0.5, 0]) < 1e-12, axis=1))


# -- oracle equivalence -------------------------------------------------------------------


@pytest.mark.parametrize("space", KINDS, ids=KIND_IDS)
def test_min_gap_matches_dense_grid(space):
    rng = np.random.default_rng(21)
    X, Y = space.sample_sphere(rng, 100), space.sample_sphere(rng, 100)
    alpha, _, _ = min_gap_batch(space, X, Y)
    grid = np.array([dense_grid_min_gap(space, x, y) for x, y in zip(X, Y)])
    np.testing.assert_allclose(alpha, grid, atol=1e-6)
    # the grid only ever sees attained values, so it cannot sit below the infimum
    assert np.all(grid >= alpha - 1e-12)


@pytest.mark.parametrize("space", KINDS, ids=KIND_IDS)
@pytest.mark.parametrize("eps", [0.0, 0.1, 0.5, 0.9])
def test_chmielinski_definition_vs_dual(space, eps):
    rng = np.random.default_rng(8)
    X = space.sample_sphere(rng, 200)
    Y = np.vstack([space.sample_sphere(rng, 100),
                   np.array([orthogonal_partner(space, x, z) for x, z in
                             zip(X[100:], rng.standard_normal((100, space.dim)))])])
    defect = chmielinski_defect_batch(space, X, Y, eps)
    for x, y, d in zip(X, Y, defect):
        margin = dual_margin(space, chmielinski(eps), x, y)
        grid = chmielinski_defect_grid(space, x, y, eps)
        if abs(margin) < 1e-6 or -1e-6 < min(grid, 0.0) < -1e-14:
            continue
        assert holds(space, chmielinski(eps), x, y) == dual_check(space, chmielinski(eps), x, y)
        # the definitional solver agrees with brute force
        assert d == pytest.approx(min(grid, 0.0), abs=1e-6)


# -- properties ------------------------------------------------------------------------


coords = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
pairs = st.tuples(st.tuples(coords, coords), st.tuples(coords, coords))
scalars = st.floats(0.01, 100).flatmap(lambda a: st.sampled_from([a, -a]))


def _independent(x, y):
    return abs(x[0] * y[1] - x[1] * y[0]) > 1e-3 * max(1e-12, np.linalg.norm(x) * np.linalg.norm(y))


@settings(max_examples=150, deadline=None)
@given(pq=pairs, a=scalars, b=scalars, space=st.sampled_from(KINDS),
       rel=st.sampled_from([BIRKHOFF, ROBERTS, dragomir(0.3), chmielinski(0.2)]))
def test_homogeneity(pq, a, b, space, rel):
    x, y = np.array(pq[0]), np.array(pq[1])
    assume(np.abs(x).max() > 1e-3 and np.abs(y).max() > 1e-3)
    # stay clear of the decision boundary, where rounding may tip either way
    r = min_gap(space, x, y).alpha / space.norm(x)
    if rel.tag == "birkhoff":
        assume(r > 1 - 1e-9 or r < 1 - 1e-6)
    if rel.tag == "dragomir":
        assume(abs(r - math.sqrt(1 - 0.09)) > 1e-6)
    if rel.tag == "chmielinski":
        d = chmielinski_defect_batch(space, x, y, 0.2)[0]
        assume(d > -1e-9 or d < -1e-6)
    assert holds(space, rel, x, y) == holds(space, rel, a * x, b * y)


@settings(max_examples=150, deadline=None)
@given(pq=pairs, e1=st.floats(0, 0.99), e2=st.floats(0, 0.99), space=st.sampled_from(KINDS))
def test_dragomir_monotone_and_threshold(pq, e1, e2, space):
    x, y = np.array(pq[0]), np.array(pq[1])
    assume(_independent(x, y))
    lo, hi = sorted((e1, e2))
    if holds(space, dragomir(lo), x, y, tol=0.0):
        assert holds(space, dragomir(hi), x, y, tol=0.0)
    e = dragomir_eps(space, x, y)
    assert holds(space, dragomir(min(e + 1e-6, 0.999999)), x, y, tol=0.0) or e + 1e-6 >= 0.999999
    if e > 1e-6:
        assert not holds(space, dragomir(e - 1e-6), x, y, tol=0.0)


@settings(max_examples=200, deadline=None)
@given(pq=pairs, space=st.sampled_from(KINDS))
def test_alpha_in_unit_interval_for_independent_unit_pairs(pq, space):
    x, y = np.array(pq[0]), np.array(pq[1])
    assume(_independent(x, y))
    x, y = x / space.norm(x), y / space.norm(y)
    a = min_gap(space, x, y).alpha
    assert 0.0 < a <= 1.0


@settings(max_examples=100, deadline=None)
@given(pq=pairs, space=st.sampled_from(KINDS))
def test_alpha_bounded_by_norm_x(pq, space):
    x, y = np.array(pq[0]), np.array(pq[1])
    assume(np.abs(x).max() > 1e-6 and np.abs(y).max() > 1e-6)
    assert min_gap(space, x, y).alpha <= space.norm(x)


@pytest.mark.parametrize("space", [NormedSpace.lp(3, 2), HEX, NormedSpace.lp(1.5, 2),
                                   NormedSpace.euclidean(3), L1], ids=lambda s: s.describe())
def test_roberts_pairs_are_birkhoff_both_ways(space):
    X, Y = sample_ortho_pairs(space, ROBERTS, 3, 10)
    for x, y in zip(X, Y):
        assert holds(space, BIRKHOFF, x, y)
        assert holds(space, BIRKHOFF, y, x)


def test_birkhoff_matches_grid_oracle_decisions():
    rng = np.random.default_rng(30)
    for space in KINDS:
        X, Y = space.sample_sphere(rng, 20), space.sample_sphere(rng, 20)
        for x, y in zip(X, Y):
            a = dense_grid_min_gap(space, x, y, points=20001)
            e = float(eps_from_alpha(a, 1.0))
            assert dragomir_eps(space, x, y) == pytest.approx(e, abs=1e-6)
