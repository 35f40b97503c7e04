"""Verification suites. Each one composes library calls and records checks.

Suites own no mathematics: every number they report comes from
:mod:`ortho.orthogonality`, :mod:`ortho.operators` or :mod:`ortho.auerbach`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .. import __version__
from ..auerbach import auerbach_basis, verify_property_star
from ..exceptions import ArgumentError, DegenerateBoundError
from ..normed_space import NormedSpace, basis_vector, parse_matrix, parse_space
from ..operators import (LinearOperator, birkhoff_kernel_witness, bounded_below_floor,
                         image_eta, isometry_deviation, isometry_eta_bound,
                         isosceles_kernel_witness, local_preservation_constant,
                         operator_norm, perturbed_eta_bound, preservation_constant,
                         reversal_constant, verify_floor)
from ..orthogonality import (BIRKHOFF, ISOSCELES, ROBERTS, chmielinski, dragomir,
                             dragomir_eps_batch, holds,
                             min_gap_batch, roberts_witness_search, sample_ortho_pairs)
from .config import ScenarioConfig
from .report import Check, ReportDocument

#: slack allowed between a measured constant and a closed-form bound
BOUND_SLACK = 1e-9
FLIP_BAND = 1e-6
HEXAGON = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0))


@dataclass(frozen=True)
class Suite:
    name: str
    anchor: str
    run: Callable[[ScenarioConfig], list]


SUITES: dict[str, Suite] = {}


def _suite(name, anchor):
    def deco(fn):
        SUITES[name] = Suite(name, anchor, fn)
        return fn
    return deco


def run_suite(name: str, config: ScenarioConfig | None = None) -> ReportDocument:
    if name not in SUITES:
        raise ArgumentError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    config = ScenarioConfig(suite=name) if config is None else config.with_overrides(suite=name)
    suite = SUITES[name]
    t0 = time.perf_counter()
    checks = suite.run(config)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return ReportDocument(suite=name, anchor=suite.anchor, config=config.as_dict(),
                          checks=checks, elapsed_ms=elapsed, version=__version__)


# -- shared helpers ---------------------------------------------------------------


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _like(space: NormedSpace, dim: int) -> NormedSpace:
    if space.kind == "euclidean":
        return NormedSpace.euclidean(dim)
    if space.kind == "lp":
        return NormedSpace.lp(space.p, dim)
    raise ArgumentError("a non-square polyhedral operator needs an explicit codomain")


def custom_operator(cfg: ScenarioConfig) -> LinearOperator | None:
    """The operator described by ``cfg`` (matrix plus optional spaces), if any."""
    if cfg.matrix is None:
        if cfg.domain is not None or cfg.codomain is not None:
            raise ArgumentError("domain/codomain given without a matrix")
        return None
    M = parse_matrix(cfg.matrix)
    rows, cols = M.shape
    dom = parse_space(cfg.domain) if cfg.domain else NormedSpace.euclidean(cols)
    if cfg.codomain:
        cod = parse_space(cfg.codomain)
    elif rows == dom.dim:
        cod = dom
    else:
        cod = _like(dom, rows)
    return LinearOperator(M, dom, cod)


def _label(T: LinearOperator) -> str:
    rows = ";".join(",".join(f"{v:.6g}" for v in r) for r in T.matrix)
    return f"[{rows}] {T.domain.describe()}->{T.codomain.describe()}"


def _signed_permutation(rng, n):
    P = np.zeros((n, n))
    P[np.arange(n), rng.permutation(n)] = rng.choice([-1.0, 1.0], size=n)
    return P


def scaled_isometry(space: NormedSpace, rng, scale: float) -> LinearOperator:
    """``scale`` times an isometry of ``space``: orthogonal for Euclidean, signed permutation for l_p."""
    n = space.dim
    if space.kind == "euclidean":
        Q, R = np.linalg.qr(rng.standard_normal((n, n)))
        Q = Q * np.sign(np.diag(R))
        return LinearOperator(scale * Q, space, space)
    if space.kind == "lp":
        return LinearOperator(scale * _signed_permutation(rng, n), space, space)
    raise ArgumentError("scaled_isometry supports Euclidean and l_p spaces")


def perturbation(T: LinearOperator, rng, eps: float) -> LinearOperator:
    """``E`` with ``||E|| = eps ||T||`` (norms by the exact routes where available)."""
    E = LinearOperator(rng.uniform(-1, 1, T.matrix.shape), T.domain, T.codomain)
    return E.scaled(eps * operator_norm(T) / operator_norm(E))


def _random_full_rank(space: NormedSpace, rng) -> LinearOperator:
    while True:
        M = rng.uniform(-1.0, 1.0, (space.dim, space.dim))
        if abs(np.linalg.det(M)) > 0.05:
            return LinearOperator(M, space, space)


@lru_cache(maxsize=128)
def _relation_pairs(space, relation, seed_key: tuple, count):
    # tol=0 so sampled pairs satisfy the relation with no slack; cached because
    # several operators on one domain share the same pairs
    X, Y = sample_ortho_pairs(space, relation, np.random.SeedSequence(seed_key), count, tol=0.0)
    X.setflags(write=False)
    Y.setflags(write=False)
    return X, Y


def _max_eta(T, X, Y, reverse=False):
    eps, zero = image_eta(T, X, Y, reverse=reverse)
    return (float(np.nanmax(eps)) if np.any(~zero) else 0.0), int(zero.sum())


def _key(cfg, k) -> tuple:
    return (cfg.seed, k)


def _seed(cfg, k):
    # one reproducible stream per sub-task
    return np.random.SeedSequence(_key(cfg, k))


# -- suites ---------------------------------------------------------------------


@_suite("prop-independent", "Proposition independent: 0 < alpha <= 1 for independent pairs")
def _prop_independent(cfg: ScenarioConfig) -> list:
    spaces = [NormedSpace.lp(1, 2), NormedSpace.euclidean(3), NormedSpace.lp(3, 2),
              NormedSpace.lp(np.inf, 3), NormedSpace.polyhedral(HEXAGON)]
    m = min(cfg.sample_count, 200)
    checks = []
    for k, space in enumerate(spaces):
        rng = np.random.default_rng(_seed(cfg, k))
        X, Y = space.sample_sphere(rng, m), space.sample_sphere(rng, m)
        alpha, _, _ = min_gap_batch(space, X, Y)
        checks.append(Check(f"alpha-range:{space.describe()}",
                            _status(bool(alpha.min() > 0 and alpha.max() <= 1.0)),
                            {"alpha_min": alpha.min(), "alpha_max": alpha.max(), "pairs": m},
                            {"alpha_lower_exclusive": 0.0, "alpha_upper": 1.0}))
        eps = dragomir_eps_batch(space, X, Y)
        bad = 0
        first = None
        for x, y, e in zip(X, Y, eps):
            # eps + band >= 1 admits every independent pair
            above = e + FLIP_BAND >= 1.0 or holds(space, dragomir(e + FLIP_BAND), x, y, tol=0.0)
            below = e < FLIP_BAND or not holds(space, dragomir(e - FLIP_BAND), x, y, tol=0.0)
            if not (above and below):
                bad += 1
                first = first or {"x": x, "y": y, "eps": e}
        checks.append(Check(f"threshold:{space.describe()}", _status(bad == 0),
                            {"flip_failures": bad, "eps_max": eps.max(), "eps_min": eps.min()},
                            {"flip_failures": 0, "band": FLIP_BAND}, first))
    return checks


def _default_full_rank(cfg, k0=100):
    spaces = [NormedSpace.euclidean(2), NormedSpace.lp(1, 3), NormedSpace.lp(3, 2),
              NormedSpace.lp(np.inf, 2), NormedSpace.polyhedral(HEXAGON)]
    return [_random_full_rank(s, np.random.default_rng(_seed(cfg, k0 + i)))
            for i, s in enumerate(spaces)]


@_suite("prop-p-iff-r", "Proposition prop1: preserving iff reversing for some eta < 1")
def _prop_p_iff_r(cfg: ScenarioConfig) -> list:
    rel = cfg.relation_obj
    T0 = custom_operator(cfg)
    ops = [T0] if T0 is not None else _default_full_rank(cfg)
    checks = []
    for i, T in enumerate(ops):
        if not T.injective:
            pair = isosceles_kernel_witness(T)
            e_fwd = float(image_eta(T, pair[0], pair[1])[0][0])
            e_rev = float(image_eta(T, pair[0], pair[1], reverse=True)[0][0])
            checks.append(Check(f"kernel:{_label(T)}", _status(e_fwd == 1.0 and e_rev == 1.0),
                                witness={"x": pair[0], "y": pair[1], "eta_preserve": e_fwd,
                                         "eta_reverse": e_rev}))
            continue
        p = preservation_constant(T, rel, _seed(cfg, 2 * i), cfg.sample_count, cfg.tolerance)
        r = reversal_constant(T, rel, _seed(cfg, 2 * i + 1), cfg.sample_count, cfg.tolerance)
        ok = p.eta_hat < 1.0 and r.eta_hat < 1.0
        checks.append(Check(f"preserve-and-reverse:{_label(T)}", _status(ok),
                            {"eta_preserve": p.eta_hat, "eta_reverse": r.eta_hat,
                             "relation": str(rel)},
                            {"eta_upper_exclusive": 1.0},
                            {"worst_preserve": list(p.worst_pair),
                             "worst_reverse": list(r.worst_pair)}))
    return checks


@_suite("deps-symmetry", "Corollary after prop1: x D^eps y on the sphere implies y D^beta x")
def _deps_symmetry(cfg: ScenarioConfig) -> list:
    spaces = [NormedSpace.euclidean(2), NormedSpace.lp(1, 2), NormedSpace.lp(3, 3),
              NormedSpace.lp(np.inf, 2)]
    m = min(cfg.sample_count, 2000)
    checks = []
    for k, space in enumerate(spaces):
        for j, e in enumerate((0.1, 0.5)):
            X, Y = _relation_pairs(space, dragomir(e), _key(cfg, 10 * k + j), m)
            X = X / space.norm(X)[:, None]
            Y = Y / space.norm(Y)[:, None]
            beta = dragomir_eps_batch(space, Y, X)
            b = float(beta.max())
            bounds = {"beta_upper_exclusive": 1.0}
            ok = b < 1.0
            if space.is_euclidean:
                # Dragomir orthogonality is symmetric in inner-product spaces
                bounds["beta_euclidean"] = e
                ok = ok and b <= e + BOUND_SLACK
            checks.append(Check(f"beta:{space.describe()}:eps={e}", _status(ok),
                                {"beta_hat": b, "pairs": m}, bounds))
    return checks


def _kernel_check(T: LinearOperator) -> Check:
    x_i, y_i = isosceles_kernel_witness(T)
    e_iso = float(image_eta(T, x_i, y_i)[0][0])
    witness = {"isosceles_pair": [x_i, y_i], "isosceles_image_eta": e_iso,
               "kernel_vector": T.kernel_vector()}
    ok = e_iso == 1.0 and holds(T.domain, ISOSCELES, x_i, y_i, tol=1e-9)
    try:
        basis = auerbach_basis(T.domain, seed=0)
        bw = birkhoff_kernel_witness(T, basis.vectors)
    except ArgumentError:
        bw = None
    if bw is not None:
        e_b = float(image_eta(T, bw[0], bw[1])[0][0])
        witness.update({"birkhoff_pair": list(bw), "birkhoff_image_eta": e_b,
                        "birkhoff_holds": holds(T.domain, BIRKHOFF, bw[0], bw[1], tol=1e-6)})
        ok = ok and e_b == 1.0 and witness["birkhoff_holds"]
    return Check(f"kernel-witness:{_label(T)}", _status(ok), witness=witness)


@_suite("thm-one", "Theorem one: T preserves approximate orthogonality iff T is one-to-one")
def _thm_one(cfg: ScenarioConfig) -> list:
    rel = cfg.relation_obj
    T0 = custom_operator(cfg)
    if T0 is not None:
        ops = [T0]
    else:
        ops = [LinearOperator(np.eye(2), NormedSpace.euclidean(2), NormedSpace.euclidean(2)),
               _random_full_rank(NormedSpace.lp(3, 3), np.random.default_rng(_seed(cfg, 1))),
               LinearOperator(np.diag([1.0, 0.0]), NormedSpace.lp(1, 2), NormedSpace.lp(1, 2)),
               LinearOperator([[1.0, 2.0], [2.0, 4.0]], NormedSpace.lp(np.inf, 2),
                              NormedSpace.lp(np.inf, 2))]
    checks = []
    for i, T in enumerate(ops):
        if T.injective:
            rep = preservation_constant(T, rel, _seed(cfg, 10 + i), cfg.sample_count, cfg.tolerance)
            checks.append(Check(f"injective:{_label(T)}", _status(rep.eta_hat < 1.0),
                                {"eta_hat": rep.eta_hat, "relation": str(rel),
                                 "skipped_degenerate": rep.skipped_degenerate},
                                {"eta_upper_exclusive": 1.0},
                                {"worst_pair": list(rep.worst_pair)}))
        else:
            checks.append(_kernel_check(T))
    return checks


def _default_near_isometries(cfg):
    out = []
    spaces = [NormedSpace.euclidean(3), NormedSpace.lp(1, 2), NormedSpace.lp(np.inf, 3),
              NormedSpace.lp(1, 4)]
    for k, s in enumerate(spaces):
        rng = np.random.default_rng(_seed(cfg, 200 + k))
        T = scaled_isometry(s, rng, 1.5)
        out.append(T + perturbation(T, rng, 0.05))
    return out


@_suite("almost-isometry", "Corollary almost isometry: an eps-isometry preserves D^eta for small eta")
def _almost_isometry(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    ops = [T0] if T0 is not None else _default_near_isometries(cfg)
    checks = []
    for i, T in enumerate(ops):
        if T.domain.dim != T.codomain.dim or not T.injective:
            checks.append(Check(f"profile:{_label(T)}", "skip",
                                witness={"reason": "needs a square invertible operator"}))
            continue
        prof = isometry_deviation(T, seed=_seed(cfg, i))
        X = T.domain.sample_sphere(np.random.default_rng(_seed(cfg, 50 + i)),
                                   min(cfg.sample_count, 5000))
        ratios = np.atleast_1d(T.codomain.norm(T(X))) / prof.scale
        ok = bool(ratios.min() >= 1 - prof.delta1 - BOUND_SLACK and
                  ratios.max() <= 1 + prof.delta2 + BOUND_SLACK)
        checks.append(Check(f"profile:{_label(T)}", _status(ok),
                            {"ratio_min": ratios.min(), "ratio_max": ratios.max(),
                             "delta1": prof.delta1, "delta2": prof.delta2, "scale": prof.scale,
                             "norm_method": prof.norm_method, "lower_method": prof.lower_method},
                            {"ratio_min_ge": 1 - prof.delta1, "ratio_max_le": 1 + prof.delta2}))
        bound = isometry_eta_bound(BIRKHOFF, prof.delta1, prof.delta2)
        X, Y = _relation_pairs(T.domain, BIRKHOFF, _key(cfg, 100 + i), cfg.sample_count)
        fwd, _ = _max_eta(T, X, Y)
        rev, _ = _max_eta(T, X, Y, reverse=True)
        checks.append(Check(f"eta-bound:{_label(T)}", _status(fwd <= bound + BOUND_SLACK),
                            {"eta_preserve": fwd}, {"eta_bound": bound}))
        # the closed form covers preservation; reversal is only known to stay below 1
        checks.append(Check(f"reverse-below-one:{_label(T)}", _status(rev < 1.0),
                            {"eta_reverse": rev}, {"eta_upper_exclusive": 1.0}))
    return checks


CLAUSES = ((dragomir, (0.0, 0.1, 0.3)), (chmielinski, (0.0, 0.1, 0.2)))


def _clause_relations(space: NormedSpace):
    rels = [make(b) for make, betas in CLAUSES for b in betas]
    if space.is_euclidean:
        # Roberts pairs are scarce or absent elsewhere (l_1^2 has points with none)
        rels.append(ROBERTS)
    return rels


def _bound_checks(cfg, T, bound_fn, label, k0, relations=None):
    checks = []
    for j, rel in enumerate(relations or _clause_relations(T.domain)):
        try:
            bound = bound_fn(rel)
        except DegenerateBoundError as exc:
            checks.append(Check(f"{label}:{rel}", "skip", witness={"reason": str(exc)}))
            continue
        X, Y = _relation_pairs(T.domain, rel, _key(cfg, k0 + j), cfg.sample_count)
        fwd, skipped = _max_eta(T, X, Y)
        measured = {"eta_hat": fwd, "skipped_degenerate": skipped}
        ok = fwd <= bound + BOUND_SLACK
        if rel.tag == "roberts":
            # the Roberts clause covers both directions
            rev, _ = _max_eta(T, X, Y, reverse=True)
            measured["eta_reverse"] = rev
            ok = ok and rev <= bound + BOUND_SLACK
        checks.append(Check(f"{label}:{rel}", _status(ok), measured, {"eta_bound": bound}))
    return checks


@_suite("isometry-bounds", "Theorem isometry: eps-isometries are D^beta D^eta preserving")
def _isometry_bounds(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    if T0 is None:
        T0 = LinearOperator(np.diag([1.0, 2.0]), NormedSpace.euclidean(2), NormedSpace.euclidean(2))
    prof = isometry_deviation(T0, seed=_seed(cfg, 0))
    rels = _clause_relations(T0.domain)
    checks = [Check(f"profile:{_label(T0)}", "pass",
                    {"delta1": prof.delta1, "delta2": prof.delta2, "scale": prof.scale},
                    {"delta1_upper_exclusive": 1.0})]
    checks += _bound_checks(cfg, T0, lambda r: isometry_eta_bound(r, prof.delta1, prof.delta2),
                            _label(T0), 10, rels)
    return checks


@_suite("perturbed-bounds", "Theorem scalar multiple: bounds for S with ||S - T|| <= eps ||T||")
def _perturbed_bounds(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    checks = []
    if T0 is not None:
        cases = [(T0, e) for e in (0.05, 0.1, 0.2)]
    else:
        spaces = [NormedSpace.euclidean(2), NormedSpace.lp(1, 2), NormedSpace.lp(np.inf, 3)]
        cases = [(scaled_isometry(s, np.random.default_rng(_seed(cfg, 300 + k)), 2.0), e)
                 for k, s in enumerate(spaces) for e in (0.05, 0.1, 0.2)]
    for i, (T, e) in enumerate(cases):
        prof = isometry_deviation(T, seed=_seed(cfg, 400 + i))
        S = T + perturbation(T, np.random.default_rng(_seed(cfg, 500 + i)), e)
        checks += _bound_checks(
            cfg, S, lambda r: perturbed_eta_bound(r, prof.delta1, prof.delta2, e),
            f"{_label(T)}:eps={e}", 1000)
    return checks


@_suite("floor", "Lemma bounded below: ||Tz|| >= floor(eta) ||T|| ||z||")
def _floor(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    if T0 is not None:
        ops = [T0]
    else:
        ops = [LinearOperator(np.diag([1.0, 2.0]), NormedSpace.euclidean(2), NormedSpace.euclidean(2))]
        ops += _default_near_isometries(cfg)[:2]
        ops.append(LinearOperator(np.diag([1.0, 0.0, 3.0]), NormedSpace.lp(1, 3), NormedSpace.lp(1, 3)))
    checks = [Check("floor-at-zero", _status(bounded_below_floor(0.0) == 1.0 / 15.0),
                    {"floor_0": bounded_below_floor(0.0)}, {"expected": 1.0 / 15.0})]
    for i, T in enumerate(ops):
        n = min(cfg.sample_count, 5000)
        if T.injective and T.domain.dim == T.codomain.dim:
            prof = isometry_deviation(T, seed=_seed(cfg, i))
            eta = isometry_eta_bound(BIRKHOFF, prof.delta1, prof.delta2)
            ok, worst = verify_floor(T, eta, _seed(cfg, 20 + i), n)
            checks.append(Check(f"certified:{_label(T)}", _status(ok),
                                {"worst_ratio": worst, "eta": eta},
                                {"floor": bounded_below_floor(eta)}))
        else:
            # a kernel vector must break the floor for any eta
            ok, worst = verify_floor(T, 0.0, _seed(cfg, 20 + i), n)
            checks.append(Check(f"rank-deficient:{_label(T)}", _status(not ok),
                                {"worst_ratio": worst}, {"floor_eta0": bounded_below_floor(0.0)},
                                {"kernel_vector": T.kernel_vector()}))
    return checks


@_suite("roberts-counterexample", "Remark: Roberts orthogonality lacks existence in l1^2")
def _roberts_counterexample(cfg: ScenarioConfig) -> list:
    space = NormedSpace.lp(1, 2)
    x = np.array([0.75, -0.25])
    grid = 10 ** 4
    found = roberts_witness_search(space, x, grid=grid, tol=cfg.tolerance)
    checks = [Check("witness-search", _status(found is None),
                    {"grid_points": grid, "found": found is not None},
                    {"found": False}, None if found is None else {"y": found})]
    for sign in (1.0, -1.0):
        y = sign * np.array([0.5, 0.5])
        plus, minus = float(space.norm(x + y)), float(space.norm(x - y))
        ok = (holds(space, BIRKHOFF, x, y, tol=1e-12) and abs(space.norm(y) - 1) <= 1e-12
              and abs(abs(plus - minus) - 0.5) <= 1e-12)
        checks.append(Check(f"candidate:{sign:+.0f}", _status(ok),
                            {"norm_x_plus_y": plus, "norm_x_minus_y": minus,
                             "isosceles_defect": abs(plus - minus)},
                            {"isosceles_defect_zero_required": 0.0},
                            {"x": x, "y": y, "x_birkhoff_y": holds(space, BIRKHOFF, x, y)}))
    return checks


def auerbach_spaces():
    polys = {2: HEXAGON,
             3: np.vstack([np.eye(3), [[1, 1, 1], [1, -1, 0.5]]]),
             4: np.vstack([np.eye(4), [[1, 1, 1, 1], [1, -1, 0.5, 0.0]]])}
    out = []
    for n in (2, 3, 4):
        out += [NormedSpace.lp(1, n), NormedSpace.euclidean(n), NormedSpace.lp(3, n),
                NormedSpace.lp(np.inf, n), NormedSpace.polyhedral(polys[n])]
    return out


def auerbach_tolerance(space: NormedSpace) -> float:
    return 1e-4 if space.kind == "poly" and space.dim >= 3 else 1e-6


@_suite("auerbach", "Theorem basis: a basis with each element Birkhoff orthogonal to the others' span")
def _auerbach(cfg: ScenarioConfig) -> list:
    checks = []
    for k, space in enumerate(auerbach_spaces()):
        tol = auerbach_tolerance(space)
        b = auerbach_basis(space, seed=_seed(cfg, k), max_sweeps=50)
        ok, defect = verify_property_star(space, b, seed=_seed(cfg, 100 + k),
                                          count=min(cfg.sample_count, 200), tol=tol)
        bounds = {"defect_max": tol, "sweeps_max": 50}
        if tol > 1e-6:
            bounds["label"] = "widened: LP-based norming vectors"
        checks.append(Check(f"property-star:{space.describe()}", _status(ok),
                            {"defect": defect, "sweeps": b.sweeps, "det_abs": b.det_abs},
                            bounds, {"vectors": b.vectors}))
    space = NormedSpace.lp(np.inf, 2)
    b = auerbach_basis(space, seed=_seed(cfg, 999))
    checks.append(Check("det-linf2", _status(abs(b.det_abs - 2.0) <= 1e-6),
                        {"det_abs": b.det_abs}, {"expected": 2.0, "tol": 1e-6},
                        {"vectors": b.vectors}))
    return checks


@_suite("local-to-global-l1",
        "Theorem r4 / Proposition r5 / Corollaries c2, c3: e_i Birkhoff orthogonal to e_i + e_j in l1")
def _local_to_global(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    if T0 is not None:
        if T0.domain.kind != "lp" or T0.domain.effective_p != 1:
            raise ArgumentError("local-to-global-l1 needs an l_1 domain")
        ops = [T0]
    else:
        ops = [LinearOperator(np.diag(d), NormedSpace.lp(1, len(d)), NormedSpace.lp(1, len(d)))
               for d in ([1.0, 2.0, 3.0], [1.0, 0.0, 2.0], [0.0, 1.0, 0.0, 4.0])]
    checks = []
    for i, T in enumerate(ops):
        n = T.domain.dim
        cod = T.codomain
        scale = float(np.abs(T.matrix).max())
        dead = [j for j in range(n) if cod.norm(T(basis_vector(n, j))) <= 1e-12 * scale]
        if not dead:
            etas = []
            for j in range(n):
                rep = local_preservation_constant(T, BIRKHOFF, basis_vector(n, j),
                                                  _seed(cfg, 10 * i + j), min(cfg.sample_count, 2000))
                etas.append(rep.eta_hat)
            checks.append(Check(f"injective-local:{_label(T)}", _status(max(etas) < 1.0),
                                {"local_eta": etas}, {"eta_upper_exclusive": 1.0}))
            continue
        live = [j for j in range(n) if j not in dead]
        if not live:
            checks.append(Check(f"kernel-device:{_label(T)}", "skip",
                                witness={"reason": "T vanishes on every basis vector"}))
            continue
        a, b = live[0], dead[0]
        x, y = basis_vector(n, a), basis_vector(n, a) + basis_vector(n, b)
        e = float(image_eta(T, x, y)[0][0])
        rep = local_preservation_constant(T, BIRKHOFF, x, _seed(cfg, 10 * i),
                                          min(cfg.sample_count, 2000))
        ok = holds(T.domain, BIRKHOFF, x, y, tol=0.0) and e == 1.0 and rep.eta_hat == 1.0
        checks.append(Check(f"kernel-device:{_label(T)}", _status(ok),
                            witness={"x": x, "y": y, "image_eta": e,
                                     "local_eta_at_x": rep.eta_hat, "kernel_index": b}))
    return checks


@_suite("polyhedral-2d", "Theorem r6: two-dimensional polyhedral spaces, two partners at a vertex")
def _polyhedral_2d(cfg: ScenarioConfig) -> list:
    T0 = custom_operator(cfg)
    if T0 is not None:
        if T0.domain.kind != "poly" or T0.domain.dim != 2:
            raise ArgumentError("polyhedral-2d needs a two-dimensional polyhedral domain")
        space, ops = T0.domain, [T0]
    else:
        space = NormedSpace.polyhedral(HEXAGON)
        ops = [LinearOperator([[2.0, 1.0], [0.0, 1.0]], space, space),
               LinearOperator([[1.0, 2.0], [0.0, 0.0]], space, space)]
    x = None
    for v in space.ball_vertices:
        J = space.support_set(v)
        if len(J.vertices) >= 2:
            x = v
            break
    F = J.vertices[:2]
    Y = np.array([[-f[1], f[0]] for f in F])
    Y = Y / space.norm(Y)[:, None]
    ok = all(holds(space, BIRKHOFF, x, y, tol=1e-12) for y in Y) and abs(np.linalg.det(Y)) > 1e-9
    checks = [Check("two-partners", _status(ok),
                    {"det_partners": float(np.linalg.det(Y))}, {"det_nonzero": True},
                    {"x": x, "y1": Y[0], "y2": Y[1], "functionals": F})]
    for i, T in enumerate(ops):
        eps, zero = image_eta(T, np.vstack([x, x]), Y)
        if T.rank == 1:
            collapse = bool(np.all(~zero) and np.all(eps == 1.0))
            checks.append(Check(f"rank-one:{_label(T)}", _status(collapse),
                                witness={"image_eta": eps, "images": T(Y), "image_x": T(x)}))
        else:
            rep = local_preservation_constant(T, BIRKHOFF, x, _seed(cfg, i),
                                              min(cfg.sample_count, 2000))
            ok = bool(np.all(~zero) and np.all(eps < 1.0) and rep.eta_hat < 1.0)
            checks.append(Check(f"full-rank:{_label(T)}", _status(ok),
                                {"image_eta": eps, "local_eta": rep.eta_hat},
                                {"eta_upper_exclusive": 1.0}))
    return checks
