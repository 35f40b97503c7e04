"""Bases with property (*) by maximal-determinant exchange.

A basis has property (*) when every element is Birkhoff orthogonal to the
span of the others. Unit vectors maximizing ``|det[x_1 ... x_n]|`` have it:
with the others fixed, the determinant is the linear functional ``g_i``
(the i-th cofactor row) applied to ``x_i``, so a maximizer attains
``||g_i||_*`` and ``f_i = g_i / det`` is a norm-one functional with
``f_i(x_j) = delta_ij``, which is the Birkhoff criterion via J(x_i).

:func:`auerbach_basis` runs coordinate exchange: each step replaces one
vector by a norming vector of its cofactor functional. Every step is an
exact maximization, so ``det_abs`` never decreases.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ArgumentError, NonConvergenceError
from .normed_space import NormedSpace
from .orthogonality import min_gap_batch

BIORTHO_TOL = 1e-6
STAGNATION = 1e-12


@dataclass(frozen=True)
class AuerbachBasis:
    """Unit basis vectors (rows), their biorthogonal functionals (rows) and ``|det|``."""

    vectors: np.ndarray
    duals: np.ndarray
    det_abs: float
    sweeps: int = 0
    history: tuple = field(default=())


def _duals(vectors: np.ndarray) -> np.ndarray:
    # rows of the inverse of the column matrix: duals[i] @ vectors[j] == delta_ij
    return np.linalg.inv(vectors.T)


def auerbach_basis(space: NormedSpace, seed=0, max_sweeps: int = 50) -> AuerbachBasis:
    """Maximal-determinant unit basis of ``space``.

    Raises :class:`NonConvergenceError` (with the last iterate attached)
    when the biorthogonal functionals are not norm one within ``1e-6`` after
    ``max_sweeps`` sweeps.
    """
    if max_sweeps < 1:
        raise ArgumentError("max_sweeps must be >= 1")
    n = space.dim
    rng = np.random.default_rng(seed)
    X = space.sample_sphere(rng, n)
    while abs(np.linalg.det(X)) < 1e-6:
        X = space.sample_sphere(rng, n)
    det = abs(np.linalg.det(X))
    history = [det]
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        start = det
        for i in range(n):
            g = np.linalg.det(X) * np.linalg.inv(X.T)[i]
            xi = space.norming_vector(g)
            new = float(g @ xi)
            if new >= det:  # ties keep the exchange (new is exact up to rounding)
                X[i] = xi
                det = abs(np.linalg.det(X))
        history.append(det)
        if det - start < STAGNATION * max(det, 1.0):
            break
    basis = AuerbachBasis(vectors=X, duals=_duals(X), det_abs=det, sweeps=sweeps,
                          history=tuple(history))
    defect = biorthogonality_defect(space, basis)
    if defect > BIORTHO_TOL:
        raise NonConvergenceError(
            f"biorthogonality defect {defect:.3g} after {sweeps} sweeps", basis)
    return basis


def _as_vectors(basis) -> np.ndarray:
    V = basis.vectors if isinstance(basis, AuerbachBasis) else np.asarray(basis, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise ArgumentError("a basis must be n vectors of dimension n")
    return V


def biorthogonality_defect(space: NormedSpace, basis) -> float:
    """``max(|f_i(x_j) - delta_ij|, | ||f_i||_* - 1 |, | ||x_i|| - 1 |)``."""
    V = _as_vectors(basis)
    F = _duals(V)
    n = len(V)
    resid = np.max(np.abs(F @ V.T - np.eye(n)))
    dual = max(abs(space.dual_norm(f) - 1.0) for f in F)
    unit = np.max(np.abs(np.atleast_1d(space.norm(V)) - 1.0))
    return float(max(resid, dual, unit))


def verify_property_star(space: NormedSpace, basis, seed=0, count: int = 200,
                         tol: float = BIORTHO_TOL):
    """Two-tier check of property (*). Returns ``(passed, worst_defect)``.

    Tier one is :func:`biorthogonality_defect`. Tier two draws ``count``
    random combinations ``w`` of the other elements for each ``x_i`` and
    measures ``1 - inf_t ||x_i + t w||`` directly.
    """
    V = _as_vectors(basis)
    if V.shape[1] != space.dim:
        raise ArgumentError("basis dimension does not match the space")
    n = len(V)
    tier1 = biorthogonality_defect(space, V)
    tier2 = 0.0
    if n > 1:
        rng = np.random.default_rng(seed)
        for i in range(n):
            others = np.delete(V, i, axis=0)
            C = rng.standard_normal((count, n - 1))
            W = C @ others
            alpha, _, _ = min_gap_batch(space, np.repeat(V[i][None, :], count, axis=0), W)
            tier2 = max(tier2, float(np.max(space.norm(V[i]) - alpha)))
    worst = max(tier1, tier2)
    return bool(tier1 <= tol and tier2 <= tol), worst
