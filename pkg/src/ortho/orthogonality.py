"""Orthogonality relations and minimal approximate-orthogonality constants.

Relations decided here, for ``x, y`` in a normed space:

``birkhoff``
    ``||x + t y|| >= ||x||`` for every real ``t``.
``dragomir:eps``
    ``||x + t y|| >= sqrt(1 - eps^2) ||x||`` for every ``t``.
``chmielinski:eps``
    ``||x + t y||^2 >= ||x||^2 - 2 eps ||x|| ||t y||`` for every ``t``.
``isosceles`` / ``unit-isosceles``
    ``||x + y|| = ||x - y||`` (the unit variant requires unit vectors).
``roberts``
    ``||x + t y|| = ||x - t y||`` for every ``t``.

Everything quantified over ``t`` reduces to 1-D convex minimization along
the line ``x + t y``, done by golden-section search on a provable bracket.
Homogeneous relations are decided on normalized representatives so the
single tolerance ``TOL`` means the same thing at every scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (ArgumentError, DegenerateError, SamplingExhaustedError,
                         UnsupportedDimensionError)
from .linesearch import golden_section_batch, iterations_for
from .normed_space import NormedSpace, as_vector

#: Decision tolerance shared by all relation tests.
TOL = 1e-8
#: ``alpha / ||x||`` at or below this means x and y are dependent.
DEPENDENCE_TOL = 1e-8
#: Golden-section bracket on normalized inputs is [-2, 2]; this many steps
#: shrink it to about 1e-15.
GAP_ITERATIONS = iterations_for(4.0, 1e-15)
#: ``alpha / ||x||`` within this of 1 is rounding noise, not a defect.
ROUNDING_FLOOR = 8 * np.finfo(float).eps
ROBERTS_LAMBDAS = np.logspace(-4, 4, 129)
ROBERTS_SCREEN = 1e-6
MAX_ATTEMPTS = 10 ** 6
#: Each Roberts attempt is a full witness search, so far fewer are allowed.
ROBERTS_MAX_ATTEMPTS = 200

_TAGS = ("birkhoff", "isosceles", "unit-isosceles", "roberts", "dragomir", "chmielinski")


@dataclass(frozen=True)
class Relation:
    """An orthogonality relation, optionally carrying its ``eps`` level."""

    tag: str
    eps: float | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ArgumentError(f"unknown relation {self.tag!r}")
        if self.tag in ("dragomir", "chmielinski"):
            if self.eps is None or not (0.0 <= self.eps < 1.0):
                raise ArgumentError(f"{self.tag} needs eps in [0, 1), got {self.eps}")
            object.__setattr__(self, "eps", float(self.eps))
        elif self.eps is not None:
            raise ArgumentError(f"{self.tag} takes no eps")

    @classmethod
    def parse(cls, text: str) -> "Relation":
        """Parse ``tag`` or ``tag:eps`` (e.g. ``dragomir:0.5``)."""
        tag, _, eps = text.strip().lower().partition(":")
        tag = {"b": "birkhoff", "i": "isosceles", "ui": "unit-isosceles", "r": "roberts",
               "d": "dragomir", "beps": "chmielinski", "unitisosceles": "unit-isosceles"}.get(tag, tag)
        try:
            return cls(tag, float(eps) if eps else None)
        except ValueError as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed relation {text!r}") from exc

    def __str__(self):
        return self.tag if self.eps is None else f"{self.tag}:{self.eps:g}"

    @property
    def homogeneous(self) -> bool:
        return self.tag not in ("isosceles", "unit-isosceles")


BIRKHOFF = Relation("birkhoff")
ISOSCELES = Relation("isosceles")
UNIT_ISOSCELES = Relation("unit-isosceles")
ROBERTS = Relation("roberts")


def dragomir(eps: float) -> Relation:
    return Relation("dragomir", eps)


def chmielinski(eps: float) -> Relation:
    return Relation("chmielinski", eps)


@dataclass(frozen=True)
class GapResult:
    """``alpha = inf_t ||x + t y||`` and a minimizing ``t``."""

    alpha: float
    minimizer_lambda: float
    evaluations: int


# -- helpers ------------------------------------------------------------------


def _rows(space: NormedSpace, X, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != space.dim:
        raise ArgumentError(f"{name} must have shape (m, {space.dim})")
    if not np.all(np.isfinite(X)):
        raise ArgumentError(f"{name} has non-finite entries")
    return X


def _normalize(space: NormedSpace, X: np.ndarray, name: str):
    n = np.atleast_1d(space.norm(X))
    if np.any(n == 0.0):
        raise ArgumentError(f"{name} must be nonzero")
    return X / n[:, None], n


def _line_norms(space: NormedSpace, X, Y):
    return lambda t: space.norm(X + t[:, None] * Y)


# -- minimal gap and Dragomir constant -------------------------------------------


def min_gap_batch(space: NormedSpace, X, Y):
    """Row-wise ``inf_t ||x + t y||``.

    Returns ``(alpha, minimizer, evaluations)`` arrays for the original
    (unnormalized) rows. The minimizer lies in ``|t| <= 2 ||x|| / ||y||``.
    """
    X, Y = _rows(space, X, "x"), _rows(space, Y, "y")
    U, nx = _normalize(space, X, "x")
    V, ny = _normalize(space, Y, "y")
    if space.is_euclidean:
        t = -np.einsum("ij,ij->i", U, V)
        alpha_hat = np.linalg.norm(U + t[:, None] * V, axis=1)
        evals = np.ones(len(U), dtype=int)
    else:
        m = len(U)
        t, alpha_hat, n_eval = golden_section_batch(
            _line_norms(space, U, V), -2.0 * np.ones(m), 2.0 * np.ones(m),
            GAP_ITERATIONS, extra=0.0)
        alpha_hat = np.minimum(alpha_hat, 1.0)
        evals = np.full(m, n_eval)
    return alpha_hat * nx, t * nx / ny, evals


def min_gap(space: NormedSpace, x, y) -> GapResult:
    """``alpha = inf_t ||x + t y||`` with a minimizing ``t``."""
    x = as_vector(x, space.dim)
    y = as_vector(y, space.dim, "y")
    a, t, e = min_gap_batch(space, x, y)
    return GapResult(float(a[0]), float(t[0]), int(e[0]))


def _eps_from_ratio(r):
    r = np.clip(r, 0.0, 1.0)
    eps = np.sqrt((1.0 - r) * (1.0 + r))
    eps = np.where(r >= 1.0 - ROUNDING_FLOOR, 0.0, eps)
    return np.where(r <= DEPENDENCE_TOL, 1.0, eps)


def dragomir_eps_batch(space: NormedSpace, X, Y) -> np.ndarray:
    """Row-wise minimal Dragomir constant (1 flags dependent rows)."""
    X, Y = _rows(space, X, "x"), _rows(space, Y, "y")
    alpha, _, _ = min_gap_batch(space, X, Y)
    return _eps_from_ratio(alpha / np.atleast_1d(space.norm(X)))


def dragomir_eps(space: NormedSpace, x, y) -> float:
    """Smallest ``eps`` with ``x`` Dragomir-``eps``-orthogonal to ``y``.

    Equals ``sqrt(1 - (alpha/||x||)^2)``. Linearly dependent pairs have no
    valid level in [0, 1) and return the sentinel 1.
    """
    x = as_vector(x, space.dim)
    y = as_vector(y, space.dim, "y")
    return float(dragomir_eps_batch(space, x, y)[0])


def chmielinski_defect_batch(space: NormedSpace, X, Y, eps: float) -> np.ndarray:
    """Row-wise ``inf_t ||u + t v||^2 - 1 + 2 eps |t|`` on normalized rows.

    Non-positive; zero exactly when x is Chmielinski-``eps``-orthogonal to y.
    The function is convex on each half-line, so both are searched.
    """
    U, _ = _normalize(space, _rows(space, X, "x"), "x")
    V, _ = _normalize(space, _rows(space, Y, "y"), "y")
    m = len(U)

    def g(t):
        return space.norm(U + t[:, None] * V) ** 2 - 1.0 + 2.0 * eps * np.abs(t)

    _, low_pos, _ = golden_section_batch(g, np.zeros(m), 2.0 * np.ones(m), GAP_ITERATIONS)
    _, low_neg, _ = golden_section_batch(g, -2.0 * np.ones(m), np.zeros(m), GAP_ITERATIONS)
    return np.minimum(np.minimum(low_pos, low_neg), 0.0)


def roberts_defect_batch(space: NormedSpace, X, Y, lambdas=ROBERTS_LAMBDAS) -> np.ndarray:
    """Row-wise ``max_t | ||u + t v|| - ||u - t v|| |`` over a signed ``t`` grid."""
    U, _ = _normalize(space, _rows(space, X, "x"), "x")
    V, _ = _normalize(space, _rows(space, Y, "y"), "y")
    lam = np.concatenate([lambdas, -lambdas])
    P = U[:, None, :] + lam[None, :, None] * V[:, None, :]
    Q = U[:, None, :] - lam[None, :, None] * V[:, None, :]
    return np.max(np.abs(space.norm(P) - space.norm(Q)), axis=1)


# -- relation decisions -----------------------------------------------------------


def holds_batch(space: NormedSpace, relation: Relation, X, Y, tol: float = TOL) -> np.ndarray:
    """Row-wise definitional test of ``x ⊥ y`` for ``relation``."""
    X, Y = _rows(space, X, "x"), _rows(space, Y, "y")
    if len(X) != len(Y):
        raise ArgumentError("x and y batches differ in length")
    tag = relation.tag
    if tag in ("isosceles", "unit-isosceles"):
        if tag == "unit-isosceles":
            bad = (np.abs(np.atleast_1d(space.norm(X)) - 1.0) > 1e-9) | \
                  (np.abs(np.atleast_1d(space.norm(Y)) - 1.0) > 1e-9)
            if np.any(bad):
                raise ArgumentError("unit-isosceles needs unit vectors")
        return np.abs(np.atleast_1d(space.norm(X + Y)) - np.atleast_1d(space.norm(X - Y))) <= tol

    nx = np.atleast_1d(space.norm(X))
    if np.any(nx == 0.0):
        raise ArgumentError("x must be nonzero")
    ny = np.atleast_1d(space.norm(Y))
    out = np.ones(len(X), dtype=bool)   # y = 0 is orthogonal to everything
    live = ny > 0.0
    if not np.any(live):
        return out
    Xl, Yl = X[live], Y[live]
    if tag == "birkhoff":
        alpha, _, _ = min_gap_batch(space, Xl, Yl)
        out[live] = alpha / nx[live] >= 1.0 - tol
    elif tag == "dragomir":
        alpha, _, _ = min_gap_batch(space, Xl, Yl)
        out[live] = alpha / nx[live] >= math.sqrt(1.0 - relation.eps ** 2) - tol
    elif tag == "chmielinski":
        out[live] = chmielinski_defect_batch(space, Xl, Yl, relation.eps) >= -tol
    elif tag == "roberts":
        if space.is_euclidean:
            U = Xl / nx[live, None]
            V = Yl / ny[live, None]
            out[live] = np.abs(np.einsum("ij,ij->i", U, V)) <= 1e-10
        else:
            out[live] = roberts_defect_batch(space, Xl, Yl) <= tol
    return out


def holds(space: NormedSpace, relation: Relation, x, y, tol: float = TOL) -> bool:
    """Definitional test of ``x ⊥ y`` for ``relation``."""
    x = as_vector(x, space.dim)
    y = as_vector(y, space.dim, "y")
    return bool(holds_batch(space, relation, x, y, tol)[0])


def support_interval(space: NormedSpace, x, y) -> tuple[float, float]:
    """``[min, max]`` of ``f(y/||y||)`` over ``f`` in J(x)."""
    y = as_vector(y, space.dim, "y")
    ny = space.norm(y)
    if ny == 0.0:
        return 0.0, 0.0
    return space.support_set(x).interval(y / ny)


def dual_margin(space: NormedSpace, relation: Relation, x, y) -> float:
    """Signed slack of the J(x) characterization (>= 0 means it holds).

    ``eps - d`` with ``eps = 0`` for Birkhoff, where ``d`` is the signed
    distance from 0 to ``{f(y/||y||) : f in J(x)}`` (negative inside it), so
    ``|margin|`` measures how far the pair is from the decision boundary.
    """
    if relation.tag == "birkhoff":
        eps = 0.0
    elif relation.tag == "chmielinski":
        eps = relation.eps
    else:
        raise ArgumentError(f"no J(x) characterization implemented for {relation}")
    x = as_vector(x, space.dim)
    if space.norm(x) == 0.0:
        raise ArgumentError("x must be nonzero")
    lo, hi = support_interval(space, x, y)
    dist = -min(-lo, hi) if lo <= 0.0 <= hi else min(abs(lo), abs(hi))
    return eps - dist


def dual_check(space: NormedSpace, relation: Relation, x, y, tol: float = TOL) -> bool:
    """Decide Birkhoff or Chmielinski orthogonality through J(x).

    ``x ⊥_B y`` iff some ``f`` in J(x) kills ``y``; ``x ⊥_{B^eps} y`` iff
    some ``f`` in J(x) has ``|f(y)| <= eps ||y||``. Since ``f(y)`` ranges over
    an interval as ``f`` runs through the polytope J(x), only its end points
    (attained at vertices) are needed.
    """
    return dual_margin(space, relation, x, y) >= -tol


def beps_to_deps(beta: float) -> float:
    """Dragomir level ``2 sqrt(beta - beta^2)`` implied by Chmielinski-``beta``.

    Uses ``||x + t y|| >= (1 - 2 beta) ||x||`` for ``beta`` in [0, 1/2).
    """
    if not (0.0 <= beta < 0.5):
        raise ArgumentError(f"beta must lie in [0, 1/2), got {beta}")
    return 2.0 * math.sqrt(beta - beta * beta)


# -- constructions ----------------------------------------------------------------


def orthogonal_partner(space: NormedSpace, x, z) -> np.ndarray:
    """``y = z - f(z) x`` with ``f`` the first vertex of J(x), so ``x ⊥_B y``.

    ``x`` must be a unit vector. The result is not normalized.
    """
    x = as_vector(x, space.dim)
    z = as_vector(z, space.dim, "z")
    if abs(space.norm(x) - 1.0) > 1e-9:
        raise ArgumentError("orthogonal_partner needs a unit x")
    f = space.support_set(x).vertices[0]
    y = z - (f @ z) * x
    if space.norm(y) <= 1e-12 * max(1.0, space.norm(z)):
        raise DegenerateError("z is parallel to x; the partner vanishes")
    return y


def isosceles_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    """``((x + y)/2, (x - y)/2)``: Isosceles-orthogonal whenever ``||x|| = ||y||``."""
    x = as_vector(x)
    y = as_vector(y, x.size, "y")
    if np.linalg.matrix_rank(np.vstack([x, y]), tol=1e-12 * max(np.abs(x).max(), np.abs(y).max(), 1e-300)) < 2:
        raise ArgumentError("isosceles_pair needs linearly independent x and y")
    return (x + y) / 2.0, (x - y) / 2.0


def _circle_points(space: NormedSpace, theta: np.ndarray) -> np.ndarray:
    P = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return P / space.norm(P)[:, None]


def roberts_witness_search(space: NormedSpace, x, grid: int = 10 ** 4, tol: float = TOL,
                           max_candidates: int = 16):
    """Look for a unit ``y`` with ``x ⊥_R y`` in a 2-D space.

    Scans ``grid`` angles of the unit circle, takes the local minima of the
    Roberts defect that fall below ``1e-6`` as candidates (at most
    ``max_candidates``), refines each by golden-section on the angle and
    returns the first (by angle) that passes :func:`holds`. Returns ``None``
    when no candidate survives.
    """
    if space.dim != 2:
        raise UnsupportedDimensionError("Roberts witness search runs on 2-D spaces only")
    x = as_vector(x, 2)
    if abs(space.norm(x) - 1.0) > 1e-9:
        raise ArgumentError("roberts_witness_search needs a unit x")
    dtheta = 2.0 * np.pi / grid
    theta = np.arange(grid) * dtheta
    Y = _circle_points(space, theta)
    D = _roberts_defect_chunked(space, x, Y)
    prev, nxt = np.roll(D, 1), np.roll(D, -1)
    local = np.flatnonzero((D <= prev) & (D <= nxt))
    if local.size == 0:
        return None
    local = local[np.argsort(D[local], kind="stable")][:max_candidates]
    found = []
    for k in local:
        lo, hi = theta[k] - dtheta, theta[k] + dtheta

        def defect(t, lo=lo):
            return _roberts_defect_chunked(space, x, _circle_points(space, t))

        t_best, d_best, _ = golden_section_batch(defect, np.array([lo]), np.array([hi]),
                                                 iterations_for(2 * dtheta, 1e-15),
                                                 extra=theta[k])
        if d_best[0] > ROBERTS_SCREEN:
            continue
        y = _circle_points(space, t_best)[0]
        if holds(space, ROBERTS, x, y, tol):
            found.append((float(np.mod(t_best[0], 2 * np.pi)), y))
    if not found:
        return None
    found.sort(key=lambda item: item[0])
    return found[0][1]


def _roberts_defect_chunked(space, x, Y, chunk=2048):
    out = np.empty(len(Y))
    X = np.broadcast_to(x, (min(chunk, len(Y)), space.dim))
    for s in range(0, len(Y), chunk):
        Yc = Y[s:s + chunk]
        out[s:s + chunk] = roberts_defect_batch(space, X[: len(Yc)], Yc)
    return out


# -- pair sampling ------------------------------------------------------------------


def _unit(space, X):
    return X / np.atleast_1d(space.norm(X))[:, None]


def _birkhoff_partners(space: NormedSpace, X: np.ndarray, Z: np.ndarray, F=None):
    if F is None:
        F = space.support_functional(X)
    Yr = Z - np.einsum("ij,ij->i", F, Z)[:, None] * X
    ok = np.atleast_1d(space.norm(Yr)) > 1e-9 * np.atleast_1d(space.norm(Z))
    return Yr, ok


def _structured_partners(space: NormedSpace, x: np.ndarray):
    """Birkhoff partners of a fixed ``x``: every vertex of J(x) against ``±e_k``."""
    V = space.support_set(x).vertices
    E = np.vstack([np.eye(space.dim), -np.eye(space.dim)])
    F = np.repeat(V, len(E), axis=0)
    Z = np.tile(E, (len(V), 1))
    Y, ok = _birkhoff_partners(space, np.broadcast_to(x, Z.shape), Z, F)
    return Y[ok]


def _unit_isosceles_partner(space: NormedSpace, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    # h(phi) = ||u + v|| - ||u - v|| with v on the arc from u (h = 2) to -u (h = -2).
    lo = np.zeros(len(U))
    hi = np.full(len(U), np.pi)

    def arc(phi):
        return _unit(space, np.cos(phi)[:, None] * U + np.sin(phi)[:, None] * W)

    for _ in range(60):
        mid = 0.5 * (lo + hi)
        Vm = arc(mid)
        pos = space.norm(U + Vm) - space.norm(U - Vm) > 0
        lo, hi = np.where(pos, mid, lo), np.where(pos, hi, mid)
    return arc(0.5 * (lo + hi))


def sample_ortho_pairs(space: NormedSpace, relation: Relation, seed, count: int, *,
                       x=None, max_attempts: int | None = None, tol: float = TOL):
    """Draw ``count`` pairs ``(x_k, y_k)`` with ``x_k ⊥ y_k`` for ``relation``.

    Returns two arrays of shape ``(count, dim)``. ``x`` pins the first member
    (the local case); otherwise it is a random unit vector.

    * Birkhoff: ``y = z - f(z) x`` with ``f`` the first vertex of J(x). With a
      pinned ``x`` the structured partners (every vertex of J(x) against
      ``±e_k``) come first, then random ``z`` and random ``f`` in J(x).
    * Isosceles: ``((a + b)/2, (a - b)/2)`` for random unit ``a, b``; both
      members have norm at most 1 but are not normalized.
    * Unit-isosceles: unit ``u`` and a unit ``v`` in a random plane through
      ``u`` with ``||u + v|| = ||u - v||``, found by bisection along the arc.
    * Dragomir / Chmielinski: rejection sampling against :func:`holds` from
      proposals mixing Birkhoff partners, partners tilted towards ``x`` and
      uniform directions.
    * Roberts: in Euclidean spaces of any dimension Roberts is ordinary
      orthogonality. Other planes admit Roberts pairs only along axes of
      isometric reflections, so :func:`roberts_witness_search` runs on the
      coordinate axes, diagonals and (polyhedral) ball vertices and edge
      midpoints, and the hits are reused with random signs.

    Raises :class:`SamplingExhaustedError` after ``max_attempts`` rejected
    proposals (default ``1e6``; for Roberts, after ``max_attempts`` witness
    searches or when no candidate direction has a partner).
    """
    if count < 1:
        raise ArgumentError("count must be >= 1")
    rng = np.random.default_rng(seed)
    n = space.dim
    fixed = None if x is None else as_vector(x, n)
    if fixed is not None and abs(space.norm(fixed) - 1.0) > 1e-9:
        raise ArgumentError("the pinned x must be a unit vector")

    def draw_x(m):
        if fixed is not None:
            return np.repeat(fixed[None, :], m, axis=0)
        return space.sample_sphere(rng, m)

    tag = relation.tag
    if tag == "birkhoff":
        return _sample_birkhoff(space, rng, count, fixed, draw_x)
    if tag == "isosceles":
        if fixed is not None:
            raise ArgumentError("pinned-x sampling is not available for isosceles pairs")
        A, B = space.sample_sphere(rng, count), space.sample_sphere(rng, count)
        return (A + B) / 2.0, (A - B) / 2.0
    if tag == "unit-isosceles":
        U = draw_x(count)
        W = rng.standard_normal((count, n))
        W = W - np.einsum("ij,ij->i", W, U)[:, None] * U
        return U, _unit_isosceles_partner(space, U, W)
    if tag == "roberts":
        return _sample_roberts(space, rng, count, fixed, max_attempts, tol)
    return _sample_rejection(space, relation, rng, count, draw_x,
                             MAX_ATTEMPTS if max_attempts is None else max_attempts, tol)


def _sample_birkhoff(space, rng, count, fixed, draw_x):
    n = space.dim
    if fixed is None:
        Xs, Ys = [], []
        got = 0
        while got < count:
            m = count - got
            X = draw_x(m)
            Y, ok = _birkhoff_partners(space, X, rng.standard_normal((m, n)))
            Xs.append(X[ok])
            Ys.append(Y[ok])
            got += int(ok.sum())
        return np.vstack(Xs)[:count], _unit(space, np.vstack(Ys)[:count])
    structured = _structured_partners(space, fixed)[:count]
    m = count - len(structured)
    parts = [structured]
    V = space.support_set(fixed).vertices
    while m > 0:
        Z = rng.standard_normal((m, n))
        W = rng.dirichlet(np.ones(len(V)), size=m)
        if len(V) > 1:
            # half from the first vertex, half from random points of J(x)
            F = np.where((np.arange(m) % 2 == 0)[:, None], V[0], W @ V)
        else:
            F = np.repeat(V, m, axis=0)
        Y, ok = _birkhoff_partners(space, np.repeat(fixed[None, :], m, axis=0), Z, F)
        parts.append(Y[ok])
        m -= int(ok.sum())
    Y = np.vstack(parts)[:count]
    return np.repeat(fixed[None, :], count, axis=0), _unit(space, Y)


def _sample_rejection(space, relation, rng, count, draw_x, max_attempts, tol):
    n = space.dim
    Xs, Ys = [], []
    got = attempts = 0
    while got < count:
        if attempts >= max_attempts:
            raise SamplingExhaustedError(
                f"rejection sampling for {relation} accepted {got}/{count} "
                f"after {attempts} attempts", attempts, got)
        m = min(max(2 * (count - got), 64), max_attempts - attempts)
        X = draw_x(m)
        P, ok = _birkhoff_partners(space, X, rng.standard_normal((m, n)))
        P = np.where(ok[:, None], P, rng.standard_normal((m, n)))
        P = _unit(space, P)
        mode = rng.integers(0, 4, size=m)
        t = rng.uniform(-1.0, 1.0, size=m)
        tilted = P + t[:, None] * X
        uniform = rng.standard_normal((m, n))
        Y = np.where((mode == 0)[:, None], P,
                     np.where((mode == 3)[:, None], uniform, tilted))
        bad = np.atleast_1d(space.norm(Y)) <= 1e-12
        Y[bad] = P[bad]
        Y = _unit(space, Y)
        acc = holds_batch(space, relation, X, Y, tol)
        Xs.append(X[acc])
        Ys.append(Y[acc])
        got += int(acc.sum())
        attempts += m
    return np.vstack(Xs)[:count], np.vstack(Ys)[:count]


def _sample_roberts(space, rng, count, fixed, max_attempts, tol):
    n = space.dim
    if space.is_euclidean:
        X = space.sample_sphere(rng, count) if fixed is None else np.repeat(fixed[None, :], count, axis=0)
        Y, ok = _birkhoff_partners(space, X, rng.standard_normal((count, n)))
        while not np.all(ok):
            Y2, ok2 = _birkhoff_partners(space, X[~ok], rng.standard_normal((int((~ok).sum()), n)))
            Y[~ok] = Y2
            ok[~ok] = ok2
        return X, _unit(space, Y)
    if n != 2:
        raise UnsupportedDimensionError("Roberts pairs are only sampled in 2-D or Euclidean spaces")
    limit = ROBERTS_MAX_ATTEMPTS if max_attempts is None else max_attempts
    if fixed is not None:
        y = roberts_witness_search(space, fixed, tol=tol)
        if y is None:
            raise SamplingExhaustedError(
                f"no Roberts partner exists for x = {fixed.tolist()} on the search grid", 1, 0)
        return np.repeat(fixed[None, :], count, axis=0), np.repeat(y[None, :], count, axis=0)
    # x ⊥_R y in a plane makes the reflection (x, y) -> (x, -y) an isometry, and a
    # non-Euclidean plane has finitely many of those, so random x almost never
    # has a partner. Search symmetric directions instead and reuse the hits.
    found = []
    for k, xk in enumerate(_roberts_candidates(space)):
        if k >= limit:
            break
        y = roberts_witness_search(space, xk, tol=tol)
        if y is not None:
            found.append((xk, y))
    if not found:
        raise SamplingExhaustedError(
            f"no Roberts pairs among {min(k + 1, limit)} symmetric directions", k + 1, 0)
    pick = rng.integers(len(found), size=count)
    sx = rng.choice([-1.0, 1.0], size=count)[:, None]
    sy = rng.choice([-1.0, 1.0], size=count)[:, None]
    X = np.array([found[i][0] for i in pick]) * sx
    Y = np.array([found[i][1] for i in pick]) * sy
    return X, Y


def _roberts_candidates(space):
    """Unit directions that can be axes of isometric reflections, one per +-pair."""
    D = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]]
    if space.kind == "poly":
        V = space.ball_vertices
        D += V.tolist() + ((V + np.roll(V, -1, axis=0)) / 2.0).tolist()
    out = []
    for d in _unit(space, np.array(D)):
        if not any(abs(d[0] * e[1] - d[1] * e[0]) < 1e-12 for e in out):
            out.append(d)
    return out
