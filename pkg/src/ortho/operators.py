"""Linear operators between normed spaces.

Norm and lower-bound estimates use exact routes whenever the geometry
allows it (polytope unit balls, max-norm codomains, Euclidean pairs, and
inversion for square injective maps) and fall back to sphere sampling with
local refinement otherwise. Every estimate carries a ``method`` tag.

Preservation constants are empirical: the largest minimal Dragomir constant
seen over images of sampled orthogonal pairs. They under-approximate the
supremum over all pairs and are never extrapolated.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ArgumentError, DegenerateBoundError
from .normed_space import NormedSpace, as_vector
from .orthogonality import BIRKHOFF, TOL, Relation, dragomir_eps_batch, sample_ortho_pairs

SAMPLES = 10 ** 4
REFINE_STEPS = 200
RANK_TOL = 1e-10
#: l_inf domains up to this dimension are handled by enumerating sign vectors.
MAX_SIGN_ENUM = 12


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A matrix acting from ``domain`` to ``codomain`` (shape codomain.dim x domain.dim)."""

    matrix: np.ndarray
    domain: NormedSpace
    codomain: NormedSpace

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim == 1 and self.codomain.dim == 1:
            M = M[None, :]
        if M.shape != (self.codomain.dim, self.domain.dim):
            raise ArgumentError(f"matrix shape {M.shape} does not match spaces "
                                f"({self.codomain.dim}, {self.domain.dim})")
        if not np.all(np.isfinite(M)):
            raise ArgumentError("matrix entries must be finite")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)

    @property
    def rank(self) -> int:
        s = self.singular_values
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > RANK_TOL * s[0]))

    @property
    def injective(self) -> bool:
        return self.rank == self.domain.dim

    def kernel_vector(self):
        """A unit (domain norm) vector of the kernel, or ``None``."""
        if self.injective:
            return None
        _, _, Vt = np.linalg.svd(self.matrix)
        k = Vt[-1]
        return k / self.domain.norm(k)

    def scaled(self, c: float) -> "LinearOperator":
        return LinearOperator(c * self.matrix, self.domain, self.codomain)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.matrix + other.matrix, self.domain, self.codomain)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.matrix - other.matrix, self.domain, self.codomain)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    witness: np.ndarray
    method: str


@dataclass(frozen=True)
class OperatorProfile:
    """Deviation of ``T / scale`` from an isometry.

    ``(1 - delta1) ||x|| <= ||T x|| / scale <= (1 + delta2) ||x||``.
    """

    op_norm: float
    lower_bound: float
    injective: bool
    delta1: float
    delta2: float
    scale: float
    norm_method: str = "exact"
    lower_method: str = "exact"


@dataclass(frozen=True)
class PreservationReport:
    """Empirical preservation (or reversal) constant of an operator.

    ``eta_hat`` is a lower estimate of the true supremum.
    """

    relation: Relation
    direction: str
    eta_hat: float
    worst_pair: tuple
    samples_used: int
    skipped_degenerate: int
    local_at: np.ndarray | None = None
    x_image_zero: bool = False
    note: str = field(default="eta_hat is an empirical maximum, a lower estimate of the supremum")


# -- norm and lower bound ------------------------------------------------------


def _domain_vertices(space: NormedSpace):
    """Unit-ball vertices when the ball is a polytope we can enumerate."""
    p = space.effective_p
    if space.kind == "poly" and space.dim == 2:
        return space.ball_vertices
    if space.kind == "lp" and p == 1.0:
        return np.vstack([np.eye(space.dim), -np.eye(space.dim)])
    if space.kind == "lp" and p == math.inf and space.dim <= MAX_SIGN_ENUM:
        return np.array(list(itertools.product((1.0, -1.0), repeat=space.dim)))
    return None


def _exact_norm(M: np.ndarray, domain: NormedSpace, codomain: NormedSpace):
    """``sup ||M x||`` over the domain unit ball when an exact route exists."""
    if np.all(M == 0):
        return 0.0, _first_unit(domain)
    if domain.is_euclidean and codomain.is_euclidean:
        _, s, Vt = np.linalg.svd(M)
        return float(s[0]), Vt[0]
    V = _domain_vertices(domain)
    if V is not None:
        vals = np.atleast_1d(codomain.norm(V @ M.T))
        k = int(np.argmax(vals))
        return float(vals[k]), V[k].copy()
    if codomain.kind == "lp" and codomain.effective_p == math.inf:
        duals = [domain.dual_norm(row) if np.any(row) else 0.0 for row in M]
        k = int(np.argmax(duals))
        return float(duals[k]), domain.norming_vector(M[k]) if duals[k] > 0 else _first_unit(domain)
    return None


def _first_unit(space):
    e = np.zeros(space.dim)
    e[0] = 1.0
    return e / space.norm(e)


def _sphere_search(T: LinearOperator, seed, samples, steps, sign):
    """Optimize ``sign * ||T x||`` over the domain sphere (sign=+1 maximizes)."""
    dom, cod = T.domain, T.codomain
    X = dom.sample_sphere(seed, samples)
    vals = sign * np.atleast_1d(cod.norm(T(X)))
    k = int(np.argmax(vals))
    x, best = X[k], vals[k]
    n = dom.dim
    E = np.vstack([np.eye(n), -np.eye(n)])
    step = 0.1
    for _ in range(steps):
        C = x[None, :] + step * E
        C = C / np.atleast_1d(dom.norm(C))[:, None]
        cv = sign * np.atleast_1d(cod.norm(T(C)))
        j = int(np.argmax(cv))
        if cv[j] > best:
            x, best = C[j], cv[j]
        else:
            step *= 0.5
            if step < 1e-15:
                break
    return float(sign * best), x


def operator_norm_estimate(T: LinearOperator, seed=0, samples=SAMPLES,
                           refine_steps=REFINE_STEPS) -> NormEstimate:
    exact = _exact_norm(T.matrix, T.domain, T.codomain)
    if exact is not None:
        return NormEstimate(exact[0], exact[1], "exact")
    value, x = _sphere_search(T, seed, samples, refine_steps, +1.0)
    return NormEstimate(value, x, "sampled")


def operator_norm(T: LinearOperator, seed=0, samples=SAMPLES, refine_steps=REFINE_STEPS) -> float:
    """``||T|| = sup_{||x|| = 1} ||T x||``."""
    return operator_norm_estimate(T, seed, samples, refine_steps).value


def lower_bound_estimate(T: LinearOperator, seed=0, samples=SAMPLES,
                         refine_steps=REFINE_STEPS) -> NormEstimate:
    if not T.injective:
        return NormEstimate(0.0, T.kernel_vector(), "exact")
    dom, cod = T.domain, T.codomain
    if dom.is_euclidean and cod.is_euclidean:
        _, s, Vt = np.linalg.svd(T.matrix)
        return NormEstimate(float(s[dom.dim - 1]), Vt[dom.dim - 1], "exact")
    if dom.dim == cod.dim:
        Minv = np.linalg.inv(T.matrix)
        exact = _exact_norm(Minv, cod, dom)
        if exact is not None:
            inv_norm, y = exact
            x = Minv @ y
            return NormEstimate(1.0 / inv_norm, x / dom.norm(x), "exact")
    value, x = _sphere_search(T, seed, samples, refine_steps, -1.0)
    return NormEstimate(value, x, "sampled")


def lower_bound(T: LinearOperator, seed=0, samples=SAMPLES, refine_steps=REFINE_STEPS) -> float:
    """``m(T) = inf_{||x|| = 1} ||T x||``; an upper estimate when sampled."""
    return lower_bound_estimate(T, seed, samples, refine_steps).value


def isometry_deviation(T: LinearOperator, seed=0, samples=SAMPLES) -> OperatorProfile:
    """Profile of ``T`` normalized by ``scale = ||T||`` (so ``delta2 = 0``)."""
    hi = operator_norm_estimate(T, seed, samples)
    if hi.value == 0.0:
        raise ArgumentError("the zero operator has no isometry profile")
    lo = lower_bound_estimate(T, seed, samples)
    delta1 = min(1.0, max(0.0, 1.0 - lo.value / hi.value))
    return OperatorProfile(op_norm=hi.value, lower_bound=lo.value, injective=T.injective,
                           delta1=delta1, delta2=0.0, scale=hi.value,
                           norm_method=hi.method, lower_method=lo.method)


# -- preservation constants --------------------------------------------------------


def image_eta(T: LinearOperator, X, Y, reverse: bool = False):
    """Minimal Dragomir constants of image pairs ``(T x, T y)`` (swapped if ``reverse``).

    Returns ``(eps, degenerate)``; degenerate rows have a zero image and get
    ``eps = nan``.
    """
    TX, TY = T(np.atleast_2d(X)), T(np.atleast_2d(Y))
    cod = T.codomain
    scale = max(float(np.abs(T.matrix).max()), 1e-300)
    zero = (np.atleast_1d(cod.norm(TX)) <= 1e-12 * scale) | \
           (np.atleast_1d(cod.norm(TY)) <= 1e-12 * scale)
    eps = np.full(len(TX), np.nan)
    live = ~zero
    if np.any(live):
        A, B = (TY[live], TX[live]) if reverse else (TX[live], TY[live])
        eps[live] = dragomir_eps_batch(cod, A, B)
    return eps, zero


def _report(T, relation, direction, X, Y, local_at=None):
    eps, zero = image_eta(T, X, Y, reverse=(direction == "reverse"))
    if np.all(zero):
        eta, k = 0.0, 0
    else:
        k = int(np.nanargmax(eps))
        eta = float(eps[k])
    x_zero = False
    if local_at is not None:
        x_zero = bool(T.codomain.norm(T(local_at)) <= 1e-12 * max(float(np.abs(T.matrix).max()), 1e-300))
    return PreservationReport(relation=relation, direction=direction, eta_hat=eta,
                              worst_pair=(X[k].copy(), Y[k].copy()), samples_used=len(X),
                              skipped_degenerate=int(zero.sum()), local_at=local_at,
                              x_image_zero=x_zero)


def preservation_constant(T: LinearOperator, relation: Relation = BIRKHOFF, seed=0,
                          count: int = SAMPLES, tol: float = TOL) -> PreservationReport:
    """Largest ``eps(T x, T y)`` over ``count`` sampled pairs ``x ⊥ y``."""
    X, Y = sample_ortho_pairs(T.domain, relation, seed, count, tol=tol)
    return _report(T, relation, "preserve", X, Y)


def reversal_constant(T: LinearOperator, relation: Relation = BIRKHOFF, seed=0,
                      count: int = SAMPLES, tol: float = TOL) -> PreservationReport:
    """Largest ``eps(T y, T x)`` over ``count`` sampled pairs ``x ⊥ y``."""
    X, Y = sample_ortho_pairs(T.domain, relation, seed, count, tol=tol)
    return _report(T, relation, "reverse", X, Y)


def local_preservation_constant(T: LinearOperator, relation: Relation, x, seed=0,
                                count: int = SAMPLES, reverse: bool = False,
                                tol: float = TOL) -> PreservationReport:
    """As :func:`preservation_constant` with the first member pinned at ``x``."""
    x = as_vector(x, T.domain.dim)
    X, Y = sample_ortho_pairs(T.domain, relation, seed, count, x=x, tol=tol)
    return _report(T, relation, "reverse" if reverse else "preserve", X, Y, local_at=x)


def local_reversal_constant(T, relation, x, seed=0, count=SAMPLES, tol=TOL):
    return local_preservation_constant(T, relation, x, seed, count, reverse=True, tol=tol)


# -- closed-form bounds ---------------------------------------------------------------


def _clause_factor(kind: Relation) -> float:
    """Squared lower factor the relation puts on ``||x + t y|| / ||x||``."""
    if kind.tag == "birkhoff":
        return 1.0
    if kind.tag == "dragomir":
        return 1.0 - kind.eps ** 2
    if kind.tag == "chmielinski":
        if kind.eps >= 0.5:
            raise ArgumentError("the Chmielinski clause needs beta in [0, 1/2)")
        return (1.0 - 2.0 * kind.eps) ** 2
    if kind.tag == "roberts":
        return 1.0
    raise ArgumentError(f"no closed-form eta bound for {kind}")


def _eta(ratio: float, factor: float) -> float:
    return math.sqrt(max(0.0, 1.0 - ratio * ratio * factor))


def isometry_eta_bound(kind: Relation, delta1: float, delta2: float) -> float:
    """Dragomir level guaranteed for images under a scaled ``eps``-isometry.

    ``eta = sqrt(1 - ((1 - d1)/(1 + d2))^2 c)`` with ``c = 1 - beta^2``
    (Dragomir-beta pairs), ``(1 - 2 beta)^2`` (Chmielinski-beta pairs) or
    ``1`` (Roberts pairs, both directions). Birkhoff is Dragomir at 0.
    """
    _check_deltas(delta1, delta2)
    return _eta((1.0 - delta1) / (1.0 + delta2), _clause_factor(kind))


def perturbed_eta_bound(kind: Relation, delta1: float, delta2: float, eps: float) -> float:
    """Same as :func:`isometry_eta_bound` for ``S`` with ``||S - T|| <= eps ||T||``."""
    _check_deltas(delta1, delta2)
    if not (0.0 <= eps < 1.0):
        raise ArgumentError(f"eps must lie in [0, 1), got {eps}")
    num = 1.0 - delta1 - eps * (1.0 + delta2)
    if num <= 0.0:
        raise DegenerateBoundError(
            f"1 - delta1 - eps (1 + delta2) = {num:.6g} <= 0: the bound is vacuous")
    return _eta(num / ((1.0 + delta2) * (1.0 + eps)), _clause_factor(kind))


def _check_deltas(delta1, delta2):
    if not (0.0 <= delta1 < 1.0):
        raise ArgumentError(f"delta1 must lie in [0, 1), got {delta1}")
    if delta2 < 0.0:
        raise ArgumentError(f"delta2 must be >= 0, got {delta2}")


def bounded_below_floor(eta: float) -> float:
    """``sqrt(1 - eta^2) / (12 + 3 sqrt(1 - eta^2))``.

    A nonzero operator preserving orthogonality at level ``eta`` satisfies
    ``||T z|| >= floor * ||T|| ||z||``.
    """
    if not (0.0 <= eta < 1.0):
        raise ArgumentError(f"eta must lie in [0, 1), got {eta}")
    s = math.sqrt(1.0 - eta * eta)
    return s / (12.0 + 3.0 * s)


def verify_floor(T: LinearOperator, eta: float, seed=0, count: int = SAMPLES):
    """Check ``||T x|| >= floor(eta) ||T|| ||x||`` on sphere samples.

    The lower-bound witness (a kernel vector when ``T`` is singular) is
    always among the tested points. Returns ``(passed, worst_ratio)``.
    """
    floor = bounded_below_floor(eta)
    op = operator_norm(T, seed)
    if op == 0.0:
        return False, 0.0
    X = T.domain.sample_sphere(seed, count)
    X = np.vstack([X, lower_bound_estimate(T, seed).witness[None, :]])
    ratios = np.atleast_1d(T.codomain.norm(T(X))) / (op * np.atleast_1d(T.domain.norm(X)))
    worst = float(ratios.min())
    return bool(worst >= floor), worst


# -- witnesses for non-injective operators --------------------------------------------------


def isosceles_kernel_witness(T: LinearOperator, x=None):
    """``((x + k)/2, (x - k)/2)`` for a unit kernel vector ``k``.

    Both images equal ``T x / 2``, so their Dragomir constant is the
    sentinel 1. Returns ``None`` for injective ``T``.
    """
    k = T.kernel_vector()
    if k is None:
        return None
    dom = T.domain
    if x is None:
        best = None
        for i in range(dom.dim):
            e = np.zeros(dom.dim)
            e[i] = 1.0
            e = e / dom.norm(e)
            if abs(abs(e @ k) - np.linalg.norm(k) * np.linalg.norm(e)) > 1e-9:
                img = T.codomain.norm(T(e))
                if best is None or img > best[0]:
                    best = (img, e)
        x = best[1]
    x = as_vector(x, dom.dim)
    return (x + k) / 2.0, (x - k) / 2.0


def birkhoff_kernel_witness(T: LinearOperator, basis) -> tuple | None:
    """A Birkhoff pair with parallel nonzero images, built from a kernel vector.

    ``basis`` (rows) must have property (*): each element is Birkhoff
    orthogonal to the span of the others. Writing a kernel vector as
    ``sum a_i x_i``, any ``i`` with ``a_i != 0`` and ``T x_i != 0`` gives
    ``x_i ⊥_B w = sum_{j != i} a_j x_j`` with ``T w = -a_i T x_i``.
    Returns ``(x_i, w)``, or ``None`` when ``T`` is injective or the kernel
    vector has no such component (e.g. it is itself a basis element).
    """
    k = T.kernel_vector()
    if k is None:
        return None
    B = np.asarray(basis, dtype=float)
    coeffs = np.linalg.solve(B.T, k)
    tol = 1e-12 * max(float(np.abs(T.matrix).max()), 1e-300)
    for i in np.argsort(-np.abs(coeffs), kind="stable"):
        if abs(coeffs[i]) < 1e-12:
            break
        if T.codomain.norm(T(B[i])) <= tol:
            continue
        w = k - coeffs[i] * B[i]
        if T.domain.norm(w) > 1e-12:
            return B[i].copy(), w / T.domain.norm(w)
    return None
