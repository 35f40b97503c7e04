"""Finite-dimensional real normed spaces.

A :class:`NormedSpace` is one of

* ``lp``: the p-norm on R^n, ``1 <= p <= inf``;
* ``euclidean``: the 2-norm, with closed forms used wherever they exist;
* ``poly``: a polyhedral norm ``max_i |<a_i, x>|`` given by a finite list
  of functionals spanning the dual space.

Vectors are plain 1-D ``numpy`` arrays. Most methods also accept a stack of
vectors (shape ``(..., dim)``) and broadcast over the leading axes.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from .exceptions import ArgumentError, CapacityError

#: p-norms with p above this are evaluated as the max-norm.
LP_INF_CUTOFF = 64.0
#: l_inf distance below which two support functionals are the same vertex.
DEDUP_TOL = 1e-9
#: relative slack for deciding that a functional is active at a point.
ACTIVE_TOL = 1e-10
#: relative magnitude below which a coordinate counts as zero.
ZERO_TOL = 1e-12
MAX_L1_ZEROS = 20


def as_vector(x, dim: int | None = None, name: str = "x") -> np.ndarray:
    """Validate and convert ``x`` to a finite 1-D float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ArgumentError(f"{name} must be a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ArgumentError(f"{name} has non-finite entries")
    if dim is not None and v.size != dim:
        raise ArgumentError(f"{name} has dimension {v.size}, expected {dim}")
    return v


def basis_vector(dim: int, i: int) -> np.ndarray:
    """The standard basis vector ``e_i`` (0-based index)."""
    e = np.zeros(dim)
    e[i] = 1.0
    return e


@dataclass(frozen=True)
class SupportSet:
    """The set J(x) of norm-one functionals attaining ``f(x) = ||x||``.

    J(x) is the convex hull of the rows of ``vertices``.
    """

    point: np.ndarray
    vertices: np.ndarray

    @property
    def is_singleton(self) -> bool:
        return len(self.vertices) == 1

    def interval(self, y) -> tuple[float, float]:
        """Range ``[min f(y), max f(y)]`` of ``f(y)`` over J(x)."""
        vals = self.vertices @ np.asarray(y, dtype=float)
        return float(vals.min()), float(vals.max())


def _dedup_rows(rows: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    kept: list[np.ndarray] = []
    for r in rows:
        if not any(np.max(np.abs(r - k)) <= tol for k in kept):
            kept.append(r)
    return np.array(kept)


@dataclass(frozen=True)
class NormedSpace:
    """Description of a finite-dimensional real normed space.

    Use the constructors :meth:`lp`, :meth:`euclidean`, :meth:`polyhedral`
    or :func:`parse_space` rather than calling the class directly.
    """

    dim: int
    kind: str
    p: float = 2.0
    functionals: tuple = ()

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ArgumentError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.kind == "lp":
            if not (self.p >= 1.0):
                raise ArgumentError(f"p must satisfy 1 <= p <= inf, got {self.p}")
        elif self.kind == "euclidean":
            object.__setattr__(self, "p", 2.0)
        elif self.kind == "poly":
            A = np.asarray(self.functionals, dtype=float)
            if A.ndim != 2 or A.shape[1] != self.dim:
                raise ArgumentError("polyhedral functionals must be a list of dim-vectors")
            if not np.all(np.isfinite(A)):
                raise ArgumentError("polyhedral functionals must be finite")
            if A.shape[0] < self.dim or np.linalg.matrix_rank(A) < self.dim:
                raise ArgumentError("polyhedral functionals do not span the dual space; "
                                    "max |<a_i, x>| would only be a seminorm")
        else:
            raise ArgumentError(f"unknown space kind {self.kind!r}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def lp(cls, p: float, dim: int) -> "NormedSpace":
        return cls(dim=dim, kind="lp", p=float(p))

    @classmethod
    def euclidean(cls, dim: int) -> "NormedSpace":
        return cls(dim=dim, kind="euclidean")

    @classmethod
    def polyhedral(cls, functionals) -> "NormedSpace":
        A = np.atleast_2d(np.asarray(functionals, dtype=float))
        return cls(dim=A.shape[1], kind="poly", p=math.nan,
                   functionals=tuple(tuple(float(a) for a in row) for row in A))

    # -- derived data -------------------------------------------------------

    @property
    def effective_p(self) -> float:
        """The exponent actually used: huge p collapse to ``inf``."""
        if self.kind == "poly":
            return math.nan
        return math.inf if self.p > LP_INF_CUTOFF else self.p

    @property
    def dual_exponent(self) -> float:
        p = self.effective_p
        if p == 1.0:
            return math.inf
        if p == math.inf:
            return 1.0
        return p / (p - 1.0)

    @cached_property
    def A(self) -> np.ndarray:
        """Functional matrix of a polyhedral space (one functional per row)."""
        A = np.asarray(self.functionals, dtype=float)
        A.setflags(write=False)
        return A

    @cached_property
    def ball_vertices(self) -> np.ndarray:
        """Vertices of the unit ball of a 2-D polyhedral space, by angle."""
        if self.kind != "poly" or self.dim != 2:
            raise ArgumentError("unit-ball vertex enumeration is only exact for 2-D polyhedral spaces")
        A = self.A
        pts = []
        for i, j in itertools.combinations(range(len(A)), 2):
            M = A[[i, j]]
            if abs(np.linalg.det(M)) < 1e-14:
                continue
            for si, sj in itertools.product((1.0, -1.0), repeat=2):
                v = np.linalg.solve(M, [si, sj])
                if np.max(np.abs(A @ v)) <= 1.0 + 1e-12:
                    pts.append(v)
        V = _dedup_rows(np.array(pts), tol=1e-12)
        ang = np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * np.pi)
        V = V[np.argsort(ang, kind="stable")]
        V.setflags(write=False)
        return V

    @property
    def is_euclidean(self) -> bool:
        return self.kind == "euclidean" or (self.kind == "lp" and self.p == 2.0)

    def describe(self) -> str:
        """Text descriptor in the format accepted by :func:`parse_space`."""
        if self.kind == "euclidean":
            return f"euclidean:{self.dim}"
        if self.kind == "lp":
            p = "inf" if math.isinf(self.p) else f"{self.p:g}"
            return f"lp:{p}:{self.dim}"
        rows = ";".join(",".join(f"{a:.17g}" for a in row) for row in self.functionals)
        return f"poly:{self.dim}:[{rows}]"

    # -- norms --------------------------------------------------------------

    def _check(self, x, name="x"):
        X = np.asarray(x, dtype=float)
        if X.ndim == 0 or X.shape[-1] != self.dim:
            raise ArgumentError(f"{name} has trailing dimension {X.shape[-1:] or ()}, "
                                f"expected {self.dim}")
        return X

    def norm(self, x):
        """Norm of a vector, or of each vector along the last axis."""
        X = self._check(x)
        if self.kind == "poly":
            out = np.max(np.abs(X @ self.A.T), axis=-1)
        else:
            out = _lp_norm(X, self.effective_p)
        return float(out) if X.ndim == 1 else out

    def dual_norm(self, f):
        """``sup { f(x) : ||x|| <= 1 }`` under the standard pairing."""
        F = self._check(f, "f")
        if self.kind != "poly":
            out = _lp_norm(F, self.dual_exponent)
            return float(out) if F.ndim == 1 else out
        if F.ndim > 1:
            return np.array([self.dual_norm(row) for row in F.reshape(-1, self.dim)]).reshape(F.shape[:-1])
        if not np.any(F):
            return 0.0
        x = self.norming_vector(F)
        return float(F @ x)

    # -- support functionals --------------------------------------------------

    def support_set(self, x) -> SupportSet:
        """J(x) returned through its vertex list."""
        x = as_vector(x, self.dim)
        nx = self.norm(x)
        if nx == 0.0:
            raise ArgumentError("support set of the zero vector is undefined")
        p = self.effective_p
        if self.kind == "poly":
            vals = self.A @ x
            active = np.abs(vals) >= (1.0 - ACTIVE_TOL) * nx
            V = np.sign(vals[active])[:, None] * self.A[active]
        elif p == 1.0:
            zero = np.abs(x) <= ZERO_TOL * np.max(np.abs(x))
            z = int(zero.sum())
            if z > MAX_L1_ZEROS:
                raise CapacityError(f"l1 support set would have 2^{z} vertices")
            base = np.sign(x) * ~zero
            V = np.repeat(base[None, :], 2 ** z, axis=0)
            if z:
                V[:, zero] = np.array(list(itertools.product((1.0, -1.0), repeat=z)))
        elif p == math.inf:
            m = np.max(np.abs(x))
            idx = np.flatnonzero(np.abs(x) >= (1.0 - ACTIVE_TOL) * m)
            V = np.zeros((len(idx), self.dim))
            V[np.arange(len(idx)), idx] = np.sign(x[idx])
        else:
            V = _lp_support(x / nx, p)[None, :]
        if self.kind == "poly":
            V = _dedup_rows(V)
        V.setflags(write=False)
        return SupportSet(point=x, vertices=V)

    def support_functional(self, X):
        """First vertex of J(x) for each row of ``X`` (vectorized).

        Agrees with ``support_set(x).vertices[0]`` row by row.
        """
        X = self._check(X)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        nx = np.atleast_1d(self.norm(X))
        if np.any(nx == 0.0):
            raise ArgumentError("support functional of the zero vector is undefined")
        p = self.effective_p
        if self.kind == "poly":
            vals = X @ self.A.T
            active = np.abs(vals) >= (1.0 - ACTIVE_TOL) * nx[:, None]
            first = np.argmax(active, axis=1)
            F = np.sign(vals[np.arange(len(X)), first])[:, None] * self.A[first]
        elif p == 1.0:
            zero = np.abs(X) <= ZERO_TOL * np.max(np.abs(X), axis=1, keepdims=True)
            F = np.where(zero, 1.0, np.sign(X))
        elif p == math.inf:
            m = np.max(np.abs(X), axis=1, keepdims=True)
            first = np.argmax(np.abs(X) >= (1.0 - ACTIVE_TOL) * m, axis=1)
            F = np.zeros_like(X)
            F[np.arange(len(X)), first] = np.sign(X[np.arange(len(X)), first])
        else:
            F = _lp_support(X / nx[:, None], p)
        return F[0] if single else F

    def is_smooth_point(self, x) -> bool:
        return self.support_set(x).is_singleton

    # -- attainment ----------------------------------------------------------

    def norming_vector(self, f) -> np.ndarray:
        """A unit vector ``x`` with ``f(x) = ||f||_*``.

        Ties are broken towards the lowest coordinate index (l1) or the first
        unit-ball vertex by angle (2-D polyhedral).
        """
        f = as_vector(f, self.dim, "f")
        if not np.any(f):
            raise ArgumentError("the zero functional has no norming vector")
        p = self.effective_p
        if self.kind == "poly":
            return self._poly_norming_vector(f)
        if p == 1.0:
            k = int(np.argmax(np.abs(f)))
            x = np.zeros(self.dim)
            x[k] = np.sign(f[k])
            return x
        if p == math.inf:
            return np.where(f >= 0, 1.0, -1.0)
        q = self.dual_exponent
        g = np.abs(f) / np.max(np.abs(f))
        x = np.sign(f) * g ** (q - 1.0)
        return x / self.norm(x)

    def _poly_norming_vector(self, f: np.ndarray) -> np.ndarray:
        if self.dim == 2:
            V = self.ball_vertices
            vals = V @ f
            k = int(np.flatnonzero(vals >= vals.max() - 1e-13 * np.max(np.abs(f)))[0])
            return V[k].copy()
        A = self.A
        res = linprog(-f, A_ub=np.vstack([A, -A]), b_ub=np.ones(2 * len(A)),
                      bounds=[(None, None)] * self.dim, method="highs")
        if res.status != 0:
            raise ArgumentError(f"linear program for the polyhedral dual norm failed: {res.message}")
        x = _polish_vertex(A, res.x, f)
        return x / self.norm(x)

    # -- sampling ------------------------------------------------------------

    def sample_sphere(self, seed, count: int) -> np.ndarray:
        """``count`` unit vectors from normalized Gaussian draws (one per row).

        ``seed`` is an integer or a ``numpy.random.Generator``.
        """
        if count < 1:
            raise ArgumentError("count must be >= 1")
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((count, self.dim))
        return G / np.atleast_1d(self.norm(G))[:, None]


def _lp_norm(X: np.ndarray, p: float):
    A = np.abs(X)
    if p == math.inf:
        return np.max(A, axis=-1)
    if p == 1.0:
        return np.sum(A, axis=-1)
    if p == 2.0:
        return np.sqrt(np.sum(A * A, axis=-1))
    m = np.max(A, axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.sum((A / safe[..., None]) ** p, axis=-1) ** (1.0 / p)


def _lp_support(U: np.ndarray, p: float) -> np.ndarray:
    # U is unit in the p-norm, so ||U||^{p-1} = 1.
    return np.sign(U) * np.abs(U) ** (p - 1.0)


def _polish_vertex(A: np.ndarray, x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Snap an LP solution onto the exact vertex defined by its active rows."""
    vals = A @ x
    active = np.flatnonzero(np.abs(vals) >= 1.0 - 1e-7)
    if len(active) < A.shape[1]:
        return x
    M = A[active]
    if np.linalg.matrix_rank(M) < A.shape[1]:
        return x
    sol, *_ = np.linalg.lstsq(M, np.sign(vals[active]), rcond=None)
    if np.max(np.abs(A @ sol)) <= 1.0 + 1e-12 and f @ sol >= f @ x - 1e-9:
        return sol
    return x


# -- text formats -----------------------------------------------------------------

_POLY_RE = re.compile(r"^poly:(\d+):\[(.*)\]$")


def parse_space(desc: str) -> NormedSpace:
    """Parse ``lp:<p>:<dim>``, ``euclidean:<dim>`` or ``poly:<dim>:[a11,a12;...]``."""
    desc = desc.strip()
    try:
        m = _POLY_RE.match(desc)
        if m:
            dim = int(m.group(1))
            A = parse_matrix(m.group(2))
            if A.shape[1] != dim:
                raise ArgumentError(f"polyhedral functionals have {A.shape[1]} columns, expected {dim}")
            return NormedSpace.polyhedral(A)
        parts = desc.split(":")
        if parts[0] == "euclidean" and len(parts) == 2:
            return NormedSpace.euclidean(int(parts[1]))
        if parts[0] == "lp" and len(parts) == 3:
            p = math.inf if parts[1].lower() in ("inf", "infinity") else float(parts[1])
            return NormedSpace.lp(p, int(parts[2]))
    except ValueError as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"malformed space descriptor {desc!r}: {exc}") from exc
    raise ArgumentError(f"malformed space descriptor {desc!r}")


def parse_vector(text: str) -> np.ndarray:
    """Parse comma-separated decimals into a vector."""
    try:
        return as_vector([float(t) for t in text.split(",")])
    except ValueError as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"malformed vector {text!r}") from exc


def parse_matrix(text: str) -> np.ndarray:
    """Parse rows separated by ``;`` and entries by ``,`` (e.g. ``1,2;0,1``)."""
    try:
        rows = [[float(t) for t in row.split(",")] for row in text.strip().split(";")]
    except ValueError as exc:
        raise ArgumentError(f"malformed matrix {text!r}") from exc
    if len({len(r) for r in rows}) != 1:
        raise ArgumentError(f"ragged matrix {text!r}")
    M = np.array(rows)
    if not np.all(np.isfinite(M)):
        raise ArgumentError("matrix entries must be finite")
    return M
