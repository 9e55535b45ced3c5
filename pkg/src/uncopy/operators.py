"""Dense operators on composite spaces and partially specified unitaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .hilbert import (
    DEGENERATE_NORM,
    QUBIT,
    TOL,
    DimensionError,
    Ket,
    NormalizationError,
    SeedLike,
    ShapeLike,
    SpaceShape,
    as_generator,
    check_coefficients,
)

# canonical extension vectors whose residual falls below this are skipped;
# some canonical vector always has residual >= 1/sqrt(dim)
_EXTENSION_THRESHOLD = 1e-8


class InfeasibleSpecError(ValueError):
    """The requested map does not preserve inner products."""


class CompletionError(RuntimeError):
    """A completed unitary failed its own post-construction check."""


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    shape: SpaceShape

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        m.setflags(write=False)
        shape = SpaceShape.of(self.shape)
        if m.ndim != 2 or m.shape != (shape.total, shape.total):
            raise DimensionError(
                f"matrix of shape {m.shape} does not act on a space of shape {shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shape", shape)

    @property
    def dim(self) -> int:
        return self.shape.total

    @property
    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.shape)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return compose(self, other)
        if isinstance(other, Ket):
            return apply(self, other)
        return NotImplemented

    def __repr__(self):
        return f"Operator(dim={self.dim}, shape={self.shape})"


def identity(shape: ShapeLike) -> Operator:
    shape = SpaceShape.of(shape)
    return Operator(np.eye(shape.total), shape)


def apply(U: Operator, x: Ket) -> Ket:
    if U.dim != x.dim:
        raise DimensionError(f"operator of dimension {U.dim} applied to ket of dimension {x.dim}")
    return Ket(U.matrix @ x.amplitudes, U.shape)


def compose(A: Operator, B: Operator) -> Operator:
    """A after B, i.e. the matrix product A @ B."""
    if A.dim != B.dim:
        raise DimensionError(f"cannot compose dimensions {A.dim} and {B.dim}")
    return Operator(A.matrix @ B.matrix, A.shape)


def tensor_op(parts: Sequence[Operator]) -> Operator:
    parts = list(parts)
    if not parts:
        raise DimensionError("tensor product of an empty operator list")
    matrix = reduce(np.kron, (p.matrix for p in parts))
    shape = reduce(lambda s, t: s + t, (p.shape for p in parts))
    return Operator(matrix, shape)


def is_unitary(U: Operator, tol: float = TOL) -> tuple[bool, float]:
    m = U.matrix
    deviation = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    return deviation < tol, deviation


def haar_random_unitary(dim: int, seed: SeedLike = None, shape: ShapeLike | None = None) -> Operator:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    rng = as_generator(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Operator(q, shape if shape is not None else (dim,))


# -- named gates ------------------------------------------------------------

PAULI_X = Operator(np.array([[0, 1], [1, 0]]), QUBIT)


def cnot() -> Operator:
    """Controlled-NOT on two qubits; the first factor is the control."""
    m = np.array([[1, 0, 0, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0]])
    return Operator(m, (2, 2))


def swap_factors(shape: ShapeLike, i: int, j: int) -> Operator:
    """Permutation operator exchanging tensor factors ``i`` and ``j``."""
    shape = SpaceShape.of(shape)
    n = shape.nfactors
    for k in (i, j):
        if not 0 <= k < n:
            raise DimensionError(f"factor index {k} out of range for {n} factors")
    if shape.factor_dims[i] != shape.factor_dims[j]:
        raise DimensionError(
            f"cannot swap factors of dimension {shape.factor_dims[i]} and {shape.factor_dims[j]}")
    axes = list(range(n))
    axes[i], axes[j] = axes[j], axes[i]
    source = np.arange(shape.total).reshape(shape.factor_dims).transpose(axes).reshape(-1)
    m = np.zeros((shape.total, shape.total))
    m[np.arange(shape.total), source] = 1.0
    return Operator(m, shape)


def rotation_to_basis(alpha: complex, beta: complex, target: int, tol: float = TOL) -> Operator:
    """Single-qubit unitary R with R (alpha H + beta V) equal to the basis state ``target``."""
    check_coefficients(alpha, beta, tol)
    if target not in (0, 1):
        raise ValueError(f"target must be 0 or 1, got {target}")
    onto = [np.conj(alpha), np.conj(beta)]
    away = [-beta, alpha]
    rows = [onto, away] if target == 0 else [away, onto]
    return Operator(np.array(rows, dtype=np.complex128), QUBIT)


# -- partial maps -------------------------------------------------------------

@dataclass(frozen=True)
class PartialMapSpec:
    """Ordered constraint pairs ``input -> output`` a unitary must satisfy."""

    pairs: tuple[tuple[Ket, Ket], ...]
    shape: SpaceShape

    def __post_init__(self):
        pairs = tuple((x, y) for x, y in self.pairs)
        shape = SpaceShape.of(self.shape)
        for x, y in pairs:
            if x.dim != shape.total or y.dim != shape.total:
                raise DimensionError(
                    f"constraint pair of dimensions ({x.dim}, {y.dim}) in a space of dimension {shape.total}")
        if pairs and all(x.norm() < DEGENERATE_NORM for x, _ in pairs):
            raise NormalizationError("every constraint input is numerically zero")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "shape", shape)

    def __len__(self):
        return len(self.pairs)

    @property
    def inputs(self) -> np.ndarray:
        return np.column_stack([x.amplitudes for x, _ in self.pairs])

    @property
    def outputs(self) -> np.ndarray:
        return np.column_stack([y.amplitudes for _, y in self.pairs])


@dataclass(frozen=True, eq=False)
class GramReport:
    feasible: bool
    input_gram: np.ndarray
    output_gram: np.ndarray
    max_residual: float
    rank: int
    dependency_residual: float = field(default=0.0)


def gram_feasibility(spec: PartialMapSpec, tol: float = TOL) -> GramReport:
    """Decide whether some unitary satisfies every pair of ``spec``.

    Such a unitary exists iff the input and output Gram matrices agree and
    every linear dependency among the inputs holds among the outputs as well.
    """
    if not len(spec):
        raise ValueError("empty partial map")
    X, Y = spec.inputs, spec.outputs
    g_in = X.conj().T @ X
    g_out = Y.conj().T @ Y
    residual = float(np.max(np.abs(g_in - g_out)))

    _, s, vh = np.linalg.svd(X)
    rank = int(np.sum(s > DEGENERATE_NORM))
    null = vh[rank:].conj().T
    dependency = float(np.max(np.linalg.norm(Y @ null, axis=0))) if null.size else 0.0

    feasible = residual < tol and dependency < tol
    return GramReport(feasible, g_in, g_out, residual, rank, dependency)


def _project_out(v: np.ndarray, basis: list[np.ndarray], images: list[np.ndarray] | None = None,
                 w: np.ndarray | None = None):
    # two passes of modified Gram-Schmidt; the same coefficients act on w
    for _ in range(2):
        for k, q in enumerate(basis):
            c = np.vdot(q, v)
            v = v - c * q
            if w is not None:
                w = w - c * images[k]
    return v, w


def _extend(basis: list[np.ndarray], dim: int) -> list[np.ndarray]:
    basis = list(basis)
    for m in range(dim):
        if len(basis) == dim:
            break
        e = np.zeros(dim, dtype=np.complex128)
        e[m] = 1.0
        r, _ = _project_out(e, basis)
        n = np.linalg.norm(r)
        if n > _EXTENSION_THRESHOLD:
            basis.append(r / n)
    if len(basis) != dim:
        raise CompletionError(f"basis extension stalled at {len(basis)} of {dim} vectors")
    return basis


def complete_to_unitary(spec: PartialMapSpec, tol: float = TOL) -> Operator:
    """Build a unitary that maps every input of ``spec`` to its output.

    Inputs are orthonormalized by modified Gram-Schmidt with one
    re-orthogonalization pass; the same combinations are applied to the
    outputs. Both families are then extended to full bases with canonical
    vectors (lowest index first) and the unitary is the sum of outer products
    of matched basis vectors. The result is checked against every pair.
    """
    report = gram_feasibility(spec, tol)
    if not report.feasible:
        raise InfeasibleSpecError(
            f"constraints do not preserve inner products (gram residual "
            f"{report.max_residual:.3g}, dependency residual {report.dependency_residual:.3g})")

    dim = spec.shape.total
    q_in: list[np.ndarray] = []
    q_out: list[np.ndarray] = []
    for x, y in spec.pairs:
        r, s = _project_out(x.amplitudes, q_in, q_out, y.amplitudes)
        n = np.linalg.norm(r)
        if n < DEGENERATE_NORM:
            if np.linalg.norm(s) >= tol:
                raise InfeasibleSpecError(
                    "a dependent constraint input maps to an output outside the matching span")
            continue
        q_in.append(r / n)
        q_out.append(s / n)

    if q_out:
        # nearest orthonormal family (polar factor) to absorb round-off
        w, _, vh = np.linalg.svd(np.column_stack(q_out), full_matrices=False)
        q_out = list((w @ vh).T)

    full_in = np.column_stack(_extend(q_in, dim))
    full_out = np.column_stack(_extend(q_out, dim))
    U = Operator(full_out @ full_in.conj().T, spec.shape)

    ok, deviation = is_unitary(U, tol)
    if not ok:
        raise CompletionError(f"completed operator is not unitary (deviation {deviation:.3g})")
    for k, (x, y) in enumerate(spec.pairs):
        miss = apply(U, x).distance(y)
        if miss >= tol:
            raise CompletionError(f"constraint {k} reproduced only to {miss:.3g}")
    return U


def acts_as_swap_on(U: Operator, shape: ShapeLike, i: int, j: int, probes: Sequence[Ket],
                    tol: float = TOL) -> tuple[bool, float]:
    """Compare U with the factor exchange (i, j) on ``probes``, up to one global phase.

    The phase is fixed by the first probe whose two images overlap
    non-trivially; the deviation is the largest probe-wise distance.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("acts_as_swap_on needs at least one probe")
    W = swap_factors(shape, i, j)
    pairs = [(apply(U, p), apply(W, p)) for p in probes]
    phase = 1.0 + 0j
    for u, w in pairs:
        overlap = np.vdot(w.amplitudes, u.amplitudes)
        if abs(overlap) > DEGENERATE_NORM:
            phase = overlap / abs(overlap)
            break
    deviation = max(float(np.linalg.norm(u.amplitudes - phase * w.amplitudes)) for u, w in pairs)
    return deviation < tol, deviation
