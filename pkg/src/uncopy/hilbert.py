"""Complex state vectors over tensor-product spaces.

Basis convention: qubit index 0 is H (the bit 0), index 1 is V (the bit 1).
Composite indices are big-endian over factors, so the first factor is the
most significant digit, matching ``numpy.kron`` ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

TOL = 1e-10
DEGENERATE_NORM = 1e-12

SeedLike = Union[int, np.random.Generator, None]


class DimensionError(ValueError):
    """Raised when vector lengths or factor shapes do not line up."""


class NormalizationError(ValueError):
    """Raised when a state must be (or must become) unit norm and cannot."""


@dataclass(frozen=True)
class SpaceShape:
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims:
            raise DimensionError("a space needs at least one factor")
        if any(d < 1 for d in dims):
            raise DimensionError(f"factor dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @classmethod
    def of(cls, shape: "ShapeLike") -> "SpaceShape":
        if isinstance(shape, SpaceShape):
            return shape
        if isinstance(shape, int):
            return cls((shape,))
        return cls(tuple(shape))

    @property
    def total(self) -> int:
        return math.prod(self.factor_dims)

    @property
    def nfactors(self) -> int:
        return len(self.factor_dims)

    def __add__(self, other: "SpaceShape") -> "SpaceShape":
        # tensor product of spaces = concatenation of factor lists
        return SpaceShape(self.factor_dims + SpaceShape.of(other).factor_dims)

    def __len__(self):
        return len(self.factor_dims)

    def __iter__(self):
        return iter(self.factor_dims)

    def __str__(self):
        return "x".join(str(d) for d in self.factor_dims)


ShapeLike = Union[SpaceShape, Sequence[int], int]

QUBIT = SpaceShape((2,))


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Ket:
    """A vector of complex amplitudes tagged with its factor structure.

    Kets are immutable; arithmetic returns new Kets and never renormalizes.
    """

    amplitudes: np.ndarray
    shape: SpaceShape

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        shape = SpaceShape.of(self.shape)
        if amps.ndim != 1 or amps.shape[0] != shape.total:
            raise DimensionError(
                f"{amps.shape} amplitudes do not fit a space of shape {shape} "
                f"(total dimension {shape.total})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "shape", shape)

    @property
    def dim(self) -> int:
        return self.shape.total

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = TOL) -> bool:
        return abs(self.norm() - 1.0) < tol

    def allclose(self, other: "Ket", atol: float = TOL) -> bool:
        _check_same_dim(self, other)
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes)) <= atol)

    def distance(self, other: "Ket") -> float:
        _check_same_dim(self, other)
        return float(np.linalg.norm(self.amplitudes - other.amplitudes))

    def __add__(self, other: "Ket") -> "Ket":
        _check_same_dim(self, other)
        return Ket(self.amplitudes + other.amplitudes, self.shape)

    def __sub__(self, other: "Ket") -> "Ket":
        _check_same_dim(self, other)
        return Ket(self.amplitudes - other.amplitudes, self.shape)

    def __mul__(self, scalar) -> "Ket":
        if isinstance(scalar, Ket):
            return NotImplemented
        return Ket(complex(scalar) * self.amplitudes, self.shape)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Ket":
        return Ket(self.amplitudes / complex(scalar), self.shape)

    def __neg__(self) -> "Ket":
        return Ket(-self.amplitudes, self.shape)

    def __repr__(self):
        amps = np.array2string(self.amplitudes, precision=6, suppress_small=True)
        return f"Ket({amps}, shape={self.shape})"


def _check_same_dim(a: Ket, b: Ket):
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def ket_from_amplitudes(amps: Iterable[complex], shape: ShapeLike) -> Ket:
    """Wrap ``amps`` as a Ket of the given shape, without normalizing."""
    return Ket(np.asarray(list(amps) if not isinstance(amps, np.ndarray) else amps),
               SpaceShape.of(shape))


def basis_ket(index: int, shape: ShapeLike = QUBIT) -> Ket:
    shape = SpaceShape.of(shape)
    if not 0 <= index < shape.total:
        raise DimensionError(f"basis index {index} outside dimension {shape.total}")
    amps = np.zeros(shape.total, dtype=np.complex128)
    amps[index] = 1.0
    return Ket(amps, shape)


def qubit(alpha: complex, beta: complex) -> Ket:
    """alpha * H + beta * V (no normalization)."""
    return Ket(np.array([alpha, beta], dtype=np.complex128), QUBIT)


H = basis_ket(0)
V = basis_ket(1)
ZERO, ONE = H, V
PLUS = qubit(1 / math.sqrt(2), 1 / math.sqrt(2))
MINUS = qubit(1 / math.sqrt(2), -1 / math.sqrt(2))


def inner(a: Ket, b: Ket) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_same_dim(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor(parts: Sequence[Ket]) -> Ket:
    parts = list(parts)
    if not parts:
        raise DimensionError("tensor product of an empty list")
    amps = reduce(np.kron, (p.amplitudes for p in parts))
    shape = reduce(lambda s, t: s + t, (p.shape for p in parts))
    return Ket(amps, shape)


def normalize(a: Ket) -> Ket:
    n = a.norm()
    if n < DEGENERATE_NORM:
        raise NormalizationError(f"cannot normalize a vector of norm {n:.3g}")
    return Ket(a.amplitudes / n, a.shape)


def fidelity(a: Ket, b: Ket, tol: float = TOL) -> float:
    """|<a|b>|^2 for two unit vectors."""
    for name, k in (("first", a), ("second", b)):
        if not k.is_normalized(tol):
            raise NormalizationError(
                f"{name} argument has norm {k.norm():.15g}, expected 1")
    f = abs(inner(a, b)) ** 2
    return min(1.0, f)


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_ket(dim: int, seed: SeedLike = None, shape: ShapeLike | None = None) -> Ket:
    """Uniform random unit vector in C^dim.

    Real and imaginary parts are drawn as independent standard normals and the
    result normalized. ``seed`` may be an int or an existing Generator, in which
    case the generator's state advances.
    """
    if dim < 1:
        raise DimensionError(f"dimension must be >= 1, got {dim}")
    shape = SpaceShape.of(shape if shape is not None else dim)
    if shape.total != dim:
        raise DimensionError(f"shape {shape} does not have dimension {dim}")
    rng = as_generator(seed)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return Ket(z / np.linalg.norm(z), shape)


def random_qubit_coefficients(seed: SeedLike = None) -> tuple[complex, complex]:
    k = haar_random_ket(2, seed)
    return complex(k.amplitudes[0]), complex(k.amplitudes[1])


def check_coefficients(alpha: complex, beta: complex, tol: float = TOL):
    total = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(total - 1.0) >= tol:
        raise NormalizationError(
            f"|alpha|^2 + |beta|^2 = {total:.15g}, expected 1")


def random_ket_with_overlap(reference: Ket, overlap: float, seed: SeedLike = None) -> Ket:
    """Random unit vector whose overlap magnitude with ``reference`` is ``overlap``.

    The orthogonal part and the relative phase are both random.
    """
    if not 0.0 <= overlap <= 1.0:
        raise ValueError(f"overlap must lie in [0, 1], got {overlap}")
    rng = as_generator(seed)
    ref = normalize(reference)
    while True:
        perp = haar_random_ket(ref.dim, rng, ref.shape)
        for _ in range(2):
            perp = perp - inner(ref, perp) * ref
        if perp.norm() > 1e-6:
            break
    perp = normalize(perp)
    phase = np.exp(2j * np.pi * rng.random())
    return phase * overlap * ref + math.sqrt(1.0 - overlap**2) * perp
