"""Copying and deleting machines built as explicit unitaries.

A deleting machine acts on ``copy1 (x) copy2 (x) ancilla`` and is pinned down on
the two preferred states plus their symmetric cross term::

    H H A          -> H S A_H
    V V A          -> V S A_V
    (H V + V H) A  -> H S A_V + V S A_H

where ``S`` is the blank state written into the second copy. Linearity then
forces ``Psi Psi A -> Psi S (alpha A_H + beta A_V)`` for ``Psi = alpha H + beta V``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .hilbert import (
    QUBIT,
    TOL,
    DimensionError,
    H,
    Ket,
    MINUS,
    NormalizationError,
    PLUS,
    SeedLike,
    V,
    ZERO,
    as_generator,
    check_coefficients,
    fidelity,
    inner,
    qubit,
    random_qubit_coefficients,
    tensor,
)
from .operators import (
    Operator,
    PartialMapSpec,
    acts_as_swap_on,
    apply,
    cnot,
    complete_to_unitary,
    compose,
    gram_feasibility,
    rotation_to_basis,
    swap_factors,
    tensor_op,
)

# two states whose overlap exceeds this count as the same state
IDENTICAL_OVERLAP = 1 - 1e-10

Mode = Literal["copy", "delete"]


@dataclass(frozen=True)
class DeletingMachineSpec:
    """Blank state and ancilla states of a hypothesized deleting machine.

    The ancilla is ``spectator_count`` inert qubits followed by one active
    slot; ``ancilla_init``, ``ancilla_H`` and ``ancilla_V`` are full ancilla
    states including the spectators.
    """

    sigma: Ket
    ancilla_init: Ket
    ancilla_H: Ket
    ancilla_V: Ket
    spectator_count: int = 0

    def __post_init__(self):
        if self.sigma.dim != 2:
            raise DimensionError("the blank state must be a qubit")
        for name in ("sigma", "ancilla_init", "ancilla_H", "ancilla_V"):
            k = getattr(self, name)
            if not k.is_normalized():
                raise NormalizationError(f"{name} has norm {k.norm():.15g}")
        shapes = {k.shape for k in (self.ancilla_init, self.ancilla_H, self.ancilla_V)}
        if len(shapes) != 1:
            raise DimensionError(f"ancilla states disagree on shape: {shapes}")
        if self.spectator_count < 0:
            raise ValueError("spectator_count must be nonnegative")

    @property
    def ancilla_shape(self):
        return self.ancilla_init.shape

    @property
    def composite_shape(self):
        return QUBIT + QUBIT + self.ancilla_shape

    @property
    def active_slot(self) -> int:
        """Factor index of the ancilla slot that starts out blank."""
        return self.composite_shape.nfactors - 1


@dataclass(frozen=True)
class MachineReport:
    feasible: bool
    ancilla_overlap: complex
    gram_residual: float
    is_swap: bool
    swap_deviation: float
    uncopy_residual: float


@dataclass(frozen=True)
class ClonabilityReport:
    clonable: bool
    worst_overlap: float
    witness: Operator | None = None
    states: tuple[Ket, ...] = ()


def pb_constraints(spec: DeletingMachineSpec) -> PartialMapSpec:
    """The three defining constraint pairs of a deleting machine.

    The cross-term pair is left unnormalized: both sides have squared norm 2
    whenever the ancilla outputs are orthogonal.
    """
    A, AH, AV, S = spec.ancilla_init, spec.ancilla_H, spec.ancilla_V, spec.sigma
    cross_in = tensor([H, V, A]) + tensor([V, H, A])
    cross_out = tensor([H, S, AV]) + tensor([V, S, AH])
    pairs = (
        (tensor([H, H, A]), tensor([H, S, AH])),
        (tensor([V, V, A]), tensor([V, S, AV])),
        (cross_in, cross_out),
    )
    return PartialMapSpec(pairs, spec.composite_shape)


def required_ancilla(alpha: complex, beta: complex, A_H: Ket, A_V: Ket) -> Ket:
    """Ancilla state alpha*A_H + beta*A_V that linearity forces after deleting."""
    if A_H.dim != A_V.dim:
        raise DimensionError(f"ancilla dimensions differ: {A_H.dim} vs {A_V.dim}")
    return alpha * A_H + beta * A_V


def orthogonality_residual(spec: DeletingMachineSpec) -> float:
    return abs(inner(spec.ancilla_H, spec.ancilla_V))


def verify_uncopy(U: Operator, spec: DeletingMachineSpec, alpha: complex, beta: complex,
                  tol: float = TOL) -> float:
    """Distance between U|Psi Psi A> and |Psi S A_Psi> for Psi = alpha H + beta V."""
    check_coefficients(alpha, beta, tol)
    if U.dim != spec.composite_shape.total:
        raise DimensionError(f"machine of dimension {U.dim} for a space of dimension "
                             f"{spec.composite_shape.total}")
    psi = qubit(alpha, beta)
    actual = apply(U, tensor([psi, psi, spec.ancilla_init]))
    target = tensor([psi, spec.sigma,
                     required_ancilla(alpha, beta, spec.ancilla_H, spec.ancilla_V)])
    return actual.distance(target)


def swap_probes(spec: DeletingMachineSpec) -> list[Ket]:
    return [tensor([H, H, spec.ancilla_init]), tensor([V, V, spec.ancilla_init])]


def worst_uncopy_residual(U: Operator, spec: DeletingMachineSpec, trials: int = 100,
                          seed: SeedLike = 0, tol: float = TOL) -> float:
    rng = as_generator(seed)
    worst = 0.0
    for _ in range(trials):
        alpha, beta = random_qubit_coefficients(rng)
        worst = max(worst, verify_uncopy(U, spec, alpha, beta, tol))
    return worst


def machine_report(U: Operator, spec: DeletingMachineSpec, trials: int = 100,
                   seed: SeedLike = 0, tol: float = TOL) -> MachineReport:
    gram = gram_feasibility(pb_constraints(spec), tol)
    is_swap, deviation = acts_as_swap_on(U, spec.composite_shape, 1, spec.active_slot,
                                         swap_probes(spec), tol)
    return MachineReport(
        feasible=gram.feasible,
        ancilla_overlap=inner(spec.ancilla_H, spec.ancilla_V),
        gram_residual=gram.max_residual,
        is_swap=is_swap,
        swap_deviation=deviation,
        uncopy_residual=worst_uncopy_residual(U, spec, trials, seed, tol),
    )


def build_swap_machine(sigma: Ket = ZERO, trials: int = 100, seed: SeedLike = 0,
                       tol: float = TOL) -> tuple[Operator, DeletingMachineSpec, MachineReport]:
    """Deleting by exchange: the second copy trades places with a blank ancilla qubit."""
    spec = DeletingMachineSpec(sigma=sigma, ancilla_init=sigma, ancilla_H=H, ancilla_V=V)
    U = swap_factors(spec.composite_shape, 1, 2)
    return U, spec, machine_report(U, spec, trials, seed, tol)


def counterexample_spec(spectator_count: int = 0, sigma: Ket = ZERO,
                        spectator: Ket = ZERO) -> DeletingMachineSpec:
    """Orthogonal ancilla outputs (H+V)/sqrt2 and (H-V)/sqrt2 in the active slot."""
    spectators = [spectator] * spectator_count
    return DeletingMachineSpec(
        sigma=sigma,
        ancilla_init=tensor(spectators + [sigma]),
        ancilla_H=tensor(spectators + [PLUS]),
        ancilla_V=tensor(spectators + [MINUS]),
        spectator_count=spectator_count,
    )


def build_counterexample_machine(spectator_count: int = 0, sigma: Ket = ZERO, trials: int = 100,
                                 seed: SeedLike = 0, tol: float = TOL
                                 ) -> tuple[Operator, DeletingMachineSpec, MachineReport]:
    """A deleting machine with orthogonal ancilla outputs that is not a swap."""
    spec = counterexample_spec(spectator_count, sigma)
    U = complete_to_unitary(pb_constraints(spec), tol)
    return U, spec, machine_report(U, spec, trials, seed, tol)


def cnot_copy_delete_trial(alpha: complex, beta: complex, mode: Mode,
                           tol: float = TOL) -> tuple[Ket, Ket, float]:
    """Run the bare C-NOT as a copier or a deleter on S = alpha|0> + beta|1>.

    Returns the actual output, the ideal target and their fidelity.
    """
    check_coefficients(alpha, beta, tol)
    s = qubit(alpha, beta)
    if mode == "copy":
        start, target = tensor([s, ZERO]), tensor([s, s])
    elif mode == "delete":
        start, target = tensor([s, s]), tensor([s, ZERO])
    else:
        raise ValueError(f"mode must be 'copy' or 'delete', got {mode!r}")
    actual = apply(cnot(), start)
    return actual, target, fidelity(actual, target)


def mcnot_circuit(alpha: complex, beta: complex, mode: Mode, tol: float = TOL) -> Operator:
    """C-NOT conjugated by the rotation that takes the known state S to |1>."""
    R = rotation_to_basis(alpha, beta, 1, tol)
    Rd = R.dagger
    I = Operator(np.eye(2), QUBIT)
    if mode == "copy":
        return compose(tensor_op([Rd, Rd]), compose(cnot(), tensor_op([R, I])))
    if mode == "delete":
        return compose(tensor_op([Rd, I]), compose(cnot(), tensor_op([R, R])))
    raise ValueError(f"mode must be 'copy' or 'delete', got {mode!r}")


def _dedup(states: Sequence[Ket]) -> list[Ket]:
    kept: list[Ket] = []
    for s in states:
        if not any(abs(inner(k, s)) > IDENTICAL_OVERLAP for k in kept):
            kept.append(s)
    return kept


def yuen_clonability(states: Sequence[Ket], sigma: Ket, ancilla_init: Ket,
                     tol: float = TOL) -> ClonabilityReport:
    """Decide whether one unitary can copy every state in ``states``.

    Copying ``Psi S A -> Psi Psi A`` on a set of distinct states needs them to
    be mutually orthogonal. When they are, an explicit copier is returned.
    """
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    for s in states:
        if not s.is_normalized(tol):
            raise NormalizationError(f"state has norm {s.norm():.15g}")
        if s.dim != sigma.dim:
            raise DimensionError("states and blank state must share a dimension")
    distinct = _dedup(states)
    overlaps = [abs(inner(a, b)) for k, a in enumerate(distinct) for b in distinct[k + 1:]]
    worst = max(overlaps, default=0.0)
    if worst >= tol:
        return ClonabilityReport(False, worst, None, tuple(distinct))
    pairs = [(tensor([s, sigma, ancilla_init]), tensor([s, s, ancilla_init])) for s in distinct]
    shape = distinct[0].shape + sigma.shape + ancilla_init.shape
    # an overlap just under tol can surface as a Gram residual just over it
    witness = complete_to_unitary(PartialMapSpec(pairs, shape), 2 * tol)
    return ClonabilityReport(True, worst, witness, tuple(distinct))

