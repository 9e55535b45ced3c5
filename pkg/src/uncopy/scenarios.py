"""Named scenarios, one per argument about copying and deleting machines.

Each scenario returns its metrics together with the per-metric checks that
decide the verdict, so a report can always be re-judged from its numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import machines as mc
from .hilbert import (
    H,
    TOL,
    V,
    as_generator,
    basis_ket,
    check_coefficients,
    fidelity,
    haar_random_ket,
    inner,
    normalize,
    qubit,
    random_ket_with_overlap,
    random_qubit_coefficients,
    tensor,
)
from .operators import (
    apply,
    cnot,
    complete_to_unitary,
    compose,
    gram_feasibility,
    is_unitary,
    swap_factors,
)

# bound on uncopy residuals; round-off accumulates through an 8x8 completion
UNCOPY_BOUND = 1e-9
# bound for results that are exact in exact arithmetic (truth tables, fidelity 1)
EXACT_BOUND = 1e-12
# a copier built for one state must miss any other non-orthogonal state by at least this
MISS_MARGIN = 1e-6
# overlaps of sampled non-orthogonal pairs are drawn from this range
OVERLAP_RANGE = (0.1, 0.9)

Metric = Union[float, int, complex, bool, str]


@dataclass(frozen=True)
class ScenarioConfig:
    alpha: complex = 1 / math.sqrt(2)
    beta: complex = 1 / math.sqrt(2)
    tolerance: float = TOL
    seed: int = 0
    trials: int = 100
    sigma_index: int = 0
    format: str = "text"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.sigma_index not in (0, 1):
            raise ValueError(f"sigma index must be 0 or 1, got {self.sigma_index}")
        if self.format not in ("text", "json"):
            raise ValueError(f"format must be 'text' or 'json', got {self.format!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        check_coefficients(self.alpha, self.beta, self.tolerance)

    @property
    def sigma(self):
        return basis_ket(self.sigma_index)


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    verdict: str
    expected: str
    metrics: dict[str, Metric] = field(default_factory=dict)
    tolerance: float = TOL
    seed: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


class _Checks:
    """Collects metrics and the bound each one must meet."""

    def __init__(self):
        self.metrics: dict[str, Metric] = {}
        self.ok: list[bool] = []

    def record(self, name: str, value: Metric, ok: bool | None = None):
        self.metrics[name] = value
        if ok is not None:
            self.ok.append(bool(ok))

    def below(self, name: str, value: float, bound: float):
        self.record(name, float(value), value < bound)

    @property
    def passed(self) -> bool:
        return all(self.ok)


def _random_orthonormal_pair(shape, rng):
    dim = math.prod(shape)
    a = haar_random_ket(dim, rng, shape)
    b = haar_random_ket(dim, rng, shape)
    return a, normalize(b - inner(a, b) * a)


def pb_linearity(cfg: ScenarioConfig) -> _Checks:
    rng = as_generator(cfg.seed)
    a_h, a_v = _random_orthonormal_pair((2, 2), rng)
    spec = mc.DeletingMachineSpec(cfg.sigma, tensor([cfg.sigma, cfg.sigma]), a_h, a_v)
    U = complete_to_unitary(mc.pb_constraints(spec), cfg.tolerance)
    c = _Checks()
    c.below("unitary_deviation", is_unitary(U)[1], cfg.tolerance)
    required = mc.required_ancilla(cfg.alpha, cfg.beta, a_h, a_v)
    c.below("required_ancilla_norm_error", abs(required.norm() - 1), cfg.tolerance)
    c.below("uncopy_residual", mc.verify_uncopy(U, spec, cfg.alpha, cfg.beta, cfg.tolerance),
            UNCOPY_BOUND)
    c.below("worst_uncopy_residual",
            mc.worst_uncopy_residual(U, spec, cfg.trials, rng, cfg.tolerance), UNCOPY_BOUND)
    return c


def pb_orthogonality(cfg: ScenarioConfig) -> _Checks:
    rng = as_generator(cfg.seed)
    mismatches = 0
    identity_error = 0.0
    feasible_count = 0
    min_raw_overlap = 1.0
    for _ in range(cfg.trials):
        a_h = haar_random_ket(2, rng)
        raw_v = haar_random_ket(2, rng)
        orth_v = normalize(raw_v - inner(a_h, raw_v) * a_h)
        for a_v in (raw_v, orth_v):
            spec = mc.DeletingMachineSpec(cfg.sigma, cfg.sigma, a_h, a_v)
            report = gram_feasibility(mc.pb_constraints(spec), cfg.tolerance)
            overlap = mc.orthogonality_residual(spec)
            mismatches += report.feasible != (overlap < cfg.tolerance)
            feasible_count += report.feasible
            identity_error = max(identity_error, abs(report.max_residual - overlap))
        min_raw_overlap = min(min_raw_overlap, abs(inner(a_h, raw_v)))
    c = _Checks()
    c.record("specs_checked", 2 * cfg.trials)
    c.record("verdict_mismatches", mismatches, mismatches == 0)
    c.record("feasible_count", feasible_count)
    c.below("max_identity_error", identity_error, EXACT_BOUND)
    c.record("min_raw_overlap", min_raw_overlap)
    return c


def swap_machine(cfg: ScenarioConfig) -> _Checks:
    U, spec, rep = mc.build_swap_machine(cfg.sigma, cfg.trials, cfg.seed, cfg.tolerance)
    s = cfg.sigma
    c = _Checks()
    c.below("probe_error",
            apply(U, tensor([H, H, s])).distance(tensor([H, s, H])), EXACT_BOUND)
    c.below("ancilla_overlap_abs", abs(rep.ancilla_overlap), cfg.tolerance)
    c.record("ancilla_overlap", rep.ancilla_overlap)
    c.record("feasible", rep.feasible, rep.feasible)
    c.record("is_swap", rep.is_swap, rep.is_swap)
    c.below("swap_deviation", rep.swap_deviation, cfg.tolerance)
    c.below("unitary_deviation", is_unitary(U)[1], EXACT_BOUND)
    c.below("uncopy_residual", rep.uncopy_residual, UNCOPY_BOUND)
    return c


def counterexample(cfg: ScenarioConfig) -> _Checks:
    U, spec, rep = mc.build_counterexample_machine(0, cfg.sigma, cfg.trials, cfg.seed,
                                                   cfg.tolerance)
    constraints = mc.pb_constraints(spec)
    worst_pair = max(apply(U, x).distance(y) for x, y in constraints.pairs)
    W = swap_factors(spec.composite_shape, 1, spec.active_slot)
    probe_fids = [fidelity(apply(U, p), apply(W, p)) for p in mc.swap_probes(spec)]
    c = _Checks()
    c.below("ancilla_overlap_abs", abs(rep.ancilla_overlap), cfg.tolerance)
    c.record("ancilla_overlap", rep.ancilla_overlap)
    c.below("gram_residual", rep.gram_residual, cfg.tolerance)
    c.below("unitary_deviation", is_unitary(U)[1], cfg.tolerance)
    c.below("constraint_residual", worst_pair, cfg.tolerance)
    c.record("is_swap", rep.is_swap, not rep.is_swap)
    c.record("swap_deviation", rep.swap_deviation, rep.swap_deviation > MISS_MARGIN)
    for name, f in zip(("probe_fidelity_HH", "probe_fidelity_VV"), probe_fids):
        c.record(name, f, abs(f - 0.5) < cfg.tolerance)
    c.below("uncopy_residual", rep.uncopy_residual, UNCOPY_BOUND)
    return c


def cnot_basis(cfg: ScenarioConfig) -> _Checks:
    c = _Checks()
    for a in (0, 1):
        for b in (0, 1):
            start = tensor([basis_ket(a), basis_ket(b)])
            expected = tensor([basis_ket(a), basis_ket(a ^ b)])
            f = fidelity(apply(cnot(), start), expected)
            c.record(f"fidelity_{a}{b}", f, abs(f - 1) < EXACT_BOUND)
    return c


def copy_delete_oracle(alpha: complex, beta: complex) -> float:
    """Closed-form C-NOT copy (and delete) fidelity for S = alpha|0> + beta|1>."""
    return abs(abs(alpha) ** 2 * alpha + abs(beta) ** 2 * beta) ** 2


def cnot_superposition(cfg: ScenarioConfig) -> _Checks:
    _, _, copy_f = mc.cnot_copy_delete_trial(cfg.alpha, cfg.beta, "copy", cfg.tolerance)
    _, _, delete_f = mc.cnot_copy_delete_trial(cfg.alpha, cfg.beta, "delete", cfg.tolerance)
    oracle = copy_delete_oracle(cfg.alpha, cfg.beta)
    basis_state = abs(cfg.alpha * cfg.beta) < cfg.tolerance
    c = _Checks()
    c.record("copy_fidelity", copy_f, abs(copy_f - oracle) < cfg.tolerance)
    c.record("delete_fidelity", delete_f, abs(delete_f - oracle) < cfg.tolerance)
    c.record("oracle_fidelity", oracle)
    c.record("alpha_beta_abs", abs(cfg.alpha * cfg.beta))
    perfect = min(copy_f, delete_f) > 1 - EXACT_BOUND
    c.record("perfect", perfect, perfect == basis_state)
    return c


def mcnot_known(cfg: ScenarioConfig) -> _Checks:
    rng = as_generator(cfg.seed)
    ident = np.eye(4)
    worst_copy = worst_delete = worst_inverse = 0.0
    worst_unknown = 0.0
    cases = [(cfg.alpha, cfg.beta)] + [random_qubit_coefficients(rng) for _ in range(cfg.trials)]
    for k, (alpha, beta) in enumerate(cases):
        s = qubit(alpha, beta)
        copier = mc.mcnot_circuit(alpha, beta, "copy", cfg.tolerance)
        deleter = mc.mcnot_circuit(alpha, beta, "delete", cfg.tolerance)
        s0, ss = tensor([s, H]), tensor([s, s])
        worst_copy = max(worst_copy, apply(copier, s0).distance(ss))
        worst_delete = max(worst_delete, apply(deleter, ss).distance(s0))
        worst_inverse = max(worst_inverse,
                            float(np.max(np.abs(compose(deleter, copier).matrix - ident))))
        if k:
            t = random_ket_with_overlap(s, rng.uniform(*OVERLAP_RANGE), rng)
            f = fidelity(apply(copier, tensor([t, H])), tensor([t, t]))
            worst_unknown = max(worst_unknown, f)
    c = _Checks()
    c.record("states_checked", len(cases))
    c.below("copy_residual", worst_copy, cfg.tolerance)
    c.below("delete_residual", worst_delete, cfg.tolerance)
    c.below("inverse_deviation", worst_inverse, cfg.tolerance)
    c.below("max_unknown_copy_fidelity", worst_unknown, 1 - MISS_MARGIN)
    return c


def yuen(cfg: ScenarioConfig) -> _Checks:
    rng = as_generator(cfg.seed)
    s = cfg.sigma
    c = _Checks()
    rep = mc.yuen_clonability([H, V], s, s, cfg.tolerance)
    c.record("orthogonal_clonable", rep.clonable, rep.clonable)
    if rep.witness is not None:
        dev = is_unitary(rep.witness)[1]
        miss = max(apply(rep.witness, tensor([p, s, s])).distance(tensor([p, p, s])) for p in (H, V))
    else:
        dev = miss = math.inf
    c.below("witness_unitary_deviation", dev, cfg.tolerance)
    c.below("witness_constraint_residual", miss, cfg.tolerance)
    same = mc.yuen_clonability([H, H], s, s, cfg.tolerance)
    c.record("identical_clonable", same.clonable, same.clonable and len(same.states) == 1)

    wrongly_clonable = 0
    overlap_error = 0.0
    for _ in range(cfg.trials):
        a = haar_random_ket(2, rng)
        target = rng.uniform(*OVERLAP_RANGE)
        b = random_ket_with_overlap(a, target, rng)
        r = mc.yuen_clonability([a, b], s, s, cfg.tolerance)
        wrongly_clonable += r.clonable
        overlap_error = max(overlap_error, abs(r.worst_overlap - target))
    c.record("nonorthogonal_pairs", cfg.trials)
    c.record("wrongly_clonable", wrongly_clonable, wrongly_clonable == 0)
    c.below("overlap_error", overlap_error, cfg.tolerance)
    return c


@dataclass(frozen=True)
class Scenario:
    name: str
    expected: str
    description: str
    run: Callable[[ScenarioConfig], _Checks]


SCENARIOS: dict[str, Scenario] = {s.name: s for s in [
    Scenario("pb-linearity",
             "a deleter fixed on H, V and the cross term uncopies every superposition",
             "linearity forces the ancilla into alpha*A_H + beta*A_V",
             pb_linearity),
    Scenario("pb-orthogonality",
             "the deleting constraints are consistent iff <A_H|A_V> = 0",
             "Gram feasibility of the three constraint pairs vs ancilla overlap",
             pb_orthogonality),
    Scenario("swap-machine",
             "exchanging copy and blank ancilla deletes with orthogonal A_H, A_V",
             "the swap evolution as a deleting machine",
             swap_machine),
    Scenario("counterexample",
             "orthogonal A_H, A_V without the evolution being a swap",
             "ancilla outputs (H+V)/sqrt2 and (H-V)/sqrt2",
             counterexample),
    Scenario("cnot-basis",
             "C-NOT copies and deletes the basis states like the classical gate",
             "C-NOT truth table",
             cnot_basis),
    Scenario("cnot-superposition",
             "C-NOT neither copies nor deletes a superposed state",
             "C-NOT on S0 and SS for S = alpha|0> + beta|1>",
             cnot_superposition),
    Scenario("mcnot-known",
             "a C-NOT rotated for a known state copies and deletes it exactly, and no other",
             "modified C-NOT with known alpha, beta",
             mcnot_known),
    Scenario("yuen",
             "a set of states is clonable iff its members are mutually orthogonal",
             "clonability of orthogonal vs non-orthogonal pairs",
             yuen),
]}

SCENARIO_ORDER = tuple(SCENARIOS)


def run_scenario(name: str, config: ScenarioConfig) -> ScenarioReport:
    try:
        scenario = SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_ORDER)}")
    checks = scenario.run(config)
    return ScenarioReport(
        scenario=name,
        verdict="pass" if checks.passed else "fail",
        expected=scenario.expected,
        metrics=checks.metrics,
        tolerance=config.tolerance,
        seed=config.seed,
    )


def run_all(config: ScenarioConfig) -> tuple[list[ScenarioReport], int]:
    """Run every scenario in the fixed order; exit code 0 iff all pass."""
    reports = []
    for name in SCENARIO_ORDER:
        try:
            reports.append(run_scenario(name, config))
        except Exception as exc:  # a crashing scenario is a failed scenario
            reports.append(ScenarioReport(name, "fail", SCENARIOS[name].expected,
                                          {"error": f"{type(exc).__name__}: {exc}"},
                                          config.tolerance, config.seed))
    code = 0 if all(r.passed for r in reports) else 1
    return reports, code
