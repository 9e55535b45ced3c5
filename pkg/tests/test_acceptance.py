"""Exit criteria for the package. Each test records one PASS/FAIL line,
printed in the terminal summary under "acceptance criteria"."""

import json
import math
import subprocess
import sys

import jsonschema
import numpy as np

from uncopy import machines as mc
from uncopy.hilbert import (
    H,
    PLUS,
    basis_ket,
    fidelity,
    haar_random_ket,
    inner,
    ket_from_amplitudes,
    normalize,
    qubit,
    random_ket_with_overlap,
    random_qubit_coefficients,
    tensor,
)
from uncopy.operators import (
    InfeasibleSpecError,
    PartialMapSpec,
    acts_as_swap_on,
    apply,
    cnot,
    complete_to_unitary,
    compose,
    gram_feasibility,
    haar_random_unitary,
    is_unitary,
    swap_factors,
)

R2 = 1 / math.sqrt(2)


def test_1_cnot_truth_table(criterion):
    done = criterion(1, "C-NOT truth table, fidelity 1 within 1e-12")
    table = {(0, 0): (0, 0), (0, 1): (0, 1), (1, 0): (1, 1), (1, 1): (1, 0)}
    worst = 0.0
    for (c, t), (c2, t2) in table.items():
        out = apply(cnot(), tensor([basis_ket(c), basis_ket(t)]))
        worst = max(worst, abs(fidelity(out, tensor([basis_ket(c2), basis_ket(t2)])) - 1))
    done(worst < 1e-12, f"max |F-1| = {worst:.1e}")


def test_2_orthogonality_necessity(criterion):
    done = criterion(2, "feasible iff |<A_H|A_V>| < 1e-10 on 50 Haar pairs; residual identity 1e-12")
    rng = np.random.default_rng(2)
    mismatches, identity_error, checked = 0, 0.0, 0
    for _ in range(50):
        a_h = haar_random_ket(2, rng)
        raw = haar_random_ket(2, rng)
        orth = normalize(raw - inner(a_h, raw) * a_h)
        for a_v in (raw, orth):
            spec = mc.DeletingMachineSpec(H, H, a_h, a_v)
            overlap = abs(inner(a_h, a_v))
            rep = gram_feasibility(mc.pb_constraints(spec), 1e-10)
            mismatches += rep.feasible != (overlap < 1e-10)
            identity_error = max(identity_error, abs(rep.max_residual - overlap))
            checked += 1
    done(mismatches == 0 and identity_error < 1e-12,
         f"{checked} specs, {mismatches} mismatches, identity error {identity_error:.1e}")


def test_3_counterexample(criterion):
    done = criterion(3, "counter-example: orthogonal ancillas, unitary, constraints hold, not a swap")
    U, spec, rep = mc.build_counterexample_machine()
    overlap = abs(inner(spec.ancilla_H, spec.ancilla_V))
    unitary = is_unitary(U, 1e-10)[0]
    worst_pair = max(apply(U, x).distance(y) for x, y in mc.pb_constraints(spec).pairs)
    probes = mc.swap_probes(spec)
    is_swap, _ = acts_as_swap_on(U, spec.composite_shape, 1, spec.active_slot, probes, 1e-10)
    oracle = abs(inner(H, PLUS)) ** 2
    W = swap_factors(spec.composite_shape, 1, spec.active_slot)
    fid_err = max(abs(fidelity(apply(U, p), apply(W, p)) - oracle) for p in probes)
    ok = (overlap < 1e-12 and unitary and worst_pair < 1e-10 and not is_swap
          and abs(oracle - 0.5) < 1e-15 and fid_err < 1e-10)
    done(ok, f"overlap {overlap:.1e}, pair residual {worst_pair:.1e}, probe fidelity error {fid_err:.1e}")


def _uncopy_residuals(U, spec, seed):
    rng = np.random.default_rng(seed)
    return [mc.verify_uncopy(U, spec, *random_qubit_coefficients(rng)) for _ in range(100)]


def test_4_uncopy_soundness(criterion):
    done = criterion(4, "uncopy residual < 1e-9 for 100 Haar (alpha, beta), seed-reproducible")
    worst = 0.0
    reproducible = True
    for U, spec, _ in (mc.build_counterexample_machine(), mc.build_swap_machine()):
        first = _uncopy_residuals(U, spec, 4)
        reproducible &= first == _uncopy_residuals(U, spec, 4)
        worst = max(worst, max(first))
    done(worst < 1e-9 and reproducible, f"worst residual {worst:.1e}")


def test_5_cnot_superposition(criterion):
    done = criterion(5, "C-NOT copy/delete fidelity 0.5 at alpha=beta=1/sqrt2, 1 when alpha*beta=0")
    oracle = abs(R2**3 + R2**3) ** 2
    # direct 4-dim computation of the delete fidelity: C-NOT|SS> against |S0>
    ss = np.full(4, 0.5)
    delete_actual = cnot().matrix @ ss
    delete_oracle = abs(np.vdot([R2, 0, R2, 0], delete_actual)) ** 2
    _, _, copy_f = mc.cnot_copy_delete_trial(R2, R2, "copy")
    _, _, delete_f = mc.cnot_copy_delete_trial(R2, R2, "delete")
    basis_err = max(abs(mc.cnot_copy_delete_trial(a, b, m)[2] - 1)
                    for a, b in [(1, 0), (0, 1)] for m in ("copy", "delete"))
    ok = (abs(copy_f - 0.5) < 1e-10 and abs(copy_f - oracle) < 1e-10
          and abs(delete_f - 0.5) < 1e-10 and abs(delete_f - delete_oracle) < 1e-10
          and basis_err < 1e-12)
    done(ok, f"copy {copy_f:.12f}, delete {delete_f:.12f}, basis error {basis_err:.1e}")


def test_6_mcnot_known_state(criterion):
    done = criterion(6, "MC-NOT exact on 50 known states, delete.copy = I, misses other states")
    rng = np.random.default_rng(6)
    worst_res, worst_inv, worst_other = 0.0, 0.0, 0.0
    for _ in range(50):
        a, b = random_qubit_coefficients(rng)
        s = qubit(a, b)
        copier = mc.mcnot_circuit(a, b, "copy")
        deleter = mc.mcnot_circuit(a, b, "delete")
        worst_res = max(worst_res,
                        apply(copier, tensor([s, H])).distance(tensor([s, s])),
                        apply(deleter, tensor([s, s])).distance(tensor([s, H])))
        worst_inv = max(worst_inv, np.max(np.abs(compose(deleter, copier).matrix - np.eye(4))))
        t = random_ket_with_overlap(s, rng.uniform(0.1, 0.9), rng)
        worst_other = max(worst_other, fidelity(apply(copier, tensor([t, H])), tensor([t, t])))
    ok = worst_res < 1e-10 and worst_inv < 1e-10 and worst_other < 1 - 1e-6
    done(ok, f"residual {worst_res:.1e}, inverse {worst_inv:.1e}, other-state fidelity {worst_other:.4f}")


def test_7_yuen_dichotomy(criterion):
    done = criterion(7, "{H, V} clonable with witness; 50 non-orthogonal pairs not clonable")
    V = basis_ket(1)
    rep = mc.yuen_clonability([H, V], H, H)
    witness_ok = (rep.clonable and is_unitary(rep.witness, 1e-10)[0]
                  and all(apply(rep.witness, tensor([s, H, H])).distance(tensor([s, s, H])) < 1e-10
                          for s in (H, V)))
    rng = np.random.default_rng(7)
    wrong, overlap_err = 0, 0.0
    for _ in range(50):
        a = haar_random_ket(2, rng)
        target = rng.uniform(0.1, 0.9)
        r = mc.yuen_clonability([a, random_ket_with_overlap(a, target, rng)], H, H)
        wrong += r.clonable
        overlap_err = max(overlap_err, abs(r.worst_overlap - target))
    done(witness_ok and wrong == 0 and overlap_err < 1e-10,
         f"{wrong} wrongly clonable, overlap error {overlap_err:.1e}")


def _random_feasible_spec(rng):
    dim = int(rng.integers(2, 9))
    k = int(rng.integers(1, dim + 1))
    basis = haar_random_unitary(dim, rng).matrix[:, :k]
    U = haar_random_unitary(dim, rng).matrix
    pairs = [(ket_from_amplitudes(basis[:, i], [dim]),
              ket_from_amplitudes(U @ basis[:, i], [dim])) for i in range(k)]
    return PartialMapSpec(pairs, [dim])


def test_8_unitary_completion(criterion):
    done = criterion(8, "completion of 100 feasible specs exact to 1e-10; perturbed specs rejected")
    rng = np.random.default_rng(8)
    worst_pair, worst_unitary = 0.0, 0.0
    rejected, perturbed = 0, 0
    for _ in range(100):
        spec = _random_feasible_spec(rng)
        U = complete_to_unitary(spec, 1e-10)
        worst_unitary = max(worst_unitary, is_unitary(U)[1])
        worst_pair = max(worst_pair, max(apply(U, x).distance(y) for x, y in spec.pairs))

        pairs = list(spec.pairs)
        x, y = pairs[0]
        pairs[0] = (x, y + 1e-3 * haar_random_ket(spec.shape.total, rng))
        bad = PartialMapSpec(pairs, spec.shape)
        rep = gram_feasibility(bad, 1e-10)
        if rep.max_residual <= 1e-6:
            continue
        perturbed += 1
        try:
            complete_to_unitary(bad, 1e-10)
        except InfeasibleSpecError:
            rejected += not rep.feasible
    ok = worst_pair < 1e-10 and worst_unitary < 1e-10 and perturbed > 50 and rejected == perturbed
    done(ok, f"pair residual {worst_pair:.1e}, unitarity {worst_unitary:.1e}, "
             f"{rejected}/{perturbed} perturbed rejected")


REPORT_SCHEMA = {
    "type": "object",
    "required": ["tool_version", "config", "reports"],
    "additionalProperties": False,
    "properties": {
        "tool_version": {"type": "string"},
        "config": {"type": "object",
                   "required": ["alpha", "beta", "tolerance", "seed", "trials", "sigma_index", "format"]},
        "reports": {
            "type": "array",
            "minItems": 8,
            "maxItems": 8,
            "items": {
                "type": "object",
                "required": ["scenario", "verdict", "expected", "metrics", "tolerance", "seed"],
                "additionalProperties": False,
                "properties": {
                    "scenario": {"type": "string"},
                    "verdict": {"enum": ["pass", "fail"]},
                    "expected": {"type": "string"},
                    "metrics": {"type": "object", "additionalProperties": {"anyOf": [
                        {"type": "number"}, {"type": "boolean"}, {"type": "string"},
                        {"type": "object", "required": ["re", "im"],
                         "properties": {"re": {"type": "number"}, "im": {"type": "number"}}},
                    ]}},
                    "tolerance": {"type": "number"},
                    "seed": {"type": "integer"},
                },
            },
        },
    },
}


def test_9_cli_end_to_end(criterion):
    done = criterion(9, "`run all --format json` exits 0, schema-valid, byte-identical reruns")
    cmd = [sys.executable, "-m", "uncopy", "run", "all", "--format", "json", "--seed", "9"]
    first = subprocess.run(cmd, capture_output=True, timeout=60)
    second = subprocess.run(cmd, capture_output=True, timeout=60)
    doc = json.loads(first.stdout)
    jsonschema.validate(doc, REPORT_SCHEMA)
    all_pass = all(r["verdict"] == "pass" for r in doc["reports"])
    ok = (first.returncode == 0 and second.returncode == 0
          and first.stdout == second.stdout and all_pass)
    done(ok, f"exit {first.returncode}, {len(first.stdout)} bytes")
