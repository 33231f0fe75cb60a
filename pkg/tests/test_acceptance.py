"""Acceptance criteria for the toolkit, one test per criterion.

Each test prints a single PASS line (visible with `pytest -s` or in captured
output) and enforces its stated tolerance. Reference values for the benzene
pi active space: 8 variational parameters, 69 two-qubit gate equivalents
(+-15%), 35 measurement groups (+-20%), ground energy -227.9450 Ha; the
energy checks need a user-supplied integrals file (see README) and skip
otherwise.
"""
import time

import numpy as np
import pytest

from conftest import benzene_fcidump_path, closed_shell_reference, make_closed_shell_2o
from oracles import circuit_unitary, equal_up_to_phase, exp_generator
from uccvqe.ansatz import ActiveSpace, Excitation, enumerate_excitations
from uccvqe.circuit import (
    Circuit,
    Gate,
    build_ansatz_circuit,
    count_2qge,
    rewrite_cx_h_cx,
    synth_double_excitation,
    synth_paired_excitation,
    synth_single_excitation,
    synth_spatial_to_spin,
)
from uccvqe.hamio import (
    ActiveSelection,
    QubitHamiltonian,
    build_qubit_hamiltonian,
    exact_ground_energy,
    parse_fcidump,
    qwc_group,
)
from uccvqe.mapping import QubitMapping, greedy_map
from uccvqe.mitigate import PostSelectionPolicy, mitigated_energy, postselect
from uccvqe.pauli import PauliSum, PauliWord, antihermitian_generator
from uccvqe.sim import Histogram, Statevector, apply_circuit, energy_from_histograms, expectation, sample_group
from uccvqe.symmetry import OrbitalSymmetry, SpinSector
from uccvqe.vqe import evaluate_sampled, optimize

BENZENE_PI_LABELS = (6, 7, 8, 5)
TARGET_PARAMS_CAS44 = 8
TARGET_2QGE_CAS22 = 4
TARGET_2QGE_CAS44 = 69          # +-15%
TARGET_QWC_CAS44 = 35           # +-20%
TARGET_ENERGY_CAS44 = -227.9450  # Hartree, +-1 mEh


def report(name: str, detail: str = ""):
    print(f"\nACCEPTANCE {name}: PASS {detail}")


def random_block_mapping(n_spatial, rng):
    order = list(rng.permutation(n_spatial))
    return QubitMapping.from_spatial_order([int(p) for p in order])


def random_excitation(rng, n_spatial):
    occ_max = max(1, n_spatial // 2)
    kind = rng.choice(["paired", "ab", "aa", "bb", "single"])
    i = int(rng.integers(occ_max))
    a = int(rng.integers(occ_max, n_spatial))
    if kind == "paired":
        return Excitation("double", "ab", (i, i), (a, a), 0)
    if kind == "single":
        return Excitation("single", rng.choice(["aa", "bb"]), (i,), (a,), 0)
    if kind == "ab":
        j = int(rng.integers(occ_max))
        b = int(rng.integers(occ_max, n_spatial))
        if i == j and a == b:
            b = occ_max + (b + 1 - occ_max) % (n_spatial - occ_max)
            if i == j and a == b:
                return Excitation("single", "aa", (i,), (a,), 0)
        return Excitation("double", "ab", (i, j), (a, b), 0)
    if occ_max < 2 or n_spatial - occ_max < 2:
        return Excitation("single", "aa", (i,), (a,), 0)
    i, j = sorted(rng.choice(occ_max, size=2, replace=False))
    a, b = sorted(rng.choice(range(occ_max, n_spatial), size=2, replace=False))
    return Excitation("double", kind, (int(i), int(j)), (int(a), int(b)), 0)


def random_seniority_zero_state(mapping, rng):
    n = mapping.n_qubits
    amps = np.zeros(1 << n, dtype=complex)
    for occ_pattern in range(1 << mapping.n_spatial):
        idx = 0
        for k in range(mapping.n_spatial):
            if (occ_pattern >> k) & 1:
                idx |= 1 << (n - 1 - mapping.alpha_qubit(k))
                idx |= 1 << (n - 1 - mapping.beta_qubit(k))
        amps[idx] = rng.normal() + 1j * rng.normal()
    amps /= np.linalg.norm(amps)
    return Statevector(n, amps)


def test_synthesis_correctness_on_random_excitations():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    worst = 0.0
    while checked < 50:
        n_spatial = int(rng.integers(2, 5))  # up to 8 qubits
        exc = random_excitation(rng, n_spatial)
        mapping = random_block_mapping(n_spatial, rng)
        theta = float(rng.normal())
        space = ActiveSpace(2 * max(1, n_spatial // 2), n_spatial)
        gen = antihermitian_generator(exc, mapping)
        dense = exp_generator(gen, theta)
        if exc.paired:
            # the 2-CNOT block acts in the pair encoding; conjugating by the
            # fan-out must reproduce the full rotation on seniority-zero states
            block = synth_paired_excitation(exc, mapping, "t")
            fan = synth_spatial_to_spin(mapping, space)
            state = random_seniority_zero_state(mapping, rng)
            got = apply_circuit(apply_circuit(apply_circuit(state, fan), block, {"t": theta}), fan)
            want = dense @ state.amplitudes
            dev = float(np.max(np.abs(got.amplitudes - want)))
        else:
            if exc.kind == "double":
                circ = synth_double_excitation(exc, mapping, "t")
            else:
                circ = synth_single_excitation(exc, mapping, "t")
            got = circuit_unitary(circ, {"t": theta})
            ok, dev = equal_up_to_phase(got, dense, 1e-10)
        assert dev < 1e-10, (exc.label(), mapping.perm, dev)
        worst = max(worst, dev)
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report("synthesis-correctness", f"(50 excitations, worst deviation {worst:.2e}, {elapsed:.1f}s)")


def test_rewrite_soundness_on_random_circuits():
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(20):
        gates = []
        for _ in range(40):
            kind = rng.choice(["X", "H", "S", "SDG", "RZ", "CNOT"])
            if kind == "CNOT":
                c, t = rng.choice(4, size=2, replace=False)
                gates.append(Gate("CNOT", (int(c), int(t))))
            elif kind == "RZ":
                gates.append(Gate("RZ", (int(rng.integers(4)),), float(rng.normal())))
            else:
                gates.append(Gate(kind, (int(rng.integers(4)),)))
        circ = Circuit(4, gates)
        out = rewrite_cx_h_cx(circ)
        assert out.cnot_count() <= circ.cnot_count()
        ok, dev = equal_up_to_phase(circuit_unitary(out), circuit_unitary(circ), 1e-12)
        assert ok, dev
        worst = max(worst, dev)
    report("rewrite-soundness", f"(20 circuits, worst deviation {worst:.2e})")


def test_parameter_counts():
    minimal = enumerate_excitations("uccdab", ActiveSpace(2, 2),
                                    OrbitalSymmetry.from_labels([1, 5]))
    benzene = enumerate_excitations("uccdab", ActiveSpace(4, 4),
                                    OrbitalSymmetry.from_labels(BENZENE_PI_LABELS))
    assert minimal.parameter_count == 1
    assert benzene.parameter_count == TARGET_PARAMS_CAS44
    report("parameter-counts", f"(CAS(2,2)=1, CAS(4,4)={benzene.parameter_count})")


def test_gate_counts():
    spec22 = enumerate_excitations("uccdab", ActiveSpace(2, 2),
                                   OrbitalSymmetry.from_labels([1, 5]))
    got22 = count_2qge(build_ansatz_circuit(spec22, greedy_map(spec22.excitations, 4, 0, 8)))
    assert got22 == TARGET_2QGE_CAS22

    spec44 = enumerate_excitations("uccdab", ActiveSpace(4, 4),
                                   OrbitalSymmetry.from_labels(BENZENE_PI_LABELS))
    mapping = greedy_map(spec44.excitations, 8, seed=0, restarts=32)
    got44 = count_2qge(build_ansatz_circuit(spec44, mapping))
    deviation = (got44 - TARGET_2QGE_CAS44) / TARGET_2QGE_CAS44
    assert abs(deviation) <= 0.15, f"{got44} vs {TARGET_2QGE_CAS44} ({deviation:+.1%})"
    report("gate-counts",
           f"(CAS(2,2)={got22} exact; CAS(4,4)={got44} vs {TARGET_2QGE_CAS44} target, {deviation:+.1%})")


def test_qwc_grouping_validity():
    rng = np.random.default_rng(55)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        words = [
            PauliWord.from_axes("".join(rng.choice(list("IXYZ")) for _ in range(n)),
                                float(rng.normal()))
            for _ in range(int(rng.integers(4, 25)))
        ]
        terms = PauliSum(n, [w for w in words if not w.is_identity()])
        h = QubitHamiltonian(n, terms, 0.0, None, ActiveSpace(0, max(1, n // 2)))
        groups = qwc_group(h)
        seen = set()
        for g in groups:
            assert all(a.qubitwise_commutes_with(b) for a in g.words for b in g.words)
            for w in g.words:
                key = (w.x_mask, w.z_mask)
                assert key not in seen
                seen.add(key)
        assert len(seen) == h.term_count
    report("qwc-grouping-validity", "(100 random operator sets)")


def test_ansatz_exactness_on_two_electron_instances():
    start = time.perf_counter()
    mapping = QubitMapping.identity(2)
    space = ActiveSpace(2, 2)
    sym = OrbitalSymmetry.from_labels([1, 5])
    checked = 0
    seed = 0
    worst = 0.0
    while checked < 5:
        ints = make_closed_shell_2o(seed)
        seed += 1
        h = build_qubit_hamiltonian(ints, ActiveSelection.full(ints), mapping)
        sector_ground = exact_ground_energy(h, SpinSector(1, 1))
        if abs(closed_shell_reference(ints) - sector_ground) > 1e-10:
            continue  # sector ground is open-shell: outside the closed-shell design space
        for variant in ("uccd", "uccsd"):
            spec = enumerate_excitations(variant, space, sym)
            res = optimize(h, spec, mapping)
            diff = abs(res.energy - sector_ground)
            assert diff < 1e-6, (seed - 1, variant, diff)
            worst = max(worst, diff)
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    report("ansatz-exactness", f"(5 instances, worst gap {worst:.2e} Ha, {elapsed:.1f}s)")


def test_symmetry_conservation_and_full_retention():
    rng = np.random.default_rng(404)
    sym = OrbitalSymmetry.from_labels(BENZENE_PI_LABELS)
    worst_leak = 0.0
    for variant in ("upccd", "uccdab", "uccd", "uccsd"):
        spec = enumerate_excitations(variant, ActiveSpace(4, 4), sym)
        mapping = greedy_map(spec.excitations, 8, seed=2, restarts=4)
        binding = dict(zip(spec.parameter_names(),
                           map(float, rng.normal(size=spec.parameter_count))))
        state = apply_circuit(Statevector.zero(8), build_ansatz_circuit(spec, mapping), binding)
        n = 8
        a_bits = sum(1 << (n - 1 - q) for q in mapping.alpha_qubits())
        b_bits = sum(1 << (n - 1 - q) for q in mapping.beta_qubits())
        idx = np.arange(1 << n, dtype=np.uint64)
        na = np.bitwise_count(idx & np.uint64(a_bits))
        nb = np.bitwise_count(idx & np.uint64(b_bits))
        outside = ~((na == 2) & (nb == 2))
        leak = float(np.sum(np.abs(state.amplitudes[outside]) ** 2))
        assert leak < 1e-20, (variant, leak)
        worst_leak = max(worst_leak, leak)

        from uccvqe.hamio import MeasurementGroup

        z_grp = MeasurementGroup(0, (PauliWord.from_axes("Z" * 8, 1.0),), ("Z",) * 8)
        hist = sample_group(state, z_grp, 4000, seed=9)
        for kind in ("particle", "spin"):
            kept = postselect(hist, PostSelectionPolicy(kind, SpinSector(2, 2)), mapping)
            assert kept.shots == hist.shots, (variant, kind)
    report("symmetry-conservation", f"(4 variants, worst sector leakage {worst_leak:.1e})")


def _h2_setup(h2_path):
    ints = parse_fcidump(h2_path)
    mapping = QubitMapping.identity(2)
    h = build_qubit_hamiltonian(ints, ActiveSelection.full(ints), mapping)
    spec = enumerate_excitations("uccdab", ActiveSpace(2, 2), ints.orbsym)
    res = optimize(h, spec, mapping)
    return h, spec, mapping, res


def test_mitigation_error_ordering(h2_path):
    h, spec, mapping, res = _h2_setup(h2_path)
    ev = evaluate_sampled(h, spec, mapping, res.params, 6000, seed=31)
    sector = SpinSector(1, 1)
    errs = np.zeros((10, 3))
    for seed in range(10):
        rng = np.random.default_rng(5000 + seed)
        dirty = []
        for grp, hist in zip(ev.groups, ev.histograms):
            if not grp.is_z_basis():
                dirty.append(hist)
                continue
            counts = dict(hist.counts)
            n_replace = int(round(0.10 * hist.shots))
            keys = list(counts)
            probs = np.array([counts[k] for k in keys], dtype=float)
            probs /= probs.sum()
            for key, r in zip(keys, rng.multinomial(n_replace, probs)):
                counts[key] -= min(int(r), counts[key])
            deficit = hist.shots - sum(counts.values())
            for s in rng.integers(0, 16, size=deficit):
                b = format(int(s), "04b")
                counts[b] = counts.get(b, 0) + 1
            dirty.append(Histogram({k: v for k, v in counts.items() if v > 0},
                                   hist.shots, hist.group_id, hist.seed))
        e_raw, _ = energy_from_histograms(ev.groups, dirty, h.offset)
        e_part, _ = mitigated_energy(ev.groups, dirty, PostSelectionPolicy("particle", sector),
                                     mapping, h)
        e_spin, _ = mitigated_energy(ev.groups, dirty, PostSelectionPolicy("spin", sector),
                                     mapping, h)
        errs[seed] = [abs(e_raw - res.energy), abs(e_part - res.energy), abs(e_spin - res.energy)]
    mean = errs.mean(axis=0)
    assert mean[0] > mean[1] > mean[2], mean
    report("mitigation-ordering",
           f"(mean |error| raw {mean[0]:.4f} > particle {mean[1]:.4f} > spin {mean[2]:.4f} Ha)")


def test_shot_scaling(h2_path):
    start = time.perf_counter()
    h, spec, mapping, res = _h2_setup(h2_path)
    ses = np.zeros((10, 3))
    for seed in range(10):
        for col, shots in enumerate((600, 6000, 60000)):
            ev = evaluate_sampled(h, spec, mapping, res.params, shots, seed=7000 + seed)
            ses[seed, col] = ev.standard_error
    mean_se = ses.mean(axis=0)
    r1 = mean_se[0] / mean_se[1]
    r2 = mean_se[1] / mean_se[2]
    target = np.sqrt(10)
    assert abs(r1 - target) < 0.2 * target, r1
    assert abs(r2 - target) < 0.2 * target, r2
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    report("shot-scaling", f"(SE ratios {r1:.2f}, {r2:.2f} vs sqrt(10)={target:.2f}, {elapsed:.0f}s)")


def test_estimator_consistency_at_high_shot_count():
    rng = np.random.default_rng(900)
    n = 6
    for instance in range(5):
        words = [
            PauliWord.from_axes("".join(rng.choice(list("IXYZ")) for _ in range(n)),
                                float(rng.normal(scale=0.5)))
            for _ in range(12)
        ]
        terms = PauliSum(n, [w for w in words if not w.is_identity()])
        h = QubitHamiltonian(n, terms, float(rng.normal()), None, ActiveSpace(0, 3))
        gates = []
        for _ in range(25):
            kind = rng.choice(["X", "H", "S", "RZ", "CNOT"])
            if kind == "CNOT":
                c, t = rng.choice(n, size=2, replace=False)
                gates.append(Gate("CNOT", (int(c), int(t))))
            elif kind == "RZ":
                gates.append(Gate("RZ", (int(rng.integers(n)),), float(rng.normal())))
            else:
                gates.append(Gate(kind, (int(rng.integers(n)),)))
        state = apply_circuit(Statevector.zero(n), Circuit(n, gates))
        groups = qwc_group(h)
        hists = [sample_group(state, g, 1_000_000, seed=100 * instance + g.index)
                 for g in groups]
        energy, se = energy_from_histograms(groups, hists, h.offset)
        exact = expectation(state, h)
        assert abs(energy - exact) < 3 * se + 1e-12, (instance, energy, exact, se)
    report("estimator-consistency", "(5 instances at 1e6 shots per group)")


@pytest.mark.skipif(benzene_fcidump_path() is None,
                    reason="benzene integrals file not supplied "
                           "(set UCCVQE_BENZENE_FCIDUMP, see README)")
def test_benzene_reference_reproduction():
    path = benzene_fcidump_path()
    ints = parse_fcidump(path)
    sel = ActiveSelection(4, tuple(range(ints.n_orbitals))) if ints.n_orbitals == 4 \
        else ActiveSelection(4, tuple(ints.n_orbitals - 4 + k for k in range(4)))
    space = sel.active_space()
    sym = OrbitalSymmetry(tuple(ints.orbsym[o] for o in sel.orbitals))
    spec = enumerate_excitations("uccdab", space, sym)
    mapping = greedy_map(spec.excitations, space.n_qubits, seed=0, restarts=32)
    h = build_qubit_hamiltonian(ints, sel, mapping)

    exact = exact_ground_energy(h, SpinSector(2, 2))
    assert exact == pytest.approx(TARGET_ENERGY_CAS44, abs=1e-3), exact

    groups = qwc_group(h)
    deviation = (len(groups) - TARGET_QWC_CAS44) / TARGET_QWC_CAS44
    assert abs(deviation) <= 0.20, len(groups)

    res = optimize(h, spec, mapping)
    gap = res.energy - exact
    assert 0.0 <= gap < 0.015, gap  # small positive ansatz error expected
    report("benzene-reference",
           f"(exact {exact:.4f} Ha, groups {len(groups)}, ansatz gap {gap*1000:.1f} mEh)")
