#!/usr/bin/env python3
"""Benchmark the compiled statevector kernels against the numpy fallback.

Runs each hot kernel over a sweep of register sizes and prints a timing
table plus speedups. The full-pipeline row times one uCCDab energy
evaluation end to end (circuit application + expectation), which is the
inner loop of the optimizer.

Usage: python benchmarks/bench_kernels.py [--max-qubits 20]
"""
import argparse
import time

import numpy as np

from uccvqe.kernels import _py

try:
    from uccvqe.kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def random_state(n, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def bench_gates(impl, n, state):
    h = 1 / np.sqrt(2)

    def run():
        s = state.copy()
        for q in range(n):
            impl.apply_1q(s, n, q, h, h, h, -h)
        for q in range(n - 1):
            impl.apply_cnot(s, n, q, q + 1)
        for q in range(n):
            impl.apply_phase(s, n, q, 1.0, 1.0j)

    return timeit(run)


def bench_expectation(impl, n, state, words):
    def run():
        acc = 0.0j
        for x, z in words:
            acc += impl.pauli_expectation(state, n, x, z)
        return acc

    return timeit(run)


def bench_pipeline(n_orbitals):
    """One full energy evaluation of a uCCDab circuit on 2*n_orbitals qubits."""
    from uccvqe.ansatz import enumerate_excitations
    from uccvqe.circuit import build_ansatz_circuit
    from uccvqe.hamio import ActiveSelection, MolecularIntegrals, build_qubit_hamiltonian
    from uccvqe.mapping import greedy_map
    from uccvqe.sim import Statevector, apply_circuit, expectation
    from uccvqe.symmetry import OrbitalSymmetry

    rng = np.random.default_rng(1)
    n = n_orbitals
    h1 = rng.normal(size=(n, n))
    h1 = (h1 + h1.T) / 2
    g = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            g[p, p, q, q] = 0.4 / (1 + abs(p - q))
            g[p, q, p, q] = 0.05 / (1 + abs(p - q))
    ints = MolecularIntegrals(n, n, 0, 0.0, h1, g, OrbitalSymmetry.all_symmetric(n))
    sel = ActiveSelection.full(ints)
    spec = enumerate_excitations("uccdab", sel.active_space())
    mapping = greedy_map(spec.excitations, 2 * n, seed=0, restarts=4)
    ham = build_qubit_hamiltonian(ints, sel, mapping)
    circ = build_ansatz_circuit(spec, mapping)
    binding = {p: 0.1 for p in spec.parameter_names()}

    def run():
        state = apply_circuit(Statevector.zero(2 * n), circ, binding)
        return expectation(state, ham)

    return timeit(run, repeats=3), len(circ.gates), ham.term_count


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-qubits", type=int, default=20)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernels unavailable; build with `python setup.py build_ext --inplace`")

    rng = np.random.default_rng(7)
    print(f"{'n':>3} {'kernel':<12} {'python (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for n in range(8, args.max_qubits + 1, 4):
        state = random_state(n)
        words = [
            (int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))) for _ in range(8)
        ]
        rows = [("gate sweep", bench_gates, (n, state))]
        rows.append(("expectation", bench_expectation, (n, state, words)))
        for label, fn, fargs in rows:
            t_py = fn(_py, *fargs) * 1e3
            if _core is not None:
                t_c = fn(_core, *fargs) * 1e3
                print(f"{n:>3} {label:<12} {t_py:>12.3f} {t_c:>14.3f} {t_py / t_c:>8.2f}x")
            else:
                print(f"{n:>3} {label:<12} {t_py:>12.3f} {'-':>14} {'-':>8}")

    import os

    print("\nfull uCCDab energy evaluation (selected backend:"
          f" {os.environ.get('UCCVQE_PURE_PYTHON') and 'python' or 'auto'})")
    print(f"{'orbitals':>8} {'qubits':>7} {'gates':>6} {'terms':>6} {'time (ms)':>10}")
    for n_orb in (4, 6, 8):
        t, n_gates, n_terms = bench_pipeline(n_orb)
        print(f"{n_orb:>8} {2 * n_orb:>7} {n_gates:>6} {n_terms:>6} {t * 1e3:>10.2f}")


if __name__ == "__main__":
    main()
