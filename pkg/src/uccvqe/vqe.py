"""Classical parameter optimization and sampled energy evaluation.

Parameters are optimized against the exact statevector energy; the sampled
estimate is produced afterwards at the optimum, skipping any iterative
quantum-classical loop. The optimizer is a BFGS quasi-Newton iteration with
central finite-difference gradients and a backtracking line search, so
accepted steps never raise the energy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ansatz import AnsatzSpec
from .circuit import build_ansatz_circuit
from .hamio import QubitHamiltonian, qwc_group
from .mapping import QubitMapping
from .sim import Histogram, Statevector, apply_circuit, energy_from_histograms, expectation, sample_group


class VqeError(ValueError):
    pass


@dataclass
class OptimizeConfig:
    fd_step: float = 1e-5
    energy_tol: float = 1e-9
    grad_tol: float = 1e-6
    max_iterations: int = 500


@dataclass
class VqeResult:
    params: np.ndarray
    energy: float
    trace: list[tuple[np.ndarray, float]]
    evaluations: int
    converged: bool


def _objective(h: QubitHamiltonian, spec: AnsatzSpec, mapping: QubitMapping):
    circuit = build_ansatz_circuit(spec, mapping)
    names = spec.parameter_names()
    zero = Statevector.zero(mapping.n_qubits)

    def energy(theta: np.ndarray) -> float:
        binding = dict(zip(names, map(float, theta)))
        return expectation(apply_circuit(zero, circuit, binding), h)

    return energy


def optimize(
    h: QubitHamiltonian,
    spec: AnsatzSpec,
    mapping: QubitMapping,
    init: Optional[Sequence[float]] = None,
    config: Optional[OptimizeConfig] = None,
) -> VqeResult:
    """Minimize the circuit energy from a Hartree-Fock start (all zeros)."""
    if not h.terms.is_hermitian():
        raise VqeError("Hamiltonian is not hermitian")
    cfg = config or OptimizeConfig()
    m = spec.parameter_count
    x = np.zeros(m) if init is None else np.asarray(init, dtype=float).copy()
    if x.shape != (m,):
        raise VqeError(f"expected {m} parameters, got {x.shape}")

    energy = _objective(h, spec, mapping)
    evals = 0

    def f(theta):
        nonlocal evals
        evals += 1
        return energy(theta)

    def grad(theta, f0):
        g = np.zeros(m)
        for k in range(m):
            step = np.zeros(m)
            step[k] = cfg.fd_step
            g[k] = (f(theta + step) - f(theta - step)) / (2 * cfg.fd_step)
        return g

    f0 = f(x)
    trace = [(x.copy(), f0)]
    if m == 0:
        return VqeResult(x, f0, trace, evals, True)

    g = grad(x, f0)
    binv = np.eye(m)
    converged = False
    for _ in range(cfg.max_iterations):
        if np.max(np.abs(g)) < cfg.grad_tol:
            converged = True
            break
        d = -binv @ g
        slope = float(d @ g)
        if slope >= 0:
            d = -g
            slope = float(d @ g)
        step = 1.0
        f_new = None
        while step > 1e-14:
            cand = x + step * d
            fc = f(cand)
            if fc <= f0 + 1e-4 * step * slope:
                f_new = fc
                break
            step *= 0.5
        if f_new is None:
            break  # line search failed: numerically at a minimum
        x_new = x + step * d
        g_new = grad(x_new, f_new)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12:
            rho = 1.0 / sy
            eye = np.eye(m)
            binv = (eye - rho * np.outer(s, y)) @ binv @ (eye - rho * np.outer(y, s)) + rho * np.outer(s, s)
        delta = f0 - f_new
        x, f0, g = x_new, f_new, g_new
        trace.append((x.copy(), f0))
        if delta < cfg.energy_tol and np.max(np.abs(g)) < cfg.grad_tol:
            converged = True
            break
    return VqeResult(x, f0, trace, evals, converged)


@dataclass
class SampledEvaluation:
    energy: float
    standard_error: float
    groups: list
    histograms: list[Histogram]
    shots_per_group: list[int]


def group_seed(base_seed: int, group_index: int) -> int:
    """Deterministic per-group sampling seed derived from the base seed."""
    return int(np.random.SeedSequence((int(base_seed), int(group_index))).generate_state(1)[0])


def evaluate_sampled(
    h: QubitHamiltonian,
    spec: AnsatzSpec,
    mapping: QubitMapping,
    params: Sequence[float],
    shots: int,
    seed: int,
    shot_mode: str = "per-group",
) -> SampledEvaluation:
    """Sample every QWC group of H at fixed parameters.

    ``shot_mode`` 'per-group' spends ``shots`` on each group; 'total' splits
    ``shots`` as evenly as possible across groups.
    """
    if shot_mode not in ("per-group", "total"):
        raise VqeError(f"unknown shot mode {shot_mode!r}")
    groups = qwc_group(h)
    if not groups:
        raise VqeError("Hamiltonian has no measurable terms")
    circuit = build_ansatz_circuit(spec, mapping)
    binding = dict(zip(spec.parameter_names(), map(float, params)))
    state = apply_circuit(Statevector.zero(mapping.n_qubits), circuit, binding)

    n_groups = len(groups)
    if shot_mode == "per-group":
        budget = [shots] * n_groups
    else:
        base, extra = divmod(shots, n_groups)
        budget = [base + (1 if i < extra else 0) for i in range(n_groups)]
        if base == 0:
            raise VqeError(f"{shots} total shots cannot cover {n_groups} groups")

    histograms = [
        sample_group(state, grp, budget[i], group_seed(seed, i))
        for i, grp in enumerate(groups)
    ]
    energy, se = energy_from_histograms(groups, histograms, h.offset)
    return SampledEvaluation(energy, se, groups, histograms, budget)
