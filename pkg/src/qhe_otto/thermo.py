"""Heat, work, efficiency, regime and cost for the qubit Otto cycle.

Units: hbar = k_B = 1.  Throughout, t1 = tanh(beta1*eps1) and
t2 = tanh(beta2*eps2) are the thermal polarizations after the hot and cold
isochores.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import Inconsistent
from .pauli import PauliVector, eigensystem
from .propagator import DEFAULT_STEPS, DriveProtocol, evolve, midpoint_grid, reverse
from .protocols import InvariantParams, check_radicand, invariant_drive, lz_drive


class HeatForm(str, enum.Enum):
    DERIVED = "derived"
    PRINTED = "printed"


class Regime(str, enum.Enum):
    ENGINE = "engine"
    ACCELERATOR = "accelerator"
    HEATER = "heater"
    REFRIGERATOR = "refrigerator"


@dataclass(frozen=True)
class BathPair:
    beta1: float  # hot
    beta2: float  # cold

    def __post_init__(self):
        if not (self.beta1 > 0 and self.beta2 > 0):
            raise ValueError("inverse temperatures must be positive")
        if not self.beta1 < self.beta2:
            raise ValueError(f"hot bath needs beta1 < beta2, got {self.beta1!r} >= {self.beta2!r}")


@dataclass(frozen=True)
class HeatWork:
    q1: float
    q2: float
    w: float
    eta: float | None


def thermal_state(p: PauliVector, beta: float) -> np.ndarray:
    """Gibbs state exp(-beta H)/Z built on the eigenprojectors of H."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    eps, g, e = eigensystem(p)
    pol = math.tanh(beta * eps)
    p_ground = 0.5 * (1.0 + pol)
    p_excited = 0.5 * (1.0 - pol)
    return p_ground * np.outer(g, g.conj()) + p_excited * np.outer(e, e.conj())


def heats_closed_form(eps1, eps2, beta1, beta2, f1, f2, form=HeatForm.DERIVED):
    """(Q1, Q2) as linear functions of the stroke fidelities.

    ``f1`` belongs to the expansion stroke (it sets Q1), ``f2`` to the
    compression stroke.  ``form="printed"`` swaps the gap factors of the
    second terms; it is kept for comparison only and disagrees with the
    density-matrix calculation.
    """
    t1 = math.tanh(beta1 * eps1)
    t2 = math.tanh(beta2 * eps2)
    if HeatForm(form) is HeatForm.DERIVED:
        q1 = -eps1 * (t1 + t2 * (1.0 - 2.0 * f1))
        q2 = -eps2 * (t2 + t1 * (1.0 - 2.0 * f2))
    else:
        q1 = -eps1 * t1 - eps2 * t1 * (1.0 - 2.0 * f1)
        q2 = -eps2 * t2 - eps1 * t2 * (1.0 - 2.0 * f2)
    return q1, q2


def work_total(eps1, eps2, beta1, beta2, f) -> float:
    t1 = math.tanh(beta1 * eps1)
    t2 = math.tanh(beta2 * eps2)
    return -t1 * (eps1 + eps2 * (1.0 - 2.0 * f)) - t2 * (eps2 + eps1 * (1.0 - 2.0 * f))


def zero_work_fidelity(eps1, eps2, beta1, beta2) -> float:
    """Fidelity at which the cycle produces exactly zero work."""
    t1 = math.tanh(beta1 * eps1)
    t2 = math.tanh(beta2 * eps2)
    num = eps1 * t1 + eps2 * t2
    den = eps2 * t1 + eps1 * t2
    if den == 0.0:
        raise ZeroDivisionError("eps2*tanh(b1 e1) + eps1*tanh(b2 e2) vanishes")
    return 0.5 * (1.0 + num / den)


def quasi_static(eps1, eps2, beta1, beta2) -> tuple[float, float]:
    """Adiabatic-limit work and efficiency (W_qs, eta_qs)."""
    if not eps1 > 0:
        raise ValueError(f"eps1 must be positive, got {eps1!r}")
    # 1/(1 + e^{2x}) == (1 - tanh x)/2, finite for any x
    occ1 = 0.5 * (1.0 - math.tanh(beta1 * eps1))
    occ2 = 0.5 * (1.0 - math.tanh(beta2 * eps2))
    return 2.0 * (eps1 - eps2) * (occ1 - occ2), 1.0 - eps2 / eps1


def efficiency(q1: float, w: float) -> float | None:
    if abs(q1) <= 1e-12:
        return None
    return w / q1


def heat_work(q1: float, q2: float) -> HeatWork:
    w = q1 + q2
    return HeatWork(q1, q2, w, efficiency(q1, w))


def classify(q1: float, q2: float, w: float, tol: float = 1e-9, zero: float = 1e-12) -> Regime:
    """Operating regime from the sign pattern of (Q1, Q2, W).

    Ties go to the first matching regime in the order engine, accelerator,
    heater, refrigerator.  |W| <= ``zero`` counts as zero work, so a
    rounding-level W at the F = 1, eps2 = eps1 boundary is an accelerator.
    """
    if abs(w - (q1 + q2)) > tol:
        raise Inconsistent(f"W = {w!r} but Q1 + Q2 = {q1 + q2!r}")
    if q1 >= 0 and q2 <= 0:
        return Regime.ENGINE if w > zero else Regime.ACCELERATOR
    if q1 <= 0 and q2 <= 0:
        return Regime.HEATER
    if q1 <= 0 and q2 >= 0:
        return Regime.REFRIGERATOR
    raise Inconsistent(f"Q1 = {q1!r} > 0 and Q2 = {q2!r} > 0 match no Otto regime")


def engine_efficiency(hw: HeatWork, regime: Regime) -> float | None:
    """W/Q1 for an engine; undefined in every other regime."""
    return hw.eta if regime is Regime.ENGINE else None


def clausius_ok(q1, q2, beta1, beta2, slack: float = 1e-9) -> bool:
    return q1 * beta1 + q2 * beta2 <= slack


def cost(drive: DriveProtocol, n: int = DEFAULT_STEPS) -> float:
    """Integral of ||H(t)||_F^2 by the midpoint rule on the propagator grid."""
    if n < 2:
        raise ValueError(f"need at least 2 grid points, got {n}")
    mids, dt = midpoint_grid(drive.tau, n)
    v = drive.sample(mids)
    return float(2.0 * np.einsum("ij,ij->", v, v) * dt)


def lz_cost(z1, z2, x, tau) -> float:
    """Exact integral of ||H_LZ||^2 for the linear sweep."""
    dz = z2 - z1
    return 2.0 * tau * (z1 * z1 + z1 * dz + dz * dz / 3.0 + x * x)


def cost_ratio(inv: InvariantParams) -> float:
    """C_I / C_LZ = A^2 / mean(Z^2 + X^2); the invariant has constant norm A.

    Validates the invariant first, so an invalid A raises RadicandNegative.
    """
    check_radicand(inv)
    b = inv.base
    return 2.0 * inv.a_const**2 * b.tau / lz_cost(b.z1, b.z2, b.x, b.tau)


def cost_ratio_quadrature(inv: InvariantParams, n: int = DEFAULT_STEPS) -> float:
    return cost(invariant_drive(inv), n) / cost(lz_drive(inv.base), n)


def energy(h: PauliVector, rho: np.ndarray) -> float:
    return float(np.trace(h.matrix() @ rho).real)


def heats_trace_oracle(
    drive: DriveProtocol,
    h1: PauliVector,
    h2: PauliVector,
    beta1: float,
    beta2: float,
    n: int = DEFAULT_STEPS,
) -> tuple[float, float]:
    """Q1, Q2 from explicit density matrices propagated through both strokes.

    ``drive`` runs the compression stroke; the expansion stroke uses its time
    reverse.  ``h1`` and ``h2`` are the isochore Hamiltonians, which fix the
    energy scale (for the invariant drive they differ from I(0), I(tau) by a
    positive factor).
    """
    rho1 = thermal_state(h1, beta1)
    rho2 = thermal_state(h2, beta2)
    u_egc = evolve(drive, n).u
    u_ege = evolve(reverse(drive), n).u
    rho2_in = u_egc @ rho1 @ u_egc.conj().T
    rho1_in = u_ege @ rho2 @ u_ege.conj().T
    q1 = energy(h1, rho1) - energy(h1, rho1_in)
    q2 = energy(h2, rho2) - energy(h2, rho2_in)
    return q1, q2
