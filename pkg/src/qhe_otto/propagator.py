"""Time-ordered evolution operators for a time-dependent qubit generator.

The production path is the midpoint product formula

    U(0; tau) = U_{n-2} ... U_1 U_0,   U_i = exp(-i F((t_i + t_{i+1})/2) dt)

on a grid of ``n`` points.  Every step is an analytic SU(2) exponential;
the ordered product is reduced pairwise (later factor always on the left)
so the whole stroke is a handful of batched 2x2 matmuls instead of a
Python loop over 10^4 steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidStepCount, NonFiniteDrive, ToleranceNotReached
from .pauli import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, PauliVector, step_unitaries

DEFAULT_STEPS = 10001


@dataclass(frozen=True)
class DriveProtocol:
    """t -> PauliVector on [0, tau].

    ``func`` must be vectorized: it takes a 1-D array of times and returns an
    array of shape (len(t), 3).
    """

    tau: float
    func: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    # set on reversed drives so that reversing twice returns the original exactly
    reversed_from: "DriveProtocol | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"drive duration must be positive and finite, got {self.tau!r}")

    def sample(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.asarray(self.func(t), dtype=float).reshape(t.shape[0], 3)

    def __call__(self, t: float) -> PauliVector:
        return PauliVector.from_array(self.sample(t)[0])


@dataclass(frozen=True)
class EvolutionResult:
    u: np.ndarray
    steps: int
    note: str = ""


def constant_drive(p: PauliVector, tau: float) -> DriveProtocol:
    vec = p.as_array()
    return DriveProtocol(tau, lambda t: np.broadcast_to(vec, (np.shape(t)[0], 3)), "constant")


def reverse(drive: DriveProtocol) -> DriveProtocol:
    """The protocol t -> drive(tau - t) over the same duration."""
    if drive.reversed_from is not None:
        return drive.reversed_from
    tau = drive.tau
    func = drive.func
    label = f"reverse({drive.label})" if drive.label else "reverse"
    return DriveProtocol(tau, lambda t: func(tau - t), label, reversed_from=drive)


def ordered_product(factors: np.ndarray) -> np.ndarray:
    """factors[-1] @ ... @ factors[1] @ factors[0] by pairwise reduction."""
    stack = np.asarray(factors)
    if stack.shape[0] == 0:
        return IDENTITY.copy()
    while stack.shape[0] > 1:
        m = stack.shape[0] // 2
        paired = np.matmul(stack[1 : 2 * m : 2], stack[0 : 2 * m : 2])
        if stack.shape[0] % 2:
            # the unpaired factor is the latest one and stays leftmost
            paired = np.concatenate([paired, stack[-1:]], axis=0)
        stack = paired
    return stack[0]


def midpoint_grid(tau: float, n: int) -> tuple[np.ndarray, float]:
    """Midpoints of the n-point uniform grid on [0, tau] and its spacing."""
    dt = tau / (n - 1)
    return (np.arange(n - 1) + 0.5) * dt, dt


def evolve(drive: DriveProtocol, n: int = DEFAULT_STEPS) -> EvolutionResult:
    if n < 2:
        raise InvalidStepCount(f"need at least 2 grid points, got {n}")
    mids, dt = midpoint_grid(drive.tau, n)
    vecs = drive.sample(mids)
    if not np.all(np.isfinite(vecs)):
        bad = int(np.argmin(np.all(np.isfinite(vecs), axis=1)))
        raise NonFiniteDrive(f"drive {drive.label or '?'} is non-finite at t = {mids[bad]:.6g}")
    u = ordered_product(step_unitaries(vecs, dt))
    return EvolutionResult(u, n, f"midpoint product, dt={dt:.6g}")


def _polar_unitary(m: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def evolve_oracle(drive: DriveProtocol, tol: float = 1e-10) -> np.ndarray:
    """Adaptive DOP853 integration of i dU/dt = F(t) U, projected back onto U(2).

    Independent of the product formula; intended for cross-checks only.
    """
    if not 1e-12 <= tol <= 1e-4:
        raise ValueError(f"tol must lie in [1e-12, 1e-4], got {tol!r}")

    def rhs(t, y):
        u = (y[:4] + 1j * y[4:]).reshape(2, 2)
        x, yy, z = drive.sample(t)[0]
        du = -1j * ((x * SIGMA_X + yy * SIGMA_Y + z * SIGMA_Z) @ u)
        flat = du.ravel()
        return np.concatenate([flat.real, flat.imag])

    y0 = np.concatenate([IDENTITY.ravel().real, IDENTITY.ravel().imag])
    sol = solve_ivp(rhs, (0.0, drive.tau), y0, method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise ToleranceNotReached(sol.message)
    final = sol.y[:, -1]
    u = (final[:4] + 1j * final[4:]).reshape(2, 2)
    if not np.all(np.isfinite(u)):
        raise ToleranceNotReached("oracle produced non-finite entries")
    return _polar_unitary(u)
