"""Exact algebra of traceless Hermitian 2x2 generators X*sx + Y*sy + Z*sz.

Spinors are length-2 complex numpy arrays and unitaries are 2x2 complex
arrays; only the generator itself gets a dedicated value type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateGenerator, NotNormalized

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# below this value of |p| * dt the sinc factor switches to its Taylor series
_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class PauliVector:
    """Real coefficients of X*sx + Y*sy + Z*sz, in energy units."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"PauliVector.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, v) -> "PauliVector":
        x, y, z = np.asarray(v, dtype=float)
        return cls(x, y, z)

    @property
    def epsilon(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def matrix(self) -> np.ndarray:
        return self.x * SIGMA_X + self.y * SIGMA_Y + self.z * SIGMA_Z

    def scaled(self, factor: float) -> "PauliVector":
        return PauliVector(factor * self.x, factor * self.y, factor * self.z)


class EigenSystem(NamedTuple):
    epsilon: float
    ground: np.ndarray  # eigenvalue -epsilon
    excited: np.ndarray  # eigenvalue +epsilon


def _fix_phase(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    lead = v[0] if v[0] != 0 else v[1]
    return v * (abs(lead) / lead)


def eigensystem(p: PauliVector) -> EigenSystem:
    """Eigenvalues -eps/+eps and their eigenvectors for p.

    Each eigenvector is built from whichever row of (H -/+ eps) is better
    conditioned, so Z close to +eps or -eps loses no precision.  Global
    phase makes the first nonzero component real and positive; for Y = 0
    and X >= 0 this reproduces the usual real Landau-Zener eigenstates.
    """
    eps = p.epsilon
    if eps == 0.0:
        raise DegenerateGenerator("generator is zero; eigenbasis undefined")
    off_lo = complex(p.x, -p.y)  # H[0, 1]
    off_hi = complex(p.x, p.y)  # H[1, 0]
    plus, minus = eps + p.z, eps - p.z
    if plus >= minus:
        ground = np.array([off_lo, -plus], dtype=complex)
        excited = np.array([plus, off_hi], dtype=complex)
    else:
        ground = np.array([minus, -off_hi], dtype=complex)
        excited = np.array([off_lo, minus], dtype=complex)
    return EigenSystem(eps, _fix_phase(ground), _fix_phase(excited))


def step_unitaries(vectors: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i (p . sigma) dt) for a stack of generators, shape (N, 3) -> (N, 2, 2)."""
    v = np.asarray(vectors, dtype=float).reshape(-1, 3)
    eps = np.sqrt(np.einsum("ij,ij->i", v, v))
    theta = eps * dt
    small = np.abs(theta) < _SERIES_CUTOFF
    safe_eps = np.where(small, 1.0, eps)
    # sin(eps*dt)/eps without the 0/0 at eps = 0
    sinc = np.where(small, dt * (1.0 - theta * theta / 6.0), np.sin(theta) / safe_eps)
    c = np.cos(theta)
    sx, sy, sz = (sinc * v[:, 0], sinc * v[:, 1], sinc * v[:, 2])
    out = np.empty((v.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = c - 1j * sz
    out[:, 0, 1] = -sy - 1j * sx
    out[:, 1, 0] = sy - 1j * sx
    out[:, 1, 1] = c + 1j * sz
    return out


def step_unitary(p: PauliVector, dt: float) -> np.ndarray:
    """Analytic exp(-i (p . sigma) dt) = cos(eps dt) I - i sin(eps dt) (p_hat . sigma)."""
    if not math.isfinite(dt):
        raise ValueError(f"dt must be finite, got {dt!r}")
    return step_unitaries(p.as_array(), dt)[0]


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Squared overlap |<a|b>|^2 of two normalized spinors."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for name, v in (("a", a), ("b", b)):
        norm = float(np.vdot(v, v).real)
        if abs(norm - 1.0) > 1e-6:
            raise NotNormalized(f"spinor {name} has squared norm {norm!r}")
    # |<a|b>| == |<b|a>| bit-for-bit, which keeps the function symmetric
    f = abs(np.vdot(a, b)) ** 2
    return float(min(1.0, max(0.0, f)))


def frobenius_sq(p: PauliVector) -> float:
    """trace(H^dagger H) = 2 (x^2 + y^2 + z^2)."""
    return 2.0 * (p.x * p.x + p.y * p.y + p.z * p.z)


def commutator_norm(a: PauliVector, b: PauliVector) -> float:
    """Frobenius norm of [a.sigma, b.sigma] = 2i (a x b).sigma."""
    cross = np.cross(a.as_array(), b.as_array())
    return 2.0 * math.sqrt(2.0) * float(np.linalg.norm(cross))
