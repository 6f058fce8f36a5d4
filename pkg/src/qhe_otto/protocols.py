"""Drive families: the linear Landau-Zener sweep and the invariant-based shortcut.

The invariant drive is I(t) = x(t) sx + y(t) sy + z(t) sz with

    y = zdot / (2X),    x = sqrt(A^2 - zdot^2/(4X^2) - z^2),

where X is the constant transverse field of the LZ Hamiltonian and z(t) is a
smooth ramp between A*z1/eps1 and A*z2/eps2 with vanishing first and second
derivatives at both ends.  The coefficient vector therefore has constant
length A.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GapTooLarge, RadicandNegative
from .propagator import DriveProtocol

# radicand validation grid; the acceptance contract asks for >= 2048 samples
VALIDATION_POINTS = 4097


@dataclass(frozen=True)
class LZParams:
    z1: float
    z2: float
    x: float
    tau: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError(f"transverse field x must be positive, got {self.x!r}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")

    @property
    def eps1(self) -> float:
        return math.hypot(self.z1, self.x)

    @property
    def eps2(self) -> float:
        return math.hypot(self.z2, self.x)

    @property
    def dz(self) -> float:
        return self.z2 - self.z1


class ZProtocolKind(str, enum.Enum):
    QUINTIC = "quintic"
    SINE = "sine"
    SEXTIC = "sextic"


@dataclass(frozen=True)
class InvariantParams:
    base: LZParams
    a_const: float
    kind: ZProtocolKind = ZProtocolKind.QUINTIC

    def __post_init__(self):
        if not self.a_const > 0:
            raise ValueError(f"integration constant A must be positive, got {self.a_const!r}")
        object.__setattr__(self, "kind", ZProtocolKind(self.kind))


def lz_endpoints(eps1: float, ratio: float, x: float) -> tuple[float, float]:
    """Positive z1, z2 giving gaps eps1 and ratio*eps1 at transverse field x."""
    if not eps1 > 0:
        raise ValueError(f"eps1 must be positive, got {eps1!r}")
    if not 0 < ratio <= 1:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio!r}")
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    eps2 = ratio * eps1
    if x > eps2:
        raise GapTooLarge(f"x = {x!r} exceeds eps2 = ratio*eps1 = {eps2!r}")
    return math.sqrt(eps1 * eps1 - x * x), math.sqrt(eps2 * eps2 - x * x)


def lz_drive(p: LZParams) -> DriveProtocol:
    """X = x, Y = 0, Z = z1 + (z2 - z1) t / tau."""
    z1, dz, x, tau = p.z1, p.dz, p.x, p.tau

    def func(t):
        out = np.empty((t.shape[0], 3))
        out[:, 0] = x
        out[:, 1] = 0.0
        out[:, 2] = z1 + dz * (t / tau)
        return out

    return DriveProtocol(tau, func, "lz")


def _quintic(s):
    f = s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
    f1 = 30.0 * s * s * (1.0 - s) ** 2
    f2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    return f, f1, f2


def _sine(s):
    u = np.sin(0.5 * np.pi * s) ** 2
    u1 = 0.5 * np.pi * np.sin(np.pi * s)
    u2 = 0.5 * np.pi**2 * np.cos(np.pi * s)
    f = np.sin(0.5 * np.pi * u) ** 2
    g1 = 0.5 * np.pi * np.sin(np.pi * u)
    g2 = 0.5 * np.pi**2 * np.cos(np.pi * u)
    return f, g1 * u1, g2 * u1 * u1 + g1 * u2


def _sextic(s):
    # 15 s^4 - 24 s^5 + 10 s^6: the s^4..s^6 ramp with f'(1) = f''(1) = 0
    f = s**4 * (15.0 - 24.0 * s + 10.0 * s * s)
    f1 = 60.0 * s**3 * (1.0 - s) ** 2
    f2 = 60.0 * s * s * (3.0 - 8.0 * s + 5.0 * s * s)
    return f, f1, f2


_SHAPES: dict[ZProtocolKind, Callable] = {
    ZProtocolKind.QUINTIC: _quintic,
    ZProtocolKind.SINE: _sine,
    ZProtocolKind.SEXTIC: _sextic,
}


@dataclass(frozen=True)
class ZProfile:
    """z(t) = z0 + (zt - z0) f(t / tau) with analytic derivatives."""

    kind: ZProtocolKind
    z0: float
    zt: float
    tau: float

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        f, f1, f2 = _SHAPES[self.kind](t / self.tau)
        d = self.zt - self.z0
        return self.z0 + d * f, d * f1 / self.tau, d * f2 / self.tau**2

    def z(self, t):
        return self.evaluate(t)[0]

    def dz(self, t):
        return self.evaluate(t)[1]

    def d2z(self, t):
        return self.evaluate(t)[2]


def z_protocol(kind, z0: float, zt: float, tau: float) -> ZProfile:
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    return ZProfile(ZProtocolKind(kind), float(z0), float(zt), float(tau))


def invariant_boundaries(A: float, z1: float, z2: float, x: float) -> tuple[float, float]:
    """Endpoint values of z(t) that make I(0) || H1 and I(tau) || H2."""
    if not A > 0:
        raise ValueError(f"A must be positive, got {A!r}")
    return A * z1 / math.hypot(z1, x), A * z2 / math.hypot(z2, x)


def invariant_profile(p: InvariantParams) -> ZProfile:
    b = p.base
    z0, zt = invariant_boundaries(p.a_const, b.z1, b.z2, b.x)
    return z_protocol(p.kind, z0, zt, b.tau)


def invariant_radicand(p: InvariantParams, t) -> np.ndarray:
    """A^2 - zdot^2/(4X^2) - z^2, which must stay positive for a Hermitian invariant."""
    z, dz, _ = invariant_profile(p).evaluate(t)
    X = p.base.x
    return p.a_const**2 - dz * dz / (4.0 * X * X) - z * z


def check_radicand(p: InvariantParams, points: int = VALIDATION_POINTS) -> float:
    """Minimum radicand on a dense grid; raises RadicandNegative if it is not positive."""
    t = np.linspace(0.0, p.base.tau, points)
    r = invariant_radicand(p, t)
    k = int(np.argmin(r))
    if not r[k] > 0:
        raise RadicandNegative(t[k], r[k])
    return float(r[k])


def invariant_coefficients(p: InvariantParams, t) -> np.ndarray:
    """(x(t), y(t), z(t)) stacked as shape (len(t), 3)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z, dz, _ = invariant_profile(p).evaluate(t)
    X = p.base.x
    y = dz / (2.0 * X)
    with np.errstate(invalid="ignore"):
        x = np.sqrt(p.a_const**2 - y * y - z * z)
    return np.stack([x, y, z], axis=-1)


def invariant_drive(p: InvariantParams) -> DriveProtocol:
    check_radicand(p)
    return DriveProtocol(p.base.tau, lambda t: invariant_coefficients(p, t), f"inv-{p.kind.value}")


def lz_Z_from_invariant(p: InvariantParams) -> Callable[[np.ndarray], np.ndarray]:
    """Longitudinal LZ field Z(t) under which I(t) is a dynamical invariant at fixed X."""
    check_radicand(p)
    prof = invariant_profile(p)
    X = p.base.x
    A2 = p.a_const**2

    def Z(t):
        z, dz, d2z = prof.evaluate(t)
        root = np.sqrt(A2 - dz * dz / (4.0 * X * X) - z * z)
        return (d2z / (4.0 * X) + z * X) / root

    return Z
