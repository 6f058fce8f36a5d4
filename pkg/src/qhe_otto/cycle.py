"""One Otto cycle: hot isochore, compression, cold isochore, expansion."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import OttoError
from .pauli import PauliVector, eigensystem, fidelity
from .propagator import DEFAULT_STEPS, DriveProtocol, evolve, reverse
from .protocols import (
    InvariantParams,
    LZParams,
    ZProtocolKind,
    invariant_drive,
    lz_drive,
    lz_endpoints,
)
from .thermo import (
    BathPair,
    HeatForm,
    Regime,
    classify,
    clausius_ok,
    cost,
    cost_ratio,
    engine_efficiency,
    heat_work,
    heats_closed_form,
    quasi_static,
)

DRIVES = ("lz", "inv")


@dataclass(frozen=True)
class CycleConfig:
    tau: float
    ratio: float
    eps1: float = 1.0
    beta1: float = 0.01
    beta2: float = 0.04
    x: float = 0.1
    n: int = DEFAULT_STEPS
    drive: str = "lz"
    a_const: float | None = None
    protocol: ZProtocolKind = ZProtocolKind.QUINTIC
    heat_form: HeatForm = HeatForm.DERIVED

    def __post_init__(self):
        object.__setattr__(self, "protocol", ZProtocolKind(self.protocol))
        object.__setattr__(self, "heat_form", HeatForm(self.heat_form))
        if self.drive not in DRIVES:
            raise ValueError(f"drive must be one of {DRIVES}, got {self.drive!r}")
        if self.drive == "inv" and self.a_const is None:
            raise ValueError("the invariant drive needs an integration constant A")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        BathPair(self.beta1, self.beta2)
        lz_endpoints(self.eps1, self.ratio, self.x)

    @property
    def baths(self) -> BathPair:
        return BathPair(self.beta1, self.beta2)

    @property
    def eps2(self) -> float:
        return self.ratio * self.eps1

    def lz_params(self) -> LZParams:
        z1, z2 = lz_endpoints(self.eps1, self.ratio, self.x)
        return LZParams(z1, z2, self.x, self.tau)

    def invariant_params(self) -> InvariantParams:
        return InvariantParams(self.lz_params(), self.a_const, self.protocol)

    def hamiltonians(self) -> tuple[PauliVector, PauliVector]:
        p = self.lz_params()
        return PauliVector(p.x, 0.0, p.z1), PauliVector(p.x, 0.0, p.z2)


@dataclass(frozen=True)
class CycleResult:
    f1: float
    f2: float
    q1: float
    q2: float
    w: float
    eta: float | None
    w_qs: float
    eta_qs: float
    cost: float
    cost_ratio: float | None
    regime: Regime
    clausius: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _with_context(exc: OttoError, context: str) -> OttoError:
    exc.args = (f"{context}: {exc}",) + exc.args[1:]
    return exc


def build_drive(cfg: CycleConfig) -> DriveProtocol:
    """Compression-stroke drive for the configured family."""
    try:
        if cfg.drive == "lz":
            return lz_drive(cfg.lz_params())
        return invariant_drive(cfg.invariant_params())
    except OttoError as exc:
        raise _with_context(
            exc, f"building {cfg.drive} drive (tau={cfg.tau}, ratio={cfg.ratio}, A={cfg.a_const})"
        )


def stroke_unitaries(cfg: CycleConfig, drive: DriveProtocol | None = None):
    """(U_egc, U_ege): compression under the drive, expansion under its time reverse."""
    drive = build_drive(cfg) if drive is None else drive
    try:
        u_egc = evolve(drive, cfg.n).u
    except OttoError as exc:
        raise _with_context(exc, "compression stroke")
    try:
        u_ege = evolve(reverse(drive), cfg.n).u
    except OttoError as exc:
        raise _with_context(exc, "expansion stroke")
    return u_egc, u_ege


def stroke_fidelities(u_egc, u_ege, h1: PauliVector, h2: PauliVector, level: str = "ground"):
    """(F1, F2) measured on the ground (i=1) or excited (i=2) eigenstates."""
    s1 = getattr(eigensystem(h1), level)
    s2 = getattr(eigensystem(h2), level)
    f2 = fidelity(s2, u_egc @ s1)
    f1 = fidelity(s1, u_ege @ s2)
    return f1, f2


def fidelity_pair(cfg: CycleConfig) -> tuple[float, float]:
    h1, h2 = cfg.hamiltonians()
    return stroke_fidelities(*stroke_unitaries(cfg), h1, h2)


def run_cycle(cfg: CycleConfig) -> CycleResult:
    drive = build_drive(cfg)
    h1, h2 = cfg.hamiltonians()
    u_egc, u_ege = stroke_unitaries(cfg, drive)
    f1, f2 = stroke_fidelities(u_egc, u_ege, h1, h2)

    eps1, eps2 = cfg.eps1, cfg.eps2
    q1, q2 = heats_closed_form(eps1, eps2, cfg.beta1, cfg.beta2, f1, f2, cfg.heat_form)
    hw = heat_work(q1, q2)
    w_qs, eta_qs = quasi_static(eps1, eps2, cfg.beta1, cfg.beta2)
    ratio_c = cost_ratio(cfg.invariant_params()) if cfg.drive == "inv" else None
    regime = classify(hw.q1, hw.q2, hw.w)
    return CycleResult(
        f1=f1,
        f2=f2,
        q1=hw.q1,
        q2=hw.q2,
        w=hw.w,
        eta=engine_efficiency(hw, regime),
        w_qs=w_qs,
        eta_qs=eta_qs,
        cost=cost(drive, cfg.n),
        cost_ratio=ratio_c,
        regime=regime,
        clausius=clausius_ok(hw.q1, hw.q2, cfg.beta1, cfg.beta2),
    )


def a_for_cost_ratio(cfg: CycleConfig, target: float) -> float:
    """Integration constant A giving the requested cost ratio C_I/C_LZ."""
    p = cfg.lz_params()
    mean_sq = p.z1**2 + p.z1 * p.dz + p.dz**2 / 3.0 + p.x**2
    return float(np.sqrt(target * mean_sq))
