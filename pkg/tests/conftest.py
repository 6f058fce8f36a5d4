import numpy as np
import pytest

from qhe_otto.protocols import (
    InvariantParams,
    LZParams,
    RadicandNegative,
    check_radicand,
    invariant_coefficients,
    lz_endpoints,
    lz_Z_from_invariant,
)


def lz_params(ratio, tau, eps1=1.0, x=0.1):
    z1, z2 = lz_endpoints(eps1, ratio, x)
    return LZParams(z1, z2, x, tau)


def random_valid_invariant(rng, kinds=("quintic", "sine", "sextic"), tau_range=(1.0, 3.0)):
    """Rejection-sample an invariant configuration whose radicand stays positive."""
    while True:
        ratio = rng.uniform(0.4, 0.95)
        tau = rng.uniform(*tau_range)
        x = rng.uniform(0.05, 0.3) * ratio
        kind = kinds[rng.integers(len(kinds))]
        a = float(np.exp(rng.uniform(np.log(0.5), np.log(8.0))))
        p = InvariantParams(lz_params(ratio, tau, x=x), a, kind)
        try:
            check_radicand(p)
        except RadicandNegative:
            continue
        return p


def ode_residuals(p, points=10_000):
    """Max residual of xdot=-2yZ, ydot=2xZ-2zX, zdot=2yX by central differences."""
    tau, X = p.base.tau, p.base.x
    h = tau * 1e-5
    t = np.linspace(h, tau - h, points)
    v = invariant_coefficients(p, t)
    dv = (invariant_coefficients(p, t + h) - invariant_coefficients(p, t - h)) / (2 * h)
    Z = lz_Z_from_invariant(p)(t)
    x, y, z = v.T
    res = np.stack([dv[:, 0] + 2 * y * Z, dv[:, 1] - 2 * x * Z + 2 * z * X, dv[:, 2] - 2 * y * X])
    return float(np.max(np.abs(res)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one summary line per acceptance criterion, echoed after the test session
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, title, ok, detail=""):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
