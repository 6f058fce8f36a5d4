"""Parameter sweeps over Otto cycles, emitted as a fixed-schema CSV.

Config documents are plain ``key = value`` lines with ``#`` comments.  Axis
values are either comma-separated lists or ``linspace(a, b, n)`` /
``geomspace(a, b, n)``.  Presets fill in the axes for the named sweep families;
keys given explicitly in the document override the preset.

``mode = zero_work`` tabulates the zero-work fidelity instead of running
cycles.  Its ``window`` axis takes fractions s in [0, 1] and places the gap
ratio at beta_ratio + s (1 - beta_ratio), the range on which that fidelity
stays within [0, 1].
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cycle import DRIVES, CycleConfig, run_cycle
from .errors import ConfigParse, OttoError, UnphysicalFidelity
from .protocols import ZProtocolKind
from .thermo import (
    HeatForm,
    classify,
    clausius_ok,
    engine_efficiency,
    heat_work,
    heats_closed_form,
    quasi_static,
    zero_work_fidelity,
)

COLUMNS = (
    "tau", "ratio", "x", "eps1", "beta1", "beta2", "drive", "protocol", "A", "n",
    "f1", "f2", "q1", "q2", "w", "eta", "w_qs", "eta_qs", "w_over_wqs",
    "cost", "cost_ratio", "regime", "clausius", "skipped_reason",
)  # fmt: skip

MODES = ("cycle", "zero_work")
SCALAR_KEYS = {"eps1": float, "beta1": float, "beta2": float, "x": float, "n": int}
AXIS_KEYS = ("drive", "protocol", "beta_ratio", "ratio", "window", "tau", "A")
DEFAULTS = {"eps1": 1.0, "beta1": 0.01, "beta2": 0.04, "x": 0.1, "n": 10001}

A_LADDER = "geomspace(0.5, 16, 11)"

PRESETS: dict[str, dict[str, str]] = {
    # zero-work fidelity boundary for several bath temperature ratios
    "fig2": {
        "mode": "zero_work",
        "beta_ratio": "0.25, 0.5, 0.75, 0.9",
        "window": "linspace(0, 1, 61)",
    },
    # LZ work ratio and efficiency against stroke duration
    "fig3": {
        "drive": "lz",
        "ratio": "0.4, 0.6",
        "tau": "0.25, 0.5, 0.75, 1, 1.5, 2, 3, 5, 7.5, 10, 15, 20, 30, 50",
    },
    # LZ stroke fidelities F1, F2 against the gap ratio
    "fig4": {
        "drive": "lz",
        "ratio": "linspace(0.15, 1.0, 18)",
        "tau": "0.5, 1.0, 1.5",
    },
    # invariant-drive fidelity against cost ratio, with LZ reference rows
    "fig5": {
        "drive": "lz, inv",
        "protocol": "quintic",
        "ratio": "0.4, 0.6",
        "tau": "1.0",
        "A": A_LADDER,
    },
    # invariant-drive work and efficiency against cost ratio
    "fig6": {
        "drive": "lz, inv",
        "protocol": "quintic",
        "ratio": "0.4, 0.6",
        "tau": "0.5, 1.0, 1.5",
        "A": A_LADDER,
    },
    "appendixB": {
        "drive": "lz, inv",
        "protocol": "sine, sextic",
        "ratio": "0.4, 0.6",
        "tau": "1.0",
        "A": A_LADDER,
    },
}


@dataclass
class SweepSpec:
    base: dict = field(default_factory=lambda: dict(DEFAULTS))
    axes: dict = field(default_factory=dict)
    mode: str = "cycle"
    heat_form: HeatForm = HeatForm.DERIVED
    preset: str | None = None
    out: str | None = None
    workers: int | None = None


_SPACE_RE = re.compile(r"^(linspace|geomspace)\(\s*([^,]+),\s*([^,]+),\s*([^,\)]+)\)$")


def _parse_number(text: str, cast, line, key):
    try:
        value = cast(text.strip())
    except ValueError:
        raise ConfigParse(f"cannot read {text.strip()!r} as {cast.__name__}", line, key) from None
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigParse(f"value {value!r} is not finite", line, key)
    return value


def _parse_axis(key: str, text: str, line: int | None) -> list:
    text = text.strip()
    if key in ("drive", "protocol"):
        values = [v.strip() for v in text.split(",") if v.strip()]
        if key == "protocol":
            try:
                values = [ZProtocolKind(v).value for v in values]
            except ValueError as exc:
                raise ConfigParse(str(exc), line, key) from None
        elif any(v not in DRIVES for v in values):
            raise ConfigParse(f"drive must be among {DRIVES}, got {text!r}", line, key)
        return sorted(set(values))
    m = _SPACE_RE.match(text)
    if m:
        a = _parse_number(m.group(2), float, line, key)
        b = _parse_number(m.group(3), float, line, key)
        num = _parse_number(m.group(4), int, line, key)
        if num < 1:
            raise ConfigParse("point count must be >= 1", line, key)
        if m.group(1) == "geomspace" and not (a > 0 and b > 0):
            raise ConfigParse("geomspace bounds must be positive", line, key)
        fn = np.linspace if m.group(1) == "linspace" else np.geomspace
        # round to 12 significant digits so 0.1-step grids hit exact decimals
        values = [float(f"{v:.12g}") for v in fn(a, b, num)]
    else:
        values = [_parse_number(v, float, line, key) for v in text.split(",") if v.strip()]
    if not values:
        raise ConfigParse("axis has no values", line, key)
    if key == "ratio" and any(not 0 < v <= 1 for v in values):
        raise ConfigParse(f"ratio values must lie in (0, 1], got {text!r}", line, key)
    if key == "window" and any(not 0 <= v <= 1 for v in values):
        raise ConfigParse(f"window values must lie in [0, 1], got {text!r}", line, key)
    if key == "beta_ratio" and any(not 0 < v < 1 for v in values):
        raise ConfigParse(f"beta_ratio values must lie in (0, 1), got {text!r}", line, key)
    if key in ("tau", "A") and any(v <= 0 for v in values):
        raise ConfigParse(f"{key} values must be positive", line, key)
    return sorted(set(values))


def _read_pairs(text: str) -> list[tuple[int, str, str]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParse(f"expected 'key = value', got {body!r}", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ConfigParse("missing key", lineno)
        pairs.append((lineno, key, value))
    return pairs


def parse_config(text: str, preset: str | None = None) -> SweepSpec:
    """Parse a key-value document into a validated SweepSpec."""
    pairs = _read_pairs(text)
    seen = {}
    for lineno, key, value in pairs:
        if key in seen:
            raise ConfigParse(f"duplicate key (first on line {seen[key]})", lineno, key)
        seen[key] = lineno

    doc = {key: (lineno, value) for lineno, key, value in pairs}
    if preset is None and "preset" in doc:
        preset = doc["preset"][1]
    merged: dict[str, tuple[int | None, str]] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigParse(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}", field="preset")
        merged.update({k: (None, v) for k, v in PRESETS[preset].items()})
    merged.update(doc)
    merged.pop("preset", None)

    spec = SweepSpec(preset=preset)
    for key, (lineno, value) in merged.items():
        if key in SCALAR_KEYS:
            spec.base[key] = _parse_number(value, SCALAR_KEYS[key], lineno, key)
        elif key in AXIS_KEYS:
            spec.axes[key] = _parse_axis(key, value, lineno)
        elif key == "mode":
            if value not in MODES:
                raise ConfigParse(f"mode must be one of {MODES}", lineno, key)
            spec.mode = value
        elif key == "heat_form":
            try:
                spec.heat_form = HeatForm(value)
            except ValueError:
                raise ConfigParse("heat_form must be 'derived' or 'printed'", lineno, key) from None
        elif key == "out":
            spec.out = value
        elif key == "workers":
            spec.workers = _parse_number(value, int, lineno, key)
            if spec.workers < 1:
                raise ConfigParse("workers must be >= 1", lineno, key)
        else:
            raise ConfigParse("unknown key", lineno, key)

    _validate(spec)
    return spec


def _validate(spec: SweepSpec) -> None:
    if not spec.axes:
        raise ConfigParse("no sweep axes given (need at least one of tau, ratio, A, protocol, ...)")
    b = spec.base
    if not b["eps1"] > 0:
        raise ConfigParse("eps1 must be positive", field="eps1")
    if not b["x"] > 0:
        raise ConfigParse("x must be positive", field="x")
    if b["n"] < 2:
        raise ConfigParse("n must be >= 2", field="n")
    if not 0 < b["beta1"] < b["beta2"]:
        raise ConfigParse("need 0 < beta1 < beta2", field="beta1")
    if spec.mode == "zero_work":
        extra = set(spec.axes) - {"beta_ratio", "ratio", "window"}
        if extra:
            raise ConfigParse(f"zero_work mode only sweeps beta_ratio, ratio and window, not {sorted(extra)}")
        if "ratio" in spec.axes and "window" in spec.axes:
            raise ConfigParse("give either ratio or window, not both", field="window")
        return
    for key in ("beta_ratio", "window"):
        if key in spec.axes:
            raise ConfigParse(f"{key} is only valid in zero_work mode", field=key)
    if "tau" not in spec.axes:
        raise ConfigParse("cycle sweeps need a tau axis", field="tau")
    if "ratio" not in spec.axes:
        raise ConfigParse("cycle sweeps need a ratio axis", field="ratio")
    drives = spec.axes.get("drive", ["lz"])
    if "inv" in drives and "A" not in spec.axes:
        raise ConfigParse("the invariant drive needs an A axis", field="A")


def grid_points(spec: SweepSpec) -> list[dict]:
    """All grid points, deduplicated and in lexicographic axis order."""
    if spec.mode == "zero_work":
        betas = spec.axes.get("beta_ratio", [spec.base["beta1"] / spec.base["beta2"]])
        if "window" in spec.axes:
            # s in [0, 1] maps onto ratio in [beta1/beta2, 1], the range where F <= 1
            return [
                {"beta_ratio": br, "ratio": float(f"{br + s * (1.0 - br):.12g}")}
                for br, s in itertools.product(betas, spec.axes["window"])
            ]
        return [{"beta_ratio": br, "ratio": r} for br, r in itertools.product(betas, spec.axes.get("ratio", [1.0]))]
    drives = spec.axes.get("drive", ["lz"])
    protocols = spec.axes.get("protocol", [ZProtocolKind.QUINTIC.value])
    points = {}
    for drive, proto, ratio, tau, a in itertools.product(
        drives, protocols, spec.axes["ratio"], spec.axes["tau"], spec.axes.get("A", [None])
    ):
        if drive == "lz":
            proto, a = None, None
        key = (drive, proto or "", ratio, tau, -1.0 if a is None else a)
        points[key] = {"drive": drive, "protocol": proto, "ratio": ratio, "tau": tau, "A": a}
    return [points[k] for k in sorted(points)]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(getattr(value, "value", value))


def _row_zero_work(base: dict, point: dict, heat_form: HeatForm) -> dict:
    eps1, beta1 = base["eps1"], base["beta1"]
    beta2 = beta1 / point["beta_ratio"]
    eps2 = point["ratio"] * eps1
    f = zero_work_fidelity(eps1, eps2, beta1, beta2)
    if not 0.0 <= f <= 1.0 + 1e-12:
        exc = UnphysicalFidelity(f"zero-work fidelity {f:.6g} lies outside [0, 1] (ratio below beta1/beta2)")
        return {
            "ratio": point["ratio"], "x": base["x"], "eps1": eps1, "beta1": beta1, "beta2": beta2,
            "drive": "zero_work", "skipped_reason": f"{type(exc).__name__}: {exc}",
        }  # fmt: skip
    f = min(f, 1.0)
    q1, q2 = heats_closed_form(eps1, eps2, beta1, beta2, f, f, heat_form)
    hw = heat_work(q1, q2)
    w_qs, eta_qs = quasi_static(eps1, eps2, beta1, beta2)
    regime = classify(hw.q1, hw.q2, hw.w)
    return {
        "ratio": point["ratio"], "x": base["x"], "eps1": eps1, "beta1": beta1, "beta2": beta2,
        "drive": "zero_work", "f1": f, "f2": f, "q1": hw.q1, "q2": hw.q2, "w": hw.w,
        "eta": engine_efficiency(hw, regime), "w_qs": w_qs, "eta_qs": eta_qs,
        "w_over_wqs": hw.w / w_qs if w_qs != 0 else None,
        "regime": regime,
        "clausius": clausius_ok(hw.q1, hw.q2, beta1, beta2),
    }  # fmt: skip


def _row_cycle(base: dict, point: dict, heat_form: HeatForm) -> dict:
    row = {
        "tau": point["tau"], "ratio": point["ratio"], "x": base["x"], "eps1": base["eps1"],
        "beta1": base["beta1"], "beta2": base["beta2"], "drive": point["drive"],
        "protocol": point["protocol"], "A": point["A"], "n": base["n"],
    }  # fmt: skip
    try:
        cfg = CycleConfig(
            tau=point["tau"],
            ratio=point["ratio"],
            eps1=base["eps1"],
            beta1=base["beta1"],
            beta2=base["beta2"],
            x=base["x"],
            n=base["n"],
            drive=point["drive"],
            a_const=point["A"],
            protocol=point["protocol"] or ZProtocolKind.QUINTIC,
            heat_form=heat_form,
        )
        res = run_cycle(cfg)
    except OttoError as exc:
        row["skipped_reason"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(res.as_dict())
    row["w_over_wqs"] = res.w / res.w_qs if res.w_qs != 0 else None
    return row


def evaluate_point(args) -> dict:
    spec_mode, base, point, heat_form = args
    if spec_mode == "zero_work":
        return _row_zero_work(base, point, heat_form)
    return _row_cycle(base, point, heat_form)


def default_workers() -> int:
    env = os.environ.get("QHE_OTTO_WORKERS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigParse(f"QHE_OTTO_WORKERS={env!r} is not an integer", field="workers") from None
        if value >= 1:
            return value
        raise ConfigParse("QHE_OTTO_WORKERS must be >= 1", field="workers")
    return os.cpu_count() or 1


def sweep_rows(spec: SweepSpec, workers: int | None = None) -> list[dict]:
    workers = workers or spec.workers or default_workers()
    jobs = [(spec.mode, spec.base, p, spec.heat_form) for p in grid_points(spec)]
    if workers == 1 or len(jobs) <= 1:
        return [evaluate_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        # map preserves submission order, so output order is worker-independent
        return list(pool.map(evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in COLUMNS])
    return buf.getvalue()


def run_sweep(spec: SweepSpec, workers: int | None = None) -> tuple[str, int]:
    """CSV text for the whole grid and the number of skipped rows."""
    rows = sweep_rows(spec, workers)
    skipped = sum(1 for r in rows if r.get("skipped_reason"))
    return format_csv(rows), skipped
