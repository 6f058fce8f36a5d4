"""Command-line entry point: ``qhe-otto sweep`` and ``qhe-otto cycle``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .cycle import CycleConfig, run_cycle
from .errors import ConfigParse, OttoError
from .sweep import DEFAULTS, PRESETS, format_csv, parse_config, run_sweep
from .thermo import HeatForm

log = logging.getLogger("qhe_otto")

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhe-otto", description="Qubit Otto engine simulations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    sw.add_argument("--config", type=Path, help="key = value sweep document")
    sw.add_argument("--preset", choices=sorted(PRESETS))
    sw.add_argument("--out", type=Path, help="CSV destination (default: stdout)")
    sw.add_argument("--workers", type=int, help="worker processes (default: $QHE_OTTO_WORKERS or CPU count)")
    sw.add_argument("--heat-form", choices=["derived", "printed"])

    cy = sub.add_parser("cycle", help="run one cycle and print a CSV row")
    cy.add_argument("--tau", type=float, required=True)
    cy.add_argument("--ratio", type=float, required=True)
    cy.add_argument("--drive", choices=["lz", "inv"], default="lz")
    cy.add_argument("--A", dest="a_const", type=float)
    cy.add_argument("--protocol", choices=["quintic", "sine", "sextic"], default="quintic")
    cy.add_argument("--eps1", type=float, default=DEFAULTS["eps1"])
    cy.add_argument("--beta1", type=float, default=DEFAULTS["beta1"])
    cy.add_argument("--beta2", type=float, default=DEFAULTS["beta2"])
    cy.add_argument("--x", type=float, default=DEFAULTS["x"])
    cy.add_argument("--n", type=int, default=DEFAULTS["n"])
    cy.add_argument("--heat-form", choices=["derived", "printed"], default="derived")
    return parser


def _cmd_sweep(args) -> int:
    if args.config is None and args.preset is None:
        raise ConfigParse("give --config, --preset, or both")
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            log.error("cannot read config: %s", exc)
            return EXIT_FATAL
    spec = parse_config(text, preset=args.preset)
    if args.heat_form:
        spec.heat_form = HeatForm(args.heat_form)
    if args.workers is not None and args.workers < 1:
        raise ConfigParse("--workers must be >= 1", field="workers")
    body, skipped = run_sweep(spec, workers=args.workers)
    out = args.out or (Path(spec.out) if spec.out else None)
    if out is None:
        sys.stdout.write(body)
    else:
        try:
            out.write_text(body)
        except OSError as exc:
            log.error("cannot write %s: %s", out, exc)
            return EXIT_FATAL
        log.info("wrote %s", out)
    if skipped:
        log.warning("%d grid point(s) skipped; see skipped_reason column", skipped)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_cycle(args) -> int:
    cfg = CycleConfig(
        tau=args.tau,
        ratio=args.ratio,
        eps1=args.eps1,
        beta1=args.beta1,
        beta2=args.beta2,
        x=args.x,
        n=args.n,
        drive=args.drive,
        a_const=args.a_const,
        protocol=args.protocol,
        heat_form=args.heat_form,
    )
    res = run_cycle(cfg)
    row = {
        "tau": cfg.tau, "ratio": cfg.ratio, "x": cfg.x, "eps1": cfg.eps1, "beta1": cfg.beta1,
        "beta2": cfg.beta2, "drive": cfg.drive,
        "protocol": cfg.protocol if cfg.drive == "inv" else None,
        "A": cfg.a_const, "n": cfg.n, **res.as_dict(),
        "w_over_wqs": res.w / res.w_qs if res.w_qs != 0 else None,
    }  # fmt: skip
    sys.stdout.write(format_csv([row]))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_cycle(args)
    except (OttoError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
