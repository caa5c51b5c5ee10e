"""Command-line entry point: ``discofield <command> [--config PATH] ...``."""

import argparse
import os
import sys

from .errors import ParseError, ValidationError
from .reports import COMMANDS, default_config, dispatch, load_config, write_report
from .relativistic import DIMENSION_CAP


def build_parser():
    p = argparse.ArgumentParser(prog="discofield", description="Verification suites for dispersion-operator field equations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON configuration file (built-in default model if omitted)")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--out", help="output directory (falls back to $DISCOFIELD_OUT, then the config)")
    p.add_argument("--cutoff-cap", type=int, default=DIMENSION_CAP, help="largest product-basis dimension")
    p.add_argument("--tolerance-scale", type=float, default=1.0, help="multiply every upper tolerance")
    p.add_argument("--exponent-variant", choices=("matched", "literal"), default="matched",
                   help="also report the alternative Gaussian exponent in verify-hermite")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = args.out or os.environ.get("DISCOFIELD_OUT")
    opts = dict(seed=args.seed, output_dir=out, tolerance_scale=args.tolerance_scale,
                cutoff_cap=args.cutoff_cap, exponent_variant=args.exponent_variant)
    try:
        run = load_config(args.config, **opts) if args.config else default_config(**opts)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"discofield: config error: {exc}", file=sys.stderr)
        return 2
    report = write_report(r := dispatch(args.command, run), run.output_dir)
    failed = [c.id for c in r.checks if not c.passed]
    print(f"{args.command}: {len(r.checks) - len(failed)}/{len(r.checks)} checks passed -> {report['report']}")
    for cid in failed:
        print(f"  FAIL {cid}")
    for err in r.errors:
        print(f"  ERROR {err['suite']}: {err['type']}: {err['message']}", file=sys.stderr)
    return r.exit_code


if __name__ == "__main__":
    sys.exit(main())
