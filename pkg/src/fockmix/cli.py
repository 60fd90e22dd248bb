"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical/cutoff error,
4 I/O error.  Set ``FOCKMIX_LOG`` (DEBUG, INFO, WARNING, ...) for diagnostics.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import __version__
from .config import __doc__ as SCHEMA_DOC
from .config import validate_config, validate_sweep_spec
from .errors import ConfigInvalid, CutoffExceeded, OracleLimitExceeded, TruncationTooLossy
from .scenarios import FIGURE_SPECS, run_figures, run_scenario, run_sweep

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

log = logging.getLogger("fockmix")


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(doc: dict) -> str:
    # JSON has no infinity; deltas against an undefined oracle value become null
    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, list):
            return [clean(v) for v in x]
        return x

    return json.dumps(clean(doc), indent=2, default=_json_default) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_run(args) -> int:
    config = validate_config(_read(args.config))
    _emit(_dump(run_scenario(config)), args.out)
    return 0


def cmd_sample(args) -> int:
    doc = json.loads(_read(args.config)) if args.config != "-" else json.load(sys.stdin)
    if not isinstance(doc, dict):
        raise ConfigInvalid("scenario: top level must be a JSON object")
    outputs = list(doc.get("outputs", ["stats", "oracle"]))
    if "sample" not in outputs:
        outputs.append("sample")
    doc.update(outputs=outputs, shots=args.shots, seed=args.seed)
    config = validate_config(doc)
    _emit(_dump(run_scenario(config)), args.out)
    return 0


def cmd_sweep(args) -> int:
    spec = validate_sweep_spec(_read(args.spec))
    run_sweep(spec, args.out, undefined_zero=args.undefined_as_zero)
    return 0


def cmd_figures(args) -> int:
    for path in run_figures(args.which, args.out, undefined_zero=args.undefined_as_zero):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockmix",
        description="Beamsplitter photon statistics for Fock, coherent and hybrid inputs.",
        epilog=SCHEMA_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"fockmix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    raw = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("run", help="run one scenario, print the result JSON",
                       epilog=SCHEMA_DOC, formatter_class=raw)
    p.add_argument("config", help="scenario JSON file, or - for stdin")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sample", help="run a scenario with Monte Carlo detection",
                       epilog=SCHEMA_DOC, formatter_class=raw)
    p.add_argument("config", help="scenario JSON file, or - for stdin")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="evaluate a parameter sweep into CSV",
                       epilog=SCHEMA_DOC, formatter_class=raw)
    p.add_argument("--spec", required=True, help="sweep JSON file, or - for stdin")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--undefined-as-zero", action="store_true",
                   help="write 0 instead of an empty cell for undefined Q/g2 (vacuum output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="run the built-in figure sweeps")
    p.add_argument("--which", type=int, nargs="+", choices=sorted(FIGURE_SPECS),
                   default=sorted(FIGURE_SPECS))
    p.add_argument("--out", required=True, help="output directory (figN.csv)")
    p.add_argument("--undefined-as-zero", action="store_true")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("FOCKMIX_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CutoffExceeded as exc:
        print(f"cutoff error: {exc} (increase 'cutoffs' or use \"auto\")", file=sys.stderr)
        return EXIT_NUMERIC
    except (TruncationTooLossy, OracleLimitExceeded) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
