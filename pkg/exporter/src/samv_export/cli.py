"""Command line interface: ``samv-export export --kind ... --input ... --out ...``"""

from __future__ import annotations

import argparse
import sys

from .export import export
from .formats import ExportError
from .recipes import ExportRecipe, KINDS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="samv-export",
        description="Export sentence vectors from pretrained models to the SAMV format",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    exp = sub.add_parser("export", help="encode a JSONL corpus into a vector file")
    exp.add_argument("--kind", choices=KINDS, required=True)
    exp.add_argument("--model", default=None, help="model id or local path (bert kinds)")
    exp.add_argument("--vectors", default=None, help="word-vector table (static-avg)")
    exp.add_argument("--input", required=True, help="corpus JSONL with id/label/text")
    exp.add_argument("--out", required=True, help="output SAMV path")
    exp.add_argument("--layer", type=int, default=-2,
                     help="hidden-state index; -2 = second-to-last encoder layer")
    exp.add_argument("--max-len", dest="max_length", type=int, default=512)
    exp.add_argument("--batch-size", dest="batch_size", type=int, default=32)
    exp.add_argument("--no-labels-sidecar", dest="labels_sidecar", action="store_false")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        recipe = ExportRecipe(
            kind=args.kind,
            model=args.model,
            vectors=args.vectors,
            layer=args.layer,
            batch_size=args.batch_size,
            max_length=args.max_length,
        )
        report = export(recipe, args.input, args.out, labels_sidecar=args.labels_sidecar)
    except ExportError as exc:
        print(f"samv-export: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"samv-export: error: {exc}", file=sys.stderr)
        return 2
    print(f"{report.n} {report.dim}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
