"""Command line entry point.

Subcommands: sam (alignment curve + SAM), dbi (Davies-Bouldin curve),
lc (annotation-budget learning curve), bow (bag-of-words featurizer),
correlate (metric-vs-ALC scatter), rerun (re-execute a recorded manifest).

Exit codes: 0 success, 2 I/O or format failure, 3 validation failure,
4 numeric failure. Every successful run writes a manifest sufficient to
reproduce its CSV artifacts byte-identically via ``rerun``.
"""

from __future__ import annotations

import argparse
import glob as globlib
import json
import sys
from pathlib import Path

import numpy as np

from .alignment import alignment_curve, default_grid
from .budget import ExperimentConfig, learning_curve, pearson
from .cluster import ward_linkage
from .dataset import load_dataset, read_label_sidecar, write_label_sidecar, LabeledDataset
from .errors import DataFormatError, NumericError, ValidationError
from .manifest import (
    MANIFEST_NAME,
    atomic_write_text,
    build_manifest,
    load_manifest,
    verify_inputs,
    write_manifest,
)
from .plots import svg_line_plot, svg_scatter_plot
from .quality import dbi_curve
from .vectors import load_vectors, save_vectors
from .features import build_bow

PROG = "structalign"


def _load_labels(path) -> LabeledDataset:
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".json"):
        return load_dataset(path, format="jsonl")
    return read_label_sidecar(path)


def _write_json(path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _aligned(X, labels_path):
    dataset = _load_labels(labels_path)
    if dataset.n != X.shape[0]:
        raise ValidationError(
            f"vectors have {X.shape[0]} rows but labels file has {dataset.n} entries"
        )
    return dataset


def run_sam(opts: dict) -> None:
    X = load_vectors(opts["vectors"])
    dataset = _aligned(X, opts["labels"])
    y = np.asarray(dataset.labels)

    seed = opts.get("seed")
    sample = opts.get("sample")
    if sample is not None:
        if not 2 <= sample <= X.shape[0]:
            raise ValidationError(f"--sample must be in [2, {X.shape[0]}], got {sample}")
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(X.shape[0], size=sample, replace=False))
        X, y = X[idx], y[idx]

    n = X.shape[0]
    k_max = opts.get("k_max") or n
    k_min = opts.get("k_min") or 1
    dendrogram = ward_linkage(X)
    grid = default_grid(n, k_min=k_min, k_max=k_max, policy=opts.get("grid", "auto"))
    curve = alignment_curve(
        dendrogram, y, grid=grid, mode=opts["mode"], target=opts.get("target")
    )

    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    curve.to_csv(out / "curve.csv")
    _write_json(
        out / "summary.json",
        curve.summary(
            n=n,
            seed=seed if sample is not None else None,
            dataset=opts.get("dataset"),
            representation=opts.get("representation"),
        ),
    )
    if opts.get("dendrogram"):
        dendrogram.to_csv(out / "dendrogram.csv")
    if opts.get("svg"):
        svg_line_plot(
            curve.ks, curve.values, out / "curve.svg",
            xlabel="clusters", ylabel="alignment",
        )
    manifest = build_manifest(
        "sam", opts, [opts["vectors"], opts["labels"]],
        seeds=[seed] if sample is not None else [],
    )
    write_manifest(manifest, out / MANIFEST_NAME)
    print(repr(float(curve.sam)))


def run_dbi(opts: dict) -> None:
    X = load_vectors(opts["vectors"])
    inputs = [opts["vectors"]]
    if opts.get("labels"):
        _aligned(X, opts["labels"])
        inputs.append(opts["labels"])

    dendrogram = ward_linkage(X)
    n = X.shape[0]
    grid = None
    if opts.get("grid") == "full":
        grid = np.arange(2, n + 1)
    curve = dbi_curve(X, dendrogram, grid=grid)

    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    curve.to_csv(out / "curve.csv")
    _write_json(
        out / "summary.json",
        curve.summary(
            n=n,
            dataset=opts.get("dataset"),
            representation=opts.get("representation"),
        ),
    )
    if opts.get("dendrogram"):
        dendrogram.to_csv(out / "dendrogram.csv")
    if opts.get("svg"):
        # inverted y-axis: lower DBI is better, so better stays visually higher
        svg_line_plot(
            curve.ks, curve.values, out / "curve.svg",
            xlabel="clusters", ylabel="davies-bouldin", invert_y=True,
        )
    write_manifest(build_manifest("dbi", opts, inputs), out / MANIFEST_NAME)
    print(repr(float(curve.area)))


def _read_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid config JSON ({exc})")
    if not isinstance(raw, dict):
        raise DataFormatError(f"{path}: config must be a JSON object")
    for key in ("vectors", "labels", "test_vectors", "test_labels"):
        if key not in raw:
            raise DataFormatError(f"{path}: config missing required key {key!r}")
    return raw


def run_lc(opts: dict) -> None:
    raw = _read_config_file(opts["config"])
    config = ExperimentConfig.from_dict(raw)
    X_pool = load_vectors(raw["vectors"])
    pool = _aligned(X_pool, raw["labels"])
    X_test = load_vectors(raw["test_vectors"])
    test = _aligned(X_test, raw["test_labels"])

    curve = learning_curve(
        config,
        X_pool,
        np.asarray(pool.labels),
        X_test,
        np.asarray(test.labels),
        n_jobs=opts.get("jobs") or 1,
    )

    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    curve.to_csv(out / "curve.csv")
    cells = "\n".join(json.dumps(c, sort_keys=True) for c in curve.cells)
    atomic_write_text(out / "cells.jsonl", cells + "\n")
    _write_json(
        out / "summary.json",
        curve.summary(dataset=config.dataset, representation=config.representation),
    )
    if opts.get("svg"):
        svg_line_plot(
            list(curve.budgets), curve.means, out / "curve.svg",
            xlabel="annotation budget", ylabel=config.metric,
        )
    inputs = [opts["config"], raw["vectors"], raw["labels"], raw["test_vectors"], raw["test_labels"]]
    manifest = build_manifest("lc", opts, inputs, seeds=config.seeds)
    write_manifest(manifest, out / MANIFEST_NAME)
    print(repr(float(curve.alc)))


def run_bow(opts: dict) -> None:
    dataset = load_dataset(opts["input"], format="jsonl")
    if dataset.texts is None:
        raise ValidationError(f"{opts['input']}: no 'text' fields; cannot featurize")
    X, terms = build_bow(dataset)
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    save_vectors(X, out)
    write_label_sidecar(dataset, out.with_name(out.name + ".labels.tsv"))
    _write_json(out.with_name(out.name + ".vocab.json"), {"terms": terms})
    manifest = build_manifest("bow", opts, [opts["input"]])
    write_manifest(manifest, out.with_name(out.name + ".manifest.json"))
    print(f"{X.shape[0]} {X.shape[1]}")


def _collect_summaries(pattern: str) -> list[dict]:
    paths = sorted(globlib.glob(pattern, recursive=True))
    if not paths:
        raise DataFormatError(f"no files match summary glob {pattern!r}")
    summaries = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as handle:
                payload = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"{path}: unreadable summary ({exc})")
        if isinstance(payload, dict) and payload.get("kind") in ("sam", "dbi", "lc"):
            payload["_path"] = path
            summaries.append(payload)
    return summaries


def run_correlate(opts: dict) -> None:
    x_kind = opts.get("x_kind") or "sam"
    if x_kind not in ("sam", "dbi"):
        raise ValidationError(f"--x-kind must be sam or dbi, got {x_kind!r}")
    x_field = "sam" if x_kind == "sam" else "area"
    summaries = _collect_summaries(opts["summaries"])

    groups: dict[tuple, dict] = {}
    for summary in summaries:
        key = (summary.get("dataset") or "", summary.get("representation") or "")
        slot = groups.setdefault(key, {})
        if summary["kind"] == x_kind:
            slot["x"] = float(summary[x_field])
            slot.setdefault("_inputs", []).append(summary["_path"])
        elif summary["kind"] == "lc":
            slot["alc"] = float(summary["alc"])
            slot.setdefault("_inputs", []).append(summary["_path"])

    rows = [
        (key[0], key[1], slot["x"], slot["alc"])
        for key, slot in sorted(groups.items())
        if "x" in slot and "alc" in slot
    ]
    if len(rows) < 3:
        raise ValidationError(
            f"correlation needs at least 3 ({x_kind}, alc) pairs, found {len(rows)}"
        )
    xs = np.asarray([r[2] for r in rows])
    ys = np.asarray([r[3] for r in rows])
    r_value = pearson(xs, ys)

    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    x_col = "sam" if x_kind == "sam" else "dbi_area"
    lines = [f"dataset,representation,{x_col},alc"]
    lines.extend(
        f"{d},{rep},{repr(x)},{repr(a)}" for d, rep, x, a in rows
    )
    atomic_write_text(out / "scatter.csv", "\n".join(lines) + "\n")
    _write_json(
        out / "correlation.json",
        {"kind": "correlation", "x_kind": x_kind, "r": r_value, "n_points": len(rows)},
    )
    svg_scatter_plot(
        xs, ys, out / "scatter.svg",
        xlabel=x_col, ylabel="alc", invert_y=(x_kind == "dbi"),
    )
    inputs = sorted({p for _, slot in groups.items() for p in slot.get("_inputs", [])})
    write_manifest(build_manifest("correlate", opts, inputs), out / MANIFEST_NAME)
    print(repr(float(r_value)))


def run_rerun(opts: dict) -> None:
    manifest = load_manifest(opts["manifest"])
    verify_inputs(manifest)
    args = dict(manifest["args"])
    if opts.get("out"):
        args["out"] = opts["out"]
    _dispatch(manifest["command"], args)


_COMMANDS = {
    "sam": run_sam,
    "dbi": run_dbi,
    "lc": run_lc,
    "bow": run_bow,
    "correlate": run_correlate,
    "rerun": run_rerun,
}


def _dispatch(command: str, opts: dict) -> None:
    if command not in _COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    _COMMANDS[command](opts)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Structural alignment and annotation-budget analysis of labeled vector representations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sam = sub.add_parser("sam", help="alignment curve and its area")
    sam.add_argument("--vectors", required=True)
    sam.add_argument("--labels", required=True)
    sam.add_argument("--mode", choices=("balanced", "target"), default="balanced")
    sam.add_argument("--target", default=None)
    sam.add_argument("--k-min", dest="k_min", type=int, default=1)
    sam.add_argument("--k-max", dest="k_max", type=int, default=None)
    sam.add_argument("--grid", choices=("full", "auto"), default="auto")
    sam.add_argument("--sample", type=int, default=None, help="subsample size")
    sam.add_argument("--seed", type=int, default=None, help="subsample seed")
    sam.add_argument("--dataset", default=None)
    sam.add_argument("--representation", default=None)
    sam.add_argument("--dendrogram", action="store_true", help="also write dendrogram.csv")
    sam.add_argument("--svg", action="store_true")
    sam.add_argument("--out", required=True)

    dbi = sub.add_parser("dbi", help="Davies-Bouldin curve and its area")
    dbi.add_argument("--vectors", required=True)
    dbi.add_argument("--labels", default=None, help="optional, length check only")
    dbi.add_argument("--grid", choices=("full", "auto"), default="auto")
    dbi.add_argument("--dataset", default=None)
    dbi.add_argument("--representation", default=None)
    dbi.add_argument("--dendrogram", action="store_true")
    dbi.add_argument("--svg", action="store_true")
    dbi.add_argument("--out", required=True)

    lc = sub.add_parser("lc", help="annotation-budget learning curve")
    lc.add_argument("--config", required=True)
    lc.add_argument("--jobs", type=int, default=1)
    lc.add_argument("--svg", action="store_true")
    lc.add_argument("--out", required=True)

    bow = sub.add_parser("bow", help="bag-of-words featurizer")
    bow.add_argument("--input", required=True, help="dataset JSONL with text fields")
    bow.add_argument("--out", required=True, help="output vectors file")

    cor = sub.add_parser("correlate", help="correlate metric summaries with ALC")
    cor.add_argument("--summaries", required=True, help="glob of summary JSON files")
    cor.add_argument("--x-kind", dest="x_kind", choices=("sam", "dbi"), default="sam")
    cor.add_argument("--out", required=True)

    rer = sub.add_parser("rerun", help="re-execute a recorded run manifest")
    rer.add_argument("--manifest", required=True)
    rer.add_argument("--out", default=None, help="override the recorded output location")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    opts = vars(args)
    command = opts.pop("command")
    try:
        _dispatch(command, opts)
        return 0
    except DataFormatError as exc:
        return _fail(exc, 2)
    except ValidationError as exc:
        return _fail(exc, 3)
    except NumericError as exc:
        return _fail(exc, 4)
    except OSError as exc:
        return _fail(exc, 2)


def _fail(exc: Exception, code: int) -> int:
    print(f"{PROG}: error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
