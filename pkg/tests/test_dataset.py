import numpy as np
import pytest

from structalign import (
    DataFormatError,
    LabeledDataset,
    ValidationError,
    load_dataset,
    read_label_sidecar,
    write_label_sidecar,
)
from conftest import write_jsonl


def test_jsonl_four_lines(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [
        {"id": "a", "label": "pos", "text": "good"},
        {"id": "b", "label": "pos", "text": "fine"},
        {"id": "c", "label": "neg", "text": "bad"},
        {"id": "d", "label": "neg", "text": "poor"},
    ])
    ds = load_dataset(path)
    assert ds.n == 4
    assert ds.label_set == ("neg", "pos")
    assert ds.ids == ("a", "b", "c", "d")
    assert ds.texts == ("good", "fine", "bad", "poor")


def test_duplicate_id_names_offender(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [
        {"id": "a", "label": "pos"},
        {"id": "a", "label": "neg"},
    ])
    with pytest.raises(ValidationError, match="'a'"):
        load_dataset(path)


def test_missing_label_reports_line(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [
        {"id": "a", "label": "pos"},
        {"id": "b"},
        {"id": "c", "label": "neg"},
    ])
    with pytest.raises(DataFormatError, match="line 2"):
        load_dataset(path)


def test_single_label_rejected(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [
        {"id": "a", "label": "pos"},
        {"id": "b", "label": "pos"},
    ])
    with pytest.raises(ValidationError, match="2 distinct labels"):
        load_dataset(path)


def test_tsv_round_trip_10k(tmp_path):
    rng = np.random.default_rng(3)
    n = 10_000
    ids = [f"s{i}" for i in range(n)]
    labels = [("pos" if v else "neg") for v in rng.integers(0, 2, size=n)]
    path = tmp_path / "d.tsv"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("id\tlabel\ttext\n")
        for i, l in zip(ids, labels):
            handle.write(f"{i}\t{l}\tsome text {i}\n")
    ds = load_dataset(path)
    assert ds.n == n
    assert list(ds.ids) == ids
    assert list(ds.labels) == labels


def test_tsv_bad_header(tmp_path):
    path = tmp_path / "d.tsv"
    path.write_text("foo\tbar\n1\t2\n")
    with pytest.raises(DataFormatError, match="header"):
        load_dataset(path)


def test_missing_file():
    with pytest.raises(DataFormatError, match="not found"):
        load_dataset("/nonexistent/nowhere.jsonl")


def test_invalid_json_line(tmp_path):
    path = tmp_path / "d.jsonl"
    path.write_text('{"id": "a", "label": "x"}\nnot json at all{\n')
    with pytest.raises(DataFormatError, match="line 2"):
        load_dataset(path)


def test_construction_invariants():
    with pytest.raises(ValidationError):
        LabeledDataset(ids=("a",), labels=("x",))
    with pytest.raises(ValidationError):
        LabeledDataset(ids=("a", "b"), labels=("x",))
    with pytest.raises(ValidationError):
        LabeledDataset(ids=("a", "b"), labels=("x", "y"), texts=("t",))


def test_prevalence():
    ds = LabeledDataset(ids=("a", "b", "c", "d"), labels=("p", "p", "p", "n"))
    assert ds.prevalence("p") == 0.75
    with pytest.raises(ValidationError):
        ds.prevalence("zzz")


def test_label_sidecar_round_trip(tmp_path):
    ds = LabeledDataset(ids=("a", "b", "c"), labels=("x", "y", "x"))
    path = tmp_path / "labels.tsv"
    write_label_sidecar(ds, path)
    back = read_label_sidecar(path)
    assert back.ids == ds.ids
    assert back.labels == ds.labels


def test_sidecar_without_header(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("a\tx\nb\ty\n")
    back = read_label_sidecar(path)
    assert back.ids == ("a", "b")
    assert back.labels == ("x", "y")
