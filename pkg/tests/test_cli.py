"""Command-line front end, run in-process"""
import json

import pytest

from cli import commands
from cli.blockfiles import (
    BitBlockFile,
    SymbolBlockFile,
    read_bit_blocks,
    read_symbol_blocks,
    write_bit_blocks,
    write_symbol_blocks,
)
from datasets.dataset_generator import generate_bit_blocks
from matcher import ranker
from matcher.typemath import symbol_counts
from models.distribution import CodeParams, load_distribution


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_quantize_text(reference_file, capsys):
    assert commands.main(["quantize", "--dist", reference_file, "--n", "10"]) == 0
    out = capsys.readouterr().out
    assert "Composition   : 1 2 3 4  (n=10, k=4)" in out
    assert "Rate m/n      : 13/10" in out
    assert "12600" in out


def test_quantize_json(reference_file, binary_file, capsys):
    assert commands.main(["quantize", "--dist", reference_file, "--n", "10", "--json"]) == 0
    result = _json(capsys)
    assert result["success"] is True
    assert result["data"]["counts"] == [1, 2, 3, 4]
    assert result["data"]["m"] == 13
    assert result["data"]["rate_exact"] == "13/10"

    assert commands.main(["quantize", "--dist", binary_file, "--n", "4", "--json"]) == 0
    data = _json(capsys)["data"]
    assert (data["counts"], data["m"], data["type_class_size"]) == ([2, 2], 2, 6)


@pytest.mark.parametrize("argv", [
    ["quantize", "--dist", "x", "--n", "0"],
    ["quantize", "--dist", "x", "--n", "ten"],
    ["quantize", "--n", "4"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv):
    assert commands.main(argv) == 2


def test_missing_distribution_is_io_error(tmp_path):
    assert commands.main(["quantize", "--dist", str(tmp_path / "absent"), "--n", "4"]) == 1


def test_malformed_distribution(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0.6\n0.6\n")
    assert commands.main(["quantize", "--dist", str(bad), "--n", "4", "--json"]) == 2
    result = _json(capsys)
    assert result["success"] is False
    assert result["exit_code"] == 2
    assert result["error_type"] == "DistributionFormatError"


def test_non_utf8_distribution_is_format_error(tmp_path, capsys):
    bad = tmp_path / "latin1.txt"
    bad.write_bytes(b"0.5\n0.5\xff\n")
    assert commands.main(["quantize", "--dist", str(bad), "--n", "4", "--json"]) == 2
    assert _json(capsys)["error_type"] == "DistributionFormatError"


def test_encode_worked_example(binary_file, tmp_path):
    src, dst = str(tmp_path / "in.bin"), str(tmp_path / "out.sym")
    write_bit_blocks(src, BitBlockFile(m=2, blocks=[(0, 1)]))
    assert commands.main(["encode", "--dist", binary_file, "--n", "4", "--in", src, "--out", dst]) == 0
    assert read_symbol_blocks(dst) == SymbolBlockFile(n=4, k=2, blocks=[(0, 1, 1, 0)])


def test_encode_empty_input(binary_file, tmp_path):
    src, dst = str(tmp_path / "in.bin"), str(tmp_path / "out.sym")
    write_bit_blocks(src, BitBlockFile(m=2, blocks=[]))
    assert commands.main(["encode", "--dist", binary_file, "--n", "4", "--in", src, "--out", dst]) == 0
    assert read_symbol_blocks(dst).blocks == []


def test_encode_length_mismatch(binary_file, tmp_path):
    src = str(tmp_path / "in.bin")
    write_bit_blocks(src, BitBlockFile(m=3, blocks=[(0, 1, 1)]))
    argv = ["encode", "--dist", binary_file, "--n", "4", "--in", src, "--out", str(tmp_path / "o")]
    assert commands.main(argv) == 2


def test_decode_worked_example(binary_file, tmp_path):
    src, dst = str(tmp_path / "in.sym"), str(tmp_path / "out.bin")
    write_symbol_blocks(src, SymbolBlockFile(n=4, k=2, blocks=[(1, 0, 0, 1)]))
    assert commands.main(["decode", "--dist", binary_file, "--n", "4", "--in", src, "--out", dst]) == 0
    assert read_bit_blocks(dst).blocks == [(1, 0)]


def test_decode_non_codeword(binary_file, tmp_path, capsys):
    src, dst = str(tmp_path / "in.sym"), str(tmp_path / "out.bin")
    write_symbol_blocks(src, SymbolBlockFile(n=4, k=2, blocks=[(0, 1, 0, 1), (1, 1, 0, 0)]))
    base = ["decode", "--dist", binary_file, "--n", "4", "--in", src, "--out", dst]
    assert commands.main(base) == 3

    assert commands.main(base + ["--lenient", "--json"]) == 0
    result = _json(capsys)
    assert result["data"]["warnings"] == 1
    assert read_bit_blocks(dst).blocks == [(0, 0), (1, 1)]


def test_decode_composition_mismatch_even_when_lenient(binary_file, tmp_path):
    src = str(tmp_path / "in.sym")
    write_symbol_blocks(src, SymbolBlockFile(n=4, k=2, blocks=[(1, 1, 1, 0)]))
    argv = ["decode", "--dist", binary_file, "--n", "4", "--in", src, "--out", str(tmp_path / "o"), "--lenient"]
    assert commands.main(argv) == 3


def test_decode_header_mismatch(binary_file, tmp_path):
    src = str(tmp_path / "in.sym")
    write_symbol_blocks(src, SymbolBlockFile(n=5, k=2, blocks=[]))
    argv = ["decode", "--dist", binary_file, "--n", "4", "--in", src, "--out", str(tmp_path / "o")]
    assert commands.main(argv) == 2


def test_corrupt_block_file(binary_file, tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(b"m=2 blocks=1\n\x41")
    argv = ["encode", "--dist", binary_file, "--n", "4", "--in", str(src), "--out", str(tmp_path / "o")]
    assert commands.main(argv) == 2


def _pipeline(dist_file, n, m, blocks, tmp_path, workers=1):
    bits = generate_bit_blocks(m, blocks, seed=3)
    src, mid, back = (str(tmp_path / name) for name in ("in.bin", "mid.sym", "back.bin"))
    write_bit_blocks(src, bits)
    common = ["--dist", dist_file, "--n", str(n), "--workers", str(workers)]
    assert commands.main(["encode", *common, "--in", src, "--out", mid]) == 0
    assert commands.main(["decode", *common, "--in", mid, "--out", back]) == 0
    with open(src, "rb") as a, open(back, "rb") as b:
        assert a.read() == b.read()
    return read_symbol_blocks(mid)


def test_pipeline_identity(reference_file, tmp_path):
    params = _params(reference_file, 100)
    symbols = _pipeline(reference_file, 100, params.m, 10, tmp_path)
    assert len(symbols.blocks) == 10
    for block in symbols.blocks:
        assert symbol_counts(block, params.k) == params.composition.counts


def _params(dist_file, n):
    return CodeParams.for_distribution(load_distribution(dist_file), n)


def test_pipeline_with_workers(reference_file, tmp_path):
    m = _params(reference_file, 40).m
    _pipeline(reference_file, 40, m, 12, tmp_path, workers=2)


@pytest.mark.slow
def test_pipeline_hundred_blocks_n1000(reference_file, tmp_path):
    m = _params(reference_file, 1000).m
    _pipeline(reference_file, 1000, m, 100, tmp_path)


def test_sweep_preset_csv(reference_file, tmp_path):
    out = str(tmp_path / "reference.csv")
    assert commands.main(["sweep", "--dist", reference_file, "--grid", "preset", "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert len(lines) == 51
    first = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert first["n"] == "10"
    assert float(first["ndiv"]) == pytest.approx(0.562126661727604, abs=1e-9)


def test_sweep_single_point_stdout(binary_file, capsys):
    assert commands.main(["sweep", "--dist", binary_file, "--grid", "4", "--format", "json", "--json"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert len(records) == 1
    assert records[0]["rate"] == 0.5


def test_sweep_list_grid_json_file(binary_file, tmp_path, capsys):
    out = str(tmp_path / "r.json")
    argv = ["sweep", "--dist", binary_file, "--grid", "4,8,16", "--format", "json", "--out", out, "--json"]
    assert commands.main(argv) == 0
    assert _json(capsys)["data"]["records"] == 3
    assert [r["n"] for r in json.load(open(out))] == [4, 8, 16]


def test_sweep_malformed_distribution(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a number\n")
    assert commands.main(["sweep", "--dist", str(bad), "--grid", "4"]) == 2


def test_selftest_covers_worked_example(capsys):
    assert commands.main(["selftest", "--max-n", "4", "--trials", "16"]) == 0
    out = capsys.readouterr().out
    assert "(2,2)" in out
    assert "worked-example" in out


def test_selftest_reports_failure(monkeypatch, capsys):
    monkeypatch.setattr(ranker, "codeword_index", lambda j, params: (j * params.type_class_size) >> params.m)
    assert commands.main(["selftest", "--max-n", "4", "--trials", "16", "--json"]) == 1
    result = _json(capsys)
    assert result["success"] is False
    assert result["exit_code"] == 1
    assert result["error"] == "selftest failed"


def test_selftest_worker_pool(capsys):
    assert commands.main(["selftest", "--max-n", "5", "--trials", "16", "--workers", "2", "--json"]) == 0
    suites = {s["name"]: s for s in _json(capsys)["data"]["suites"]}
    assert suites["oracle"]["cases"] > 0
    assert all(s["passed"] for s in suites.values())


def test_selftest_rejects_negative_large_trials():
    assert commands.main(["selftest", "--large-trials", "-1"]) == 2


@pytest.mark.slow
def test_selftest_default_run():
    assert commands.main(["selftest"]) == 0
