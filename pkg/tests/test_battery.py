import json

import pytest

from nambu import io
from nambu.battery import CHECKERS, build_corpus, corpus_instances, default_corpus_dir, run_battery
from nambu.cli import main


def test_shipped_corpus_is_reproducible(tmp_path):
    shipped = default_corpus_dir()
    manifest = io.load_json(shipped / "manifest.json")
    build_corpus(tmp_path, expected_false=manifest["generic_plucker"]["expected_false"])
    names = sorted(p.name for p in shipped.glob("*.json"))
    assert names == sorted(p.name for p in tmp_path.glob("*.json"))
    for name in names:
        assert io.load_json(shipped / name) == io.load_json(tmp_path / name), name


def test_manifest_only_uses_known_checkers():
    for name, (pi, desc, expect, why) in corpus_instances().items():
        assert set(expect) <= set(CHECKERS), name
        assert desc and why


def test_corpus_files_roundtrip():
    shipped = default_corpus_dir()
    for name, (pi, *_rest) in corpus_instances().items():
        loaded = io.load_multivector(shipped / f"{name}.json")
        assert loaded == pi
        assert io.field_from_json(json.loads(json.dumps(io.field_to_json(loaded)))) == loaded


def test_shipped_battery_passes_without_generic():
    report = run_battery(default_corpus_dir(), generic=False)
    assert report.results and not report.failures and report.exit_code == 0


def _small_corpus(tmp_path, flip=False):
    build_corpus(tmp_path, expected_false=100)
    manifest = io.load_json(tmp_path / "manifest.json")
    keep = {"darboux_r1_d3": manifest["instances"]["darboux_r1_d3"]}
    if flip:
        keep["darboux_r1_d3"]["expect"]["fai"] = False
    manifest["instances"] = keep
    del manifest["generic_plucker"]
    io.dump_json(manifest, tmp_path / "manifest.json")
    return tmp_path


def test_wrong_expectation_is_reported(tmp_path):
    report = run_battery(_small_corpus(tmp_path, flip=True))
    assert report.exit_code == 1
    [bad] = report.failures
    assert (bad.instance, bad.checker, bad.expected, bad.observed) == ("darboux_r1_d3", "fai", False, True)


def test_cli_battery_exit_codes(tmp_path, capsys):
    assert main(["battery", str(_small_corpus(tmp_path))]) == 0
    assert main(["battery", str(_small_corpus(tmp_path, flip=True))]) == 1
    out = capsys.readouterr().out
    assert "1 unmet expectations" in out


def test_empty_manifest_warns(tmp_path):
    io.dump_json({"instances": {}}, tmp_path / "manifest.json")
    report = run_battery(tmp_path)
    assert report.exit_code == 0 and report.warnings and "0 checks" in report.warnings[0]


def test_missing_manifest(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_battery(tmp_path)


def test_unknown_checker_rejected(tmp_path):
    _small_corpus(tmp_path)
    manifest = io.load_json(tmp_path / "manifest.json")
    manifest["instances"]["darboux_r1_d3"]["expect"]["jacobi"] = True
    io.dump_json(manifest, tmp_path / "manifest.json")
    with pytest.raises(ValueError):
        run_battery(tmp_path)
