import csv
import io
import json
import math
import subprocess
import sys

import pytest

from fockmix.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main
from fockmix.config import ConfigInvalid, validate_config, validate_sweep_spec
from fockmix.scenarios import (
    format_csv,
    run_figures,
    run_scenario,
    sweep_rows,
)


# -- validation ----------------------------------------------------------------


def test_minimal_fock_config():
    cfg = validate_config('{"input_kind": "fock_fock", "n": 2, "m": 3, "theta": 0.5}')
    assert cfg.resolved_cutoffs() == (5, 5)
    assert cfg.phi == pytest.approx(math.pi / 2)
    assert cfg.outputs == ("stats", "oracle")


def test_extra_kind_field_is_named():
    with pytest.raises(ConfigInvalid) as info:
        validate_config({"input_kind": "fock_coherent", "n": 1, "m": 2, "alpha": 1, "theta": 0})
    assert info.value.field == "m"
    assert "m" in str(info.value)


def test_angle_literal():
    cfg = validate_config({"input_kind": "fock_fock", "n": 1, "m": 0, "theta": "pi/4"})
    assert cfg.theta == 0.7853981633974483


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"input_kind": "laser", "theta": 0}, "input_kind"),
        ({"input_kind": "fock_fock", "n": 1, "theta": 0}, "m"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1}, "theta"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1, "theta": 0, "colour": 1}, "colour"),
        ({"input_kind": "fock_fock", "n": -1, "m": 1, "theta": 0}, "n"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1, "theta": 2.0}, "theta"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1, "theta": "tau"}, "theta"),
        ({"input_kind": "coherent_coherent", "alpha": "x", "beta": 0, "theta": 0}, "alpha"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1, "theta": 0, "outputs": ["plot"]}, "outputs"),
        ({"input_kind": "fock_fock", "n": 1, "m": 1, "theta": 0, "outputs": ["sample"]}, "shots"),
    ],
)
def test_invalid_configs_name_field(doc, field):
    with pytest.raises(ConfigInvalid) as info:
        validate_config(doc)
    assert info.value.field == field


def test_bad_json_reports_line():
    with pytest.raises(ConfigInvalid, match="line 2"):
        validate_config('{"input_kind": "fock_fock",\n "n": }')


@pytest.mark.parametrize(
    "value,expected",
    [(1.5, 1.5), ([0.3, -2], 0.3 - 2j), ({"re": 1, "im": 1}, 1 + 1j), ("1+2j", 1 + 2j)],
)
def test_complex_forms(value, expected):
    cfg = validate_config({"input_kind": "fock_coherent", "n": 0, "alpha": value, "theta": 0})
    assert cfg.alpha == expected


def test_explicit_cutoffs():
    base = {"input_kind": "coherent_coherent", "alpha": 1, "beta": 0, "theta": 0}
    assert validate_config({**base, "cutoffs": 9}).resolved_cutoffs() == (9, 9)
    assert validate_config({**base, "cutoffs": [4, 6]}).resolved_cutoffs() == (4, 6)


def test_sweep_range_expansion():
    spec = validate_sweep_spec({
        "base": {"input_kind": "fock_coherent", "n": 1, "theta": "pi/4"},
        "sweep": {"variable": "alpha_modulus", "start": 0, "stop": 3, "step": 0.05},
    })
    assert len(spec.values) == 61
    assert spec.values[1] == 0.05 and spec.values[-1] == 3.0


def test_sweep_keeps_alpha_phase():
    spec = validate_sweep_spec({
        "base": {"input_kind": "fock_coherent", "n": 0, "alpha": [0, 1], "theta": 0.3},
        "sweep": {"variable": "alpha_modulus", "values": [2.0]},
    })
    (_, _, cfg), = spec.points()
    assert cfg.alpha == pytest.approx(2j)


@pytest.mark.parametrize(
    "doc",
    [
        {"base": {"input_kind": "fock_fock", "n": 1, "theta": 0}, "sweep": {"variable": "n", "values": [1]}},
        {"base": {"input_kind": "fock_fock", "n": 1, "theta": 0}, "sweep": {"variable": "m", "values": []}},
        {"base": {"input_kind": "fock_fock", "theta": 0}, "sweep": {"variable": "m", "values": [1]}},
        {"base": {"input_kind": "fock_fock", "n": 1, "theta": 0}, "sweep": {"variable": "m", "values": [1]}, "x": 1},
    ],
)
def test_invalid_sweeps(doc):
    with pytest.raises(ConfigInvalid):
        validate_sweep_spec(doc)


# -- scenarios -----------------------------------------------------------------


def test_run_hom():
    doc = run_scenario(validate_config(
        {"input_kind": "fock_fock", "n": 1, "m": 1, "theta": "pi/4", "outputs": ["state", "stats", "oracle"]}
    ))
    first = doc["stats"]["first"]
    assert first["mandel_q"] == pytest.approx(0, abs=1e-12)
    assert first["g2"] == pytest.approx(1, abs=1e-12)
    assert doc["stats"]["g2_cross"] == pytest.approx(0, abs=1e-14)
    cells = {(k, l) for k, l, re, im in doc["state"] if abs(complex(re, im)) > 1e-14}
    assert cells == {(2, 0), (0, 2)}


def test_run_coherent_pair():
    doc = run_scenario(validate_config(
        {"input_kind": "coherent_coherent", "alpha": 1, "beta": 1, "theta": "pi/4"}
    ))
    assert doc["stats"]["first"]["mean"] == pytest.approx(1, abs=1e-8)
    assert doc["stats"]["second"]["mean"] == pytest.approx(1, abs=1e-8)
    assert doc["oracle"]["fidelity"] >= 1 - 1e-8


def test_run_hybrid_unit_alpha():
    doc = run_scenario(validate_config(
        {"input_kind": "fock_coherent", "n": 1, "alpha": 1, "theta": "pi/4"}
    ))
    assert doc["stats"]["first"]["mandel_q"] == pytest.approx(0.25, abs=1e-8)
    assert doc["oracle"]["max_delta"] < 1e-8
    assert doc["oracle"]["paper_verbatim"]["mandel_q_first"] == pytest.approx(0.25, abs=1e-12)


def test_run_with_sample():
    cfg = validate_config({
        "input_kind": "fock_fock", "n": 1, "m": 0, "theta": "pi/4",
        "outputs": ["sample"], "shots": 100, "seed": 5,
    })
    doc = run_scenario(cfg)
    assert doc["sample"]["shots"] == 100 and doc["sample"]["seed"] == 5
    assert "stats" not in doc


# -- CLI -----------------------------------------------------------------------


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def test_cli_run_stdout(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_fock", "n": 1, "m": 1, "theta": "pi/4"})
    assert main(["run", cfg]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["tool"] == "fockmix"
    assert doc["stats"]["second"]["variance"] == pytest.approx(1, abs=1e-12)


def test_cli_run_out_file(tmp_path):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_fock", "n": 0, "m": 0, "theta": 0})
    out = tmp_path / "r.json"
    assert main(["run", cfg, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    # vacuum: ratios undefined, serialized as null
    assert doc["stats"]["first"]["mandel_q"] is None


def test_cli_sample_reproducible(tmp_path):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_coherent", "n": 1, "alpha": 0.5, "theta": "pi/4"})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["sample", cfg, "--shots", "5000", "--seed", "77", "--out", str(a)]) == 0
    assert main(["sample", cfg, "--shots", "5000", "--seed", "77", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["sample"]["prng"] == "numpy.random.PCG64"


def test_cli_config_error(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_coherent", "n": 1, "m": 2, "alpha": 1, "theta": 0})
    assert main(["run", cfg]) == EXIT_CONFIG
    assert "m: not allowed" in capsys.readouterr().err


def test_cli_cutoff_error(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_fock", "n": 3, "m": 2, "theta": 0, "cutoffs": 2})
    assert main(["run", cfg]) == EXIT_NUMERIC
    assert "cutoff" in capsys.readouterr().err


def test_cli_lossy_sample(tmp_path):
    cfg = write(tmp_path, "c.json", {"input_kind": "coherent_coherent", "alpha": 3, "beta": 0, "theta": 0, "cutoffs": 5})
    assert main(["sample", cfg, "--shots", "10", "--seed", "1"]) == EXIT_NUMERIC


def test_cli_io_error(tmp_path):
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_IO
    spec = write(tmp_path, "s.json", {
        "base": {"input_kind": "fock_fock", "n": 1, "theta": 0}, "sweep": {"variable": "m", "values": [1]},
    })
    assert main(["sweep", "--spec", spec, "--out", str(tmp_path / "no" / "dir.csv")]) == EXIT_IO


def test_help_documents_fields(capsys):
    with pytest.raises(SystemExit):
        main(["run", "--help"])
    text = capsys.readouterr().out
    for name in ("input_kind", "alpha", "beta", "theta", "phi", "cutoffs", "outputs", "shots", "seed"):
        assert name in text


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, "c.json", {"input_kind": "fock_fock", "n": 1, "m": 0, "theta": "pi/3"})
    proc = subprocess.run([sys.executable, "-m", "fockmix", "run", cfg], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["stats"]["first"]["mean"] == pytest.approx(0.25)


# -- sweeps and figures --------------------------------------------------------


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sweep_csv_format(tmp_path):
    spec = write(tmp_path, "s.json", {
        "base": {"input_kind": "fock_fock", "theta": "pi/4"},
        "series": {"variable": "n", "values": [0, 1]},
        "sweep": {"variable": "m", "values": [0, 1, 2]},
    })
    out = tmp_path / "o.csv"
    assert main(["sweep", "--spec", spec, "--out", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "n,m,mean_c,mean_d,var_c,q_c,g2_c,g2_cross,q_c_oracle,g2_c_oracle,norm_deficit"
    assert [tuple(line.split(",")[:2]) for line in lines[1:]] == [
        ("0", "0"), ("0", "1"), ("0", "2"), ("1", "0"), ("1", "1"), ("1", "2"),
    ]
    # vacuum row: undefined ratios are empty cells
    assert lines[1].split(",")[5] == ""
    zero = tmp_path / "z.csv"
    assert main(["sweep", "--spec", spec, "--out", str(zero), "--undefined-as-zero"]) == 0
    assert zero.read_text().splitlines()[1].split(",")[5] == "0"


def test_seventeen_digits():
    text = format_csv(["x"], [[1 / 3]])
    assert text == "x\n0.33333333333333331\n"


@pytest.fixture(scope="module")
def figures(tmp_path_factory):
    first = tmp_path_factory.mktemp("a")
    second = tmp_path_factory.mktemp("b")
    run_figures([2, 3, 4, 5], first)
    run_figures([2, 4], second)
    return first, second


def test_figures_byte_identical(figures):
    first, second = figures
    for name in ("fig2.csv", "fig4.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert (first / "fig3.csv").read_bytes() == (first / "fig2.csv").read_bytes()


def test_fig2_rows(figures):
    rows = read_csv(figures[0] / "fig2.csv")
    assert len(rows) == 5 * 31
    row = next(r for r in rows if r["n"] == "1" and r["m"] == "1")
    assert abs(float(row["q_c"])) < 1e-12
    assert float(row["g2_c"]) == pytest.approx(1, abs=1e-12)
    assert float(row["g2_cross"]) < 1e-14


def test_fig4_poissonian_series(figures):
    rows = read_csv(figures[0] / "fig4.csv")
    assert len(rows) == 5 * 61
    zero = [r for r in rows if r["n"] == "0"]
    assert zero[0]["q_c"] == ""  # vacuum at alpha = 0
    assert all(abs(float(r["q_c"])) < 1e-9 for r in zero[1:])
    assert "q_c_paper_verbatim" in rows[0]


@pytest.mark.parametrize("name", ["fig2.csv", "fig4.csv"])
def test_numeric_columns_match_oracle(figures, name):
    for r in read_csv(figures[0] / name):
        for col in ("q_c", "g2_c"):
            if r[col] and r[col + "_oracle"]:
                assert abs(float(r[col]) - float(r[col + "_oracle"])) < 1e-8, r


def test_sweep_rows_programmatic():
    spec = validate_sweep_spec({
        "base": {"input_kind": "coherent_coherent", "alpha": 1, "beta": 0.5},
        "sweep": {"variable": "theta", "values": ["0", "pi/4", "pi/2"]},
    })
    header, rows = sweep_rows(spec)
    assert header[:2] == ["series", "theta"]
    for row in rows:
        assert row[2] + row[3] == pytest.approx(1.25, abs=1e-10)
    assert io.StringIO(format_csv(header, rows)).read().count("\n") == 4
