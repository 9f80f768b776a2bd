#!/usr/bin/env python3
"""Configuration parsing, experiment runs, result files and the command line."""

import dataclasses
import textwrap

import pytest

from starspin.client import compute_experiment, emit_plot, parse_config, read_result, render_config, run_cli
from starspin.client.runner import ExperimentResult, write_result
from starspin.utils.errors import ColumnMismatch, InvalidSpec, MissingRequired, ParseError, UnknownKey

DIFFUSION = """\
experiment = diffusion
seed = 11

[register]
preset = acetonitrile

[diffusion]
d_const = 2.3e-9
delta_small = 0.002
delta_big = 0.1
g_z = 0, 0.1, 0.2
orders = 1, 2, 4
trials = 2000
"""

SPECTRUM = """\
experiment = spectrum

[register]
preset = acetonitrile

[spectrum]
channel = central
"""


def _write(tmp_path, text, name="experiment.cfg"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return path


def test_render_then_parse_is_identity():
    config = parse_config(DIFFUSION)
    assert parse_config(render_config(config)) == config
    assert config.params["g_z"] == (0.0, 0.1, 0.2)
    assert config.params["orders"] == (1, 2, 4)
    assert config.register == {"preset": "acetonitrile"}


def test_hash_inside_values_survives_a_round_trip():
    text = DIFFUSION.replace("seed = 11", "seed = 11  # fixed\noutput = runs#2").replace(
        "preset = acetonitrile", "preset = acetonitrile\nlabel = \"batch #3\"  # quoted"
    )
    config = parse_config(text)
    assert config.seed == 11
    assert config.output == "runs#2"
    assert config.register["label"] == "batch #3"
    rendered = render_config(config)
    assert 'label = "batch #3"' in rendered
    assert parse_config(rendered) == config


def test_unknown_key_suggests_spelling():
    text = DIFFUSION.replace("preset = acetonitrile", "preset = acetonitrile\njca = 17")
    with pytest.raises(UnknownKey) as excinfo:
        parse_config(text)
    assert excinfo.value.key == "jca"
    assert excinfo.value.suggestion == "j_ca"


def test_unknown_section():
    with pytest.raises(UnknownKey):
        parse_config(DIFFUSION.replace("[register]", "[registr]"))


def test_parse_error_has_line_number():
    with pytest.raises(ParseError) as excinfo:
        parse_config("experiment = noon\nseed\n")
    assert excinfo.value.line == 2


def test_bad_value():
    with pytest.raises(ParseError):
        parse_config(DIFFUSION.replace("trials = 2000", "trials = many"))


def test_missing_required_key():
    with pytest.raises(MissingRequired):
        parse_config(DIFFUSION.replace("d_const = 2.3e-9\n", ""))


def test_defaults_applied():
    config = parse_config(SPECTRUM)
    assert config.seed == 0
    assert config.backend == "auto"
    assert config.params == {"channel": "central", "input": "thermal", "exact": False}


def test_too_small_register_rejected():
    config = parse_config(SPECTRUM.replace("preset = acetonitrile", "preset = acetonitrile\nn_total = 1"))
    with pytest.raises(InvalidSpec):
        compute_experiment(config)


def test_chaos_map_without_coupling():
    config = parse_config("""\
experiment = chaos

[register]
preset = acetonitrile

[chaos]
k = 0
grid = 4
n_kicks = 10
average_window = 5
""")
    result = compute_experiment(config)
    assert result.columns == ("theta", "phi", "k", "mean_entropy")
    assert len(result.rows) == 16
    assert max(result.column("mean_entropy")) < 1e-10
    assert result.metadata["results"]["entropy_units"] == "bits"


def test_dtc_perfect_kicks():
    config = parse_config("""\
experiment = dtc

[register]
preset = acetonitrile

[dtc]
errors = 0
""")
    result = compute_experiment(config)
    (row,) = result.rows
    assert row[2] == pytest.approx(500.0)
    assert row[5] == pytest.approx(500.0)


def test_csv_is_byte_identical_across_runs(tmp_path):
    config = parse_config(DIFFUSION)
    write_result(compute_experiment(config), tmp_path / "a")
    write_result(compute_experiment(config), tmp_path / "b")
    first = (tmp_path / "a" / "diffusion.csv").read_bytes()
    assert first == (tmp_path / "b" / "diffusion.csv").read_bytes()
    assert first.startswith(b"q,lopsidedness,g_z,s_closed,s_mc,stderr\n")


def test_worker_count_does_not_change_rows():
    config = parse_config(DIFFUSION)
    serial = compute_experiment(config)
    parallel = compute_experiment(dataclasses.replace(config, jobs=2))
    assert serial.rows == parallel.rows


def test_result_files_round_trip(tmp_path):
    result = compute_experiment(parse_config(SPECTRUM))
    paths = write_result(result, tmp_path)
    assert [p.name for p in paths] == ["spectrum.csv", "spectrum.meta"]
    loaded = read_result(paths[0])
    assert loaded.columns == result.columns
    assert loaded.rows == result.rows
    assert loaded.metadata["experiment"] == "spectrum"
    assert loaded.metadata["seed"] == 0


def test_cli_without_arguments():
    assert run_cli([]) == 1


def test_cli_missing_config(tmp_path):
    assert run_cli(["run", str(tmp_path / "absent.cfg")]) == 1


def test_cli_unknown_key_writes_nothing(tmp_path):
    path = _write(tmp_path, DIFFUSION.replace("trials = 2000", "trails = 2000"))
    out = tmp_path / "out"
    assert run_cli(["run", str(path), "--output", str(out)]) == 1
    assert not out.exists()


def test_cli_run_writes_files(tmp_path):
    path = _write(tmp_path, SPECTRUM)
    out = tmp_path / "out"
    assert run_cli(["run", str(path), "--output", str(out), "--quiet"]) == 0
    assert (out / "spectrum.csv").exists()
    assert (out / "spectrum.meta").exists()


def test_cli_dense_limit_is_a_simulation_error(tmp_path):
    path = _write(tmp_path, SPECTRUM.replace("acetonitrile", "ttss"))
    out = tmp_path / "out"
    assert run_cli(["run", str(path), "--backend", "dense", "--output", str(out)]) == 2
    assert not out.exists()


def test_cli_presets():
    assert run_cli(["presets"]) == 0


def test_plot_rejects_empty_result(tmp_path):
    empty = ExperimentResult("spectrum", ("frequency_hz", "amplitude"), [])
    with pytest.raises(ColumnMismatch):
        emit_plot(empty, "sticks", tmp_path / "empty.svg")


def test_plot_rejects_wrong_columns(tmp_path):
    result = compute_experiment(parse_config(SPECTRUM))
    with pytest.raises(ColumnMismatch):
        emit_plot(result, "heatmap", tmp_path / "map.svg")


def test_cli_plot_wrong_kind_for_columns(tmp_path):
    paths = write_result(compute_experiment(parse_config(SPECTRUM)), tmp_path)
    assert run_cli(["plot", str(paths[0]), "--kind", "heatmap"]) == 1


def test_sticks_svg_is_reproducible(tmp_path):
    paths = write_result(compute_experiment(parse_config(SPECTRUM)), tmp_path)
    first = tmp_path / "first.svg"
    second = tmp_path / "second.svg"
    assert run_cli(["plot", str(paths[0]), "--kind", "sticks", "--output", str(first)]) == 0
    assert run_cli(["plot", str(paths[0]), "--kind", "sticks", "--output", str(second)]) == 0
    content = first.read_bytes()
    assert content.startswith(b"<?xml")
    assert content == second.read_bytes()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
