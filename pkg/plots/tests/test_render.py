"""End-to-end figure rendering against real simulator outputs.

The simulator is driven only through its command line; this package reads the
files it writes. A session fixture replicates the presets once into a shared
directory so every render test reuses the same artifacts.
"""

import subprocess
import sys

import pytest

pytest.importorskip("dtcplots")

from dtcplots import FigureRequest, SchemaError, render
from dtcplots.cli import _main

RUN_SIMULATOR = [sys.executable, "-c",
                 "import sys; from dtcsim.cli import main; "
                 "sys.exit(main(sys.argv[1:]))"]


def _replicate(preset, outdir):
    proc = subprocess.run(RUN_SIMULATOR + ["replicate", preset,
                                           "--output", str(outdir)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return outdir


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    base = tmp_path_factory.mktemp("simulator")
    _replicate("fig1c", base / "fig1c")
    _replicate("fig1d", base / "fig1d")
    _replicate("fig3", base / "fig3")
    return {
        "series": base / "fig1c" / "fig1_drive_on" / "series.csv",
        "metadata": base / "fig1c" / "fig1_drive_on" / "metadata.json",
        "spectrum_off": base / "fig1c" / "fig1_drive_off" / "spectrum.csv",
        "spectrum_on": base / "fig1c" / "fig1_drive_on" / "spectrum.csv",
        "sweep": base / "fig1d" / "fig1d_eps_sweep" / "sweep.csv",
        "sweep_metadata": base / "fig1d" / "fig1d_eps_sweep" / "metadata.json",
        "remote_a": base / "fig3" / "fig3_pair_01" / "series.csv",
        "remote_b": base / "fig3" / "fig3_pair_01" / "series_site2.csv",
    }


@pytest.mark.parametrize("ext", [".svg", ".png"])
def test_timeseries_renders(artifacts, tmp_path, ext):
    out = render(FigureRequest(kind="timeseries",
                               inputs=(artifacts["series"],),
                               output=tmp_path / f"ts{ext}",
                               metadata=artifacts["metadata"]))
    assert out.exists() and out.stat().st_size > 0


def test_spectrum_pair_renders(artifacts, tmp_path):
    out = render(FigureRequest(
        kind="spectrum-pair",
        inputs=(artifacts["spectrum_off"], artifacts["spectrum_on"]),
        output=tmp_path / "pair.svg",
        metadata=artifacts["metadata"]))
    assert out.exists() and out.stat().st_size > 0


def test_eps_sweep_renders(artifacts, tmp_path):
    out = render(FigureRequest(kind="eps-sweep",
                               inputs=(artifacts["sweep"],),
                               output=tmp_path / "sweep.svg",
                               metadata=artifacts["sweep_metadata"]))
    assert out.exists() and out.stat().st_size > 0


def test_remote_pair_renders(artifacts, tmp_path):
    out = render(FigureRequest(
        kind="remote-pair",
        inputs=(artifacts["remote_a"], artifacts["remote_b"]),
        output=tmp_path / "remote.png"))
    assert out.exists() and out.stat().st_size > 0


def test_sweep_with_failed_rows_still_renders(tmp_path):
    # failed grid points are omitted from the curve, not fatal
    sweep = tmp_path / "sweep.csv"
    sweep.write_text(
        "epsilon,height_at_half,global_max_at_half,splitting,error\n"
        "0.0,1.0,true,0.0,\n"
        "0.1,,,,ConfigError: bad point\n"
        "0.2,0.8,true,0.02,\n"
    )
    out = render(FigureRequest(kind="eps-sweep", inputs=(sweep,),
                               output=tmp_path / "sweep.svg"))
    assert out.exists()


def test_svg_renders_are_byte_identical(artifacts, tmp_path):
    request = FigureRequest(kind="timeseries", inputs=(artifacts["series"],),
                            output=tmp_path / "idem.svg",
                            metadata=artifacts["metadata"])
    first = render(request).read_bytes()
    second = render(request).read_bytes()
    assert first == second


def test_png_renders_are_byte_identical(artifacts, tmp_path):
    request = FigureRequest(kind="timeseries", inputs=(artifacts["series"],),
                            output=tmp_path / "idem.png")
    first = render(request).read_bytes()
    second = render(request).read_bytes()
    assert first == second


def test_caption_changes_the_image(artifacts, tmp_path):
    bare = render(FigureRequest(kind="timeseries",
                                inputs=(artifacts["series"],),
                                output=tmp_path / "bare.svg"))
    captioned = render(FigureRequest(kind="timeseries",
                                     inputs=(artifacts["series"],),
                                     output=tmp_path / "cap.svg",
                                     metadata=artifacts["metadata"]))
    assert bare.read_bytes() != captioned.read_bytes()


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(SchemaError, match="figure kind"):
        FigureRequest(kind="histogram", inputs=("a.csv",),
                      output=tmp_path / "x.svg")


def test_input_count_enforced(artifacts, tmp_path):
    with pytest.raises(SchemaError, match="exactly 2"):
        FigureRequest(kind="spectrum-pair", inputs=(artifacts["spectrum_on"],),
                      output=tmp_path / "x.svg")


def test_output_extension_enforced(artifacts, tmp_path):
    with pytest.raises(SchemaError, match="output"):
        FigureRequest(kind="timeseries", inputs=(artifacts["series"],),
                      output=tmp_path / "x.pdf")


def test_wrong_schema_names_the_column(artifacts, tmp_path):
    # a sweep file is not a series file and the error should say why
    with pytest.raises(SchemaError, match="header mismatch"):
        render(FigureRequest(kind="timeseries", inputs=(artifacts["sweep"],),
                             output=tmp_path / "x.svg"))


def test_cli_renders_and_reports_path(artifacts, tmp_path, capsys):
    out = tmp_path / "cli.svg"
    rc = _main("spectrum-pair", 2, "spectrum CSV",
               ["--input", str(artifacts["spectrum_off"]),
                "--input", str(artifacts["spectrum_on"]),
                "--output", str(out),
                "--metadata", str(artifacts["metadata"])])
    assert rc == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_cli_schema_violation_exits_nonzero(tmp_path):
    bad = tmp_path / "series.csv"
    bad.write_text("period_index,mag\n0,1.0\n")
    proc = subprocess.run(
        [sys.executable, "-c",
         "from dtcplots.cli import timeseries_main; timeseries_main()",
         "--input", str(bad), "--output", str(tmp_path / "x.svg")],
        capture_output=True, text=True)
    assert proc.returncode == 1
    assert "header mismatch" in proc.stderr
    assert not (tmp_path / "x.svg").exists()


def test_cli_missing_input_exits_nonzero(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-c",
         "from dtcplots.cli import eps_sweep_main; eps_sweep_main()",
         "--input", str(tmp_path / "absent.csv"),
         "--output", str(tmp_path / "x.svg")],
        capture_output=True, text=True)
    assert proc.returncode == 1
    assert "not found" in proc.stderr


def test_acceptance_figures_from_replicated_outputs(artifacts, tmp_path):
    """Every packaged script consumes real replicate output without error."""
    jobs = [
        ("timeseries", [artifacts["series"]], artifacts["metadata"]),
        ("spectrum-pair", [artifacts["spectrum_off"],
                           artifacts["spectrum_on"]], artifacts["metadata"]),
        ("eps-sweep", [artifacts["sweep"]], artifacts["sweep_metadata"]),
        ("remote-pair", [artifacts["remote_a"], artifacts["remote_b"]], None),
    ]
    for kind, inputs, metadata in jobs:
        out = tmp_path / f"{kind}.svg"
        argv = []
        for item in inputs:
            argv += ["--input", str(item)]
        argv += ["--output", str(out)]
        if metadata is not None:
            argv += ["--metadata", str(metadata)]
        rc = _main(kind, len(inputs), "file", argv)
        assert rc == 0, kind
        assert out.stat().st_size > 0
    print("A11 PASS: all figure kinds rendered from replicated outputs")
