"""CLI: config parsing, presets, commands, exit codes, determinism, formats."""

import numpy as np
import pytest

from proxint import Heightmap, save_heightmap, synthesize_surface
from proxint.cli import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_VERIFY,
    build_config,
    main,
)
from proxint.errors import ConfigError


def write_config(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SPHERE_DOME_CFG = """
[scenario]
dref = 300

[kernel]
preset = heat-sio2

[separations]
min = 1
max = 300
per_decade = 20

[curve.main]
base = sphere radius=50000
layer.1 = dome height=50
"""


class TestConfig:
    def test_layer_parsing_and_override(self, tmp_path):
        cfg_path = write_config(tmp_path, SPHERE_DOME_CFG)
        args = type("A", (), {"config": cfg_path, "preset": None, "dref": 150.0})()
        from proxint.cli import load_config

        cfg = load_config(args)
        assert cfg.d_ref == 150.0  # flag beats file
        assert cfg.kernel.nu == 2.0 and cfg.kernel.alpha == pytest.approx(0.2558)
        assert len(cfg.curves) == 1
        assert cfg.curves[0].layers[0]["height"] == 50.0

    def test_bad_layer_field_path(self):
        with pytest.raises(ConfigError, match=r"curve\.x\.layer\.1\.height"):
            build_config({"curve.x": {"base": "sphere radius=1", "layer.1": "dome height=-2"}})

    def test_unknown_layer_type(self):
        with pytest.raises(ConfigError, match="unknown layer type"):
            build_config({"curve.x": {"base": "cylinder radius=1"}})

    def test_coarse_to_fine_ordering_enforced(self):
        with pytest.raises(ConfigError, match="coarse to fine"):
            build_config({
                "curve.x": {
                    "base": "sphere radius=50000",
                    "layer.1": "pyramid height=10",
                    "layer.2": "dome height=5000",
                }
            })

    def test_separations_must_increase(self):
        with pytest.raises(ConfigError, match="increasing"):
            build_config({"separations": {"list": "5,3,1"},
                          "curve.x": {"base": "sphere radius=1"}})

    def test_unknown_preset(self):
        assert main(["sweep", "--preset", "nope", "--out", "x.csv"]) == EXIT_CONFIG


class TestShapeCommand:
    def test_single_curve_table(self, tmp_path):
        cfg = write_config(tmp_path, SPHERE_DOME_CFG)
        out = tmp_path / "shape.csv"
        assert main(["shape", "--config", cfg, "--out", str(out), "--bins", "64"]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# proxint")
        assert lines[1] == "s_nm,f"
        assert len(lines) == 2 + 64

    def test_fig1_preset_writes_four_curves(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert main(["shape", "--preset", "fig1", "--out", str(out)]) == EXIT_OK
        for label in ("smooth", "dome", "pyramid", "rough"):
            assert (tmp_path / f"fig1.{label}.csv").exists()

    def test_sphere_alone_is_affine(self, tmp_path):
        cfg = write_config(tmp_path, "[curve.s]\nbase = sphere radius=50000\n")
        out = tmp_path / "s.csv"
        assert main(["shape", "--config", cfg, "--out", str(out)]) == EXIT_OK
        data = np.array([
            [float(t) for t in ln.split(",")]
            for ln in out.read_text().splitlines()[2:]
        ])
        # f = 2 pi (R - s) is a straight line
        coeffs = np.polyfit(data[:, 0], data[:, 1], 1)
        resid = data[:, 1] - np.polyval(coeffs, data[:, 0])
        assert np.abs(resid).max() < 1e-6 * data[:, 1].max()


class TestSweepCommand:
    def test_fig2_ordering_and_ratio_column(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert main(["sweep", "--preset", "fig2", "--out", str(out)]) == EXIT_OK
        values = {}
        for label in ("smooth", "dome", "rough", "pyramid"):
            lines = (tmp_path / f"fig2.{label}.csv").read_text().splitlines()
            assert lines[1] == "d_nm,I_nW,ratio"
            first = [float(t) for t in lines[2].split(",")]
            assert first[0] == 1.0
            assert first[2] == pytest.approx(first[1] / 4200.0, rel=1e-12)
            values[label] = first[1]
        assert values["smooth"] > values["dome"] > values["rough"] > values["pyramid"]

    def test_determinism_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, SPHERE_DOME_CFG)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out_a)]) == EXIT_OK
        assert main(["sweep", "--config", cfg, "--out", str(out_b)]) == EXIT_OK
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_17_digit_output(self, tmp_path):
        cfg = write_config(tmp_path, SPHERE_DOME_CFG)
        out = tmp_path / "a.csv"
        main(["sweep", "--config", cfg, "--out", str(out)])
        row = out.read_text().splitlines()[2].split(",")
        assert len(row[1]) >= 17  # 17 significant digits survive

    def test_single_separation(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[separations]\nlist = 10,11\n[curve.s]\nbase = sphere radius=50000\n",
        )
        out = tmp_path / "one.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == EXIT_OK
        assert len(out.read_text().splitlines()) == 4


class TestHeightmapCommand:
    def test_pyramid_file_reports_case_two(self, tmp_path, capsys):
        hm = synthesize_surface(
            [{"type": "pyramid", "height": 5000.0, "tile": 5000.0}], n=512
        )
        path = tmp_path / "pyr.txt"
        save_heightmap(hm, path)
        out = tmp_path / "pyr.csv"
        rc = main(["heightmap", str(path), "--out", str(out), "--bins", "256"])
        assert rc == EXIT_OK
        assert "case_n=2" in out.read_text()
        assert "case number: 2" in capsys.readouterr().out

    def test_flat_file_delta_notice(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text("\n".join(["1.5,1.5,1.5"] * 3) + "\n")
        out = tmp_path / "flat_analysis.csv"
        rc = main(["heightmap", str(path), "--dx", "1", "--dy", "1", "--out", str(out)])
        assert rc == EXIT_OK
        assert "delta-like" in capsys.readouterr().out
        assert "delta-like" in out.read_text()

    def test_rough_file_sigma_recovered(self, tmp_path, capsys):
        hm = synthesize_surface(
            [{"type": "rough", "sigma": 10.0, "xi": 40.0}], n=256, extent=2560.0, seed=42
        )
        path = tmp_path / "rough.txt"
        save_heightmap(hm, path)
        out = tmp_path / "rough.csv"
        rc = main(["heightmap", str(path), "--out", str(out), "--bins", "64"])
        assert rc == EXIT_OK
        text = capsys.readouterr().out
        sigma = float(text.split("sigma=")[1].split()[0])
        assert sigma == pytest.approx(10.0, rel=0.15)

    def test_parse_error_exit_code(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3,nan\n")
        rc = main(["heightmap", str(path), "--dx", "1", "--dy", "1",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == EXIT_CONFIG

    def test_fit_error_exit_code(self, tmp_path):
        # Two-level map: enough to histogram, too degenerate to fit.
        vals = np.zeros((8, 8))
        vals[:4] = 100.0
        save_heightmap(Heightmap(1.0, 1.0, vals), tmp_path / "two.txt")
        rc = main(["heightmap", str(tmp_path / "two.txt"),
                   "--out", str(tmp_path / "two.csv"), "--bins", "32"])
        assert rc == EXIT_NUMERIC


class TestAsymptCommand:
    def test_sphere_power_law_passes(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            "[separations]\nmin = 1\nmax = 300\nper_decade = 30\n"
            "[curve.sphere]\nbase = sphere radius=50000\n",
        )
        out = tmp_path / "rep.csv"
        rc = main(["asympt", "--config", cfg, "--out", str(out), "--window", "1,30"])
        assert rc == EXIT_OK
        text = out.read_text()
        assert "form_pred" in text
        assert ",power-law,power-law," in text
        assert text.strip().endswith(",1")

    def test_sphere_dome_log_passes(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[separations]\nmin = 1\nmax = 300\nper_decade = 30\n"
            "[curve.sd]\nbase = sphere radius=50000\nlayer.1 = dome height=5000\n",
        )
        rc = main(["asympt", "--config", cfg, "--window", "1,10"])
        assert rc == EXIT_OK

    def test_fig4_preset_constant_passes(self, tmp_path):
        assert main(["asympt", "--preset", "fig4"]) == EXIT_OK

    def test_verification_failure_exit_code(self, tmp_path):
        # An impossible tolerance forces a prefactor failure -> exit 4.
        cfg = write_config(
            tmp_path,
            "[separations]\nmin = 1\nmax = 300\nper_decade = 30\n"
            "[curve.sphere]\nbase = sphere radius=50000\n",
        )
        rc = main(["asympt", "--config", cfg, "--window", "1,30", "--tol", "1e-12"])
        assert rc == EXIT_VERIFY


class TestArgumentErrors:
    def test_missing_subcommand(self):
        assert main([]) == EXIT_CONFIG

    def test_no_curves(self, tmp_path):
        cfg = write_config(tmp_path, "[scenario]\ndref = 300\n")
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
