"""Command-line interface: exit codes, artifacts, determinism."""

import math
import subprocess
import sys

import numpy as np
import pytest

from lcfpost.calibration import load_specimens, save_specimens
from lcfpost.cli import main
from lcfpost.materials import MaterialParams, load_material, save_material
from lcfpost.mesh import Mesh, Node, write_mesh
from lcfpost.reliability import (aggregate_segments, integrate_hazard,
                                 read_density_vtk, read_faces_csv,
                                 read_pof_csv)

from meshes import hex_block, single_hex, smooth_warp, with_displacement
from test_calibration import PARAMS as CAL_PARAMS
from test_calibration import synthetic_records
from test_reliability import MAT, quadratic_field, uniaxial

ARTIFACTS = ("pof.csv", "faces.csv", "density.vtk", "summary.txt")


@pytest.fixture()
def case(tmp_path):
    """Unit-cube mesh under uniform uniaxial strain plus its material file."""
    mesh_path = tmp_path / "cube.mesh"
    write_mesh(with_displacement(single_hex(), uniaxial), mesh_path)
    material_path = tmp_path / "material.txt"
    save_material(MAT, material_path)
    return str(mesh_path), str(material_path)


def summary_value(out_dir, key):
    for line in (out_dir / "summary.txt").read_text().splitlines():
        if line.startswith(f"{key} = "):
            return line.split(" = ", 1)[1]
    raise AssertionError(f"{key} not in summary")


def artifact_bytes(out_dir):
    return {name: (out_dir / name).read_bytes() for name in ARTIFACTS}


class TestUsageErrors:
    def test_no_subcommand(self, capsys):
        assert main([]) == 1
        assert "subcommand" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert main(["analyze", "--mesh", "x", "--material", "y",
                     "--frobnicate"]) == 1

    def test_missing_required(self, capsys):
        assert main(["analyze", "--mesh", "x"]) == 1

    @pytest.mark.parametrize("lq", ["0", "7"])
    def test_lq_out_of_range(self, case, tmp_path, lq, capsys):
        mesh, material = case
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--lq", lq, "--out", str(tmp_path / "o")]) == 1

    def test_bad_grid_bounds(self, case, tmp_path, capsys):
        mesh, material = case
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--grid-start", "10.0", "--grid-stop", "5.0",
                     "--out", str(tmp_path / "o")]) == 1

    def test_unknown_free_name(self, tmp_path, capsys):
        assert main(["calibrate", "--data", "d.csv", "--fixed", "f.txt",
                     "--free", "junk"]) == 1


class TestInputErrors:
    def test_missing_mesh_file(self, tmp_path, case, capsys):
        _, material = case
        assert main(["analyze", "--mesh", str(tmp_path / "absent.mesh"),
                     "--material", material,
                     "--out", str(tmp_path / "o")]) == 2

    def test_malformed_mesh(self, tmp_path, case, capsys):
        _, material = case
        bad = tmp_path / "bad.mesh"
        bad.write_text("NODES\n1 0.0 oops 0.0\n")
        assert main(["analyze", "--mesh", str(bad), "--material", material,
                     "--out", str(tmp_path / "o")]) == 2

    def test_malformed_material(self, tmp_path, case, capsys):
        mesh, _ = case
        bad = tmp_path / "bad.txt"
        bad.write_text("E = 1.0\nstiffness = 3.0\n")
        assert main(["analyze", "--mesh", mesh, "--material", str(bad),
                     "--out", str(tmp_path / "o")]) == 2

    def test_bad_config_file(self, tmp_path, case, capsys):
        mesh, material = case
        config = tmp_path / "run.cfg"
        config.write_text("bogus_option 3\n")
        assert main(["--config", str(config), "analyze", "--mesh", mesh,
                     "--material", material, "--out", str(tmp_path / "o")]) == 2

    def test_unfittable_free_parameter(self, tmp_path, capsys):
        # K parses as a material key but cannot be estimated from
        # strain-controlled data; rejected during the fit setup
        data = tmp_path / "specimens.csv"
        save_specimens(synthetic_records(CAL_PARAMS, [4e-3, 6e-3], [5, 5]),
                       data)
        fixed = tmp_path / "fixed.txt"
        save_material(CAL_PARAMS, fixed)
        assert main(["calibrate", "--data", str(data), "--fixed", str(fixed),
                     "--free", "K", "--out", str(tmp_path / "o")]) == 2


class TestNumericalErrors:
    def test_all_degenerate_mesh(self, tmp_path, case, capsys):
        _, material = case
        base = single_hex()
        flat = Mesh(nodes={nid: Node(id=nid, coords=n.coords[:2] + (0.0,))
                           for nid, n in base.nodes.items()},
                    elements=list(base.elements))
        mesh_path = tmp_path / "flat.mesh"
        write_mesh(flat, mesh_path)
        assert main(["analyze", "--mesh", str(mesh_path),
                     "--material", material,
                     "--out", str(tmp_path / "o")]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestAnalyze:
    def test_artifacts_and_eta(self, case, tmp_path, capsys):
        mesh, material = case
        out = tmp_path / "out"
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--out", str(out)]) == 0
        for name in ARTIFACTS:
            assert (out / name).exists()
        expected = integrate_hazard(with_displacement(single_hex(), uniaxial),
                                    MAT)
        assert float(summary_value(out, "eta")) == expected.eta
        assert float(summary_value(out, "total hazard")) == expected.total
        assert float(summary_value(out, "m")) == 2.5
        assert summary_value(out, "boundary faces") == "6"

        faces = read_faces_csv(out / "faces.csv")
        assert tuple(faces) == expected.contributions

        n, p = read_pof_csv(out / "pof.csv")
        assert n.size == 200
        assert n[0] == pytest.approx(expected.eta * 1e-4, rel=1e-12)
        assert n[-1] == pytest.approx(expected.eta * 10.0, rel=1e-12)
        assert np.all(np.diff(p) >= 0)

        _, polys, scalars = read_density_vtk(out / "density.vtk")
        assert len(polys) == 6
        assert scalars["hazard_density"] == pytest.approx(
            [c.density for c in expected.contributions], rel=1e-15)

    def test_reruns_bit_identical(self, case, tmp_path, capsys):
        mesh, material = case
        out1, out2, out3 = (tmp_path / d for d in ("a", "b", "c"))
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--out", str(out1)]) == 0
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--out", str(out2)]) == 0
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--out", str(out3), "--workers", "4"]) == 0
        first = artifact_bytes(out1)
        assert artifact_bytes(out2) == first
        assert artifact_bytes(out3) == first

    def test_explicit_grid(self, case, tmp_path, capsys):
        mesh, material = case
        out = tmp_path / "out"
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--grid-start", "1e5", "--grid-stop", "1e6",
                     "--grid-count", "7", "--grid-spacing", "linear",
                     "--out", str(out)]) == 0
        n, _ = read_pof_csv(out / "pof.csv")
        assert np.array_equal(n, np.linspace(1e5, 1e6, 7))

    def test_zero_field_run(self, tmp_path, case, capsys):
        _, material = case
        mesh_path = tmp_path / "unloaded.mesh"
        write_mesh(single_hex(), mesh_path)
        out = tmp_path / "out"
        assert main(["analyze", "--mesh", str(mesh_path),
                     "--material", material, "--out", str(out)]) == 0
        assert "total hazard is zero" in (out / "summary.txt").read_text()
        n, p = read_pof_csv(out / "pof.csv")
        assert n.size == 0 and p.size == 0
        faces = read_faces_csv(out / "faces.csv")
        assert len(faces) == 6
        assert all(c.hazard == 0.0 for c in faces)

    def test_shakedown_halving_switch(self, case, tmp_path, capsys):
        mesh, material = case
        out_before, out_after = tmp_path / "before", tmp_path / "after"
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--out", str(out_before)]) == 0
        assert main(["analyze", "--mesh", mesh, "--material", material,
                     "--shakedown-halving", "after",
                     "--out", str(out_after)]) == 0
        eta_before = float(summary_value(out_before, "eta"))
        eta_after = float(summary_value(out_after, "eta"))
        assert abs(eta_before / eta_after - 1.0) > 1e-6

    def test_segment_aggregation_matches_pointwise_relation(
            self, tmp_path, capsys):
        # Weibull shape chosen so the n = 0.003231 eta row carries a
        # 6.142e-5 segment PoF; 44 segments combine to about 0.270%
        p_seg, nstar, segments = 6.142e-5, 3.231e-3, 44
        m = math.log(-math.log1p(-p_seg)) / math.log(nstar)
        mesh_path = tmp_path / "cube.mesh"
        write_mesh(with_displacement(single_hex(), uniaxial), mesh_path)
        material_path = tmp_path / "material.txt"
        save_material(MaterialParams(E=200000.0, nu=0.3, K=1000.0, n_ro=0.1,
                                     sigma_f=1800.0, b=-0.1, eps_f=0.5,
                                     c=-0.6, m_weibull=m), material_path)
        out = tmp_path / "out"
        assert main(["analyze", "--mesh", str(mesh_path),
                     "--material", str(material_path),
                     "--segments", str(segments), "--out", str(out)]) == 0
        row = next(line for line in (out / "summary.txt").read_text().splitlines()
                   if line.startswith("0.003231"))
        _, _, seg_pof, combined = row.split()
        assert float(seg_pof) == pytest.approx(p_seg, rel=1e-6)
        assert float(combined) == pytest.approx(
            aggregate_segments(p_seg, segments), rel=1e-6)
        assert float(combined) == pytest.approx(2.70e-3, rel=2e-3)

    def test_verbose_flag(self, case, tmp_path, capsys):
        mesh, material = case
        assert main(["-v", "analyze", "--mesh", mesh, "--material", material,
                     "--out", str(tmp_path / "o")]) == 0


class TestConfigFile:
    def test_config_supplies_defaults_flags_win(self, case, tmp_path, capsys):
        mesh, material = case
        config = tmp_path / "run.cfg"
        config.write_text("lq = 2\nsegments = 3\n# comment\nworkers 2\n")
        out1 = tmp_path / "c1"
        assert main(["--config", str(config), "analyze", "--mesh", mesh,
                     "--material", material, "--out", str(out1)]) == 0
        assert summary_value(out1, "quadrature points per dimension") == "2"
        assert summary_value(out1, "segments") == "3"
        out2 = tmp_path / "c2"
        assert main(["--config", str(config), "analyze", "--mesh", mesh,
                     "--material", material, "--lq", "3",
                     "--out", str(out2)]) == 0
        assert summary_value(out2, "quadrature points per dimension") == "3"
        assert summary_value(out2, "segments") == "3"


class TestConvergence:
    def test_constant_field_is_flat(self, case, tmp_path, capsys):
        mesh, material = case
        out = tmp_path / "out"
        assert main(["convergence", "--mesh", mesh, "--material", material,
                     "--out", str(out)]) == 0
        lines = (out / "convergence.csv").read_text().splitlines()
        assert lines[0] == "lq,eta,eta_over_eta6"
        assert len(lines) == 7
        etas = [float(line.split(",")[1]) for line in lines[1:]]
        ratios = [float(line.split(",")[2]) for line in lines[1:]]
        # constant integrand: every rule integrates it exactly
        assert etas == pytest.approx([etas[-1]] * 6, rel=1e-13)
        assert ratios[-1] == 1.0

    def test_smooth_field_plateaus(self, tmp_path, case, capsys):
        _, material = case
        mesh_path = tmp_path / "warped.mesh"
        write_mesh(with_displacement(hex_block(2, warp=smooth_warp),
                                     quadratic_field), mesh_path)
        out = tmp_path / "out"
        assert main(["convergence", "--mesh", str(mesh_path),
                     "--material", material, "--out", str(out)]) == 0
        lines = (out / "convergence.csv").read_text().splitlines()
        etas = [float(line.split(",")[1]) for line in lines[1:]]
        assert abs(etas[3] / etas[5] - 1.0) < 1e-3


class TestCalibrate:
    @pytest.fixture()
    def inputs(self, tmp_path):
        records = synthetic_records(CAL_PARAMS, [4e-3, 6e-3, 9e-3],
                                    [25, 25, 25], seed=21)
        data = tmp_path / "specimens.csv"
        save_specimens(records, data)
        fixed = tmp_path / "fixed.txt"
        from dataclasses import replace
        save_material(replace(CAL_PARAMS, sigma_f=1500.0, m_weibull=2.2),
                      fixed)
        return str(data), str(fixed)

    def test_fit_outputs(self, inputs, tmp_path, capsys):
        data, fixed = inputs
        out = tmp_path / "out"
        assert main(["calibrate", "--data", data, "--fixed", fixed,
                     "--restarts", "2", "--out", str(out)]) == 0
        fitted = load_material(out / "fitted_material.txt")
        assert fitted.m_weibull != 2.2      # moved by the fit
        assert fitted.K == CAL_PARAMS.K     # fixed parameter untouched
        report = (out / "fit_report.txt").read_text()
        assert "log_likelihood = " in report
        assert "m_weibull" in report and "# fitted" in report
        assert "K = 1000.0  # fixed" in report

    def test_seeded_reruns_bit_identical(self, inputs, tmp_path, capsys):
        data, fixed = inputs
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert main(["calibrate", "--data", data, "--fixed", fixed,
                         "--restarts", "2", "--seed", "5",
                         "--out", str(out)]) == 0
        assert ((out1 / "fitted_material.txt").read_bytes()
                == (out2 / "fitted_material.txt").read_bytes())
        assert ((out1 / "fit_report.txt").read_bytes()
                == (out2 / "fit_report.txt").read_bytes())

    def test_too_few_records_exit_2(self, tmp_path, capsys):
        records = synthetic_records(CAL_PARAMS, [4e-3], [2], seed=22)
        data = tmp_path / "specimens.csv"
        save_specimens(records, data)
        fixed = tmp_path / "fixed.txt"
        save_material(CAL_PARAMS, fixed)
        assert main(["calibrate", "--data", str(data), "--fixed", str(fixed),
                     "--out", str(tmp_path / "o")]) == 2
        assert "under-determined" in capsys.readouterr().err

    def test_free_subset(self, inputs, tmp_path, capsys):
        data, fixed = inputs
        out = tmp_path / "out"
        assert main(["calibrate", "--data", data, "--fixed", fixed,
                     "--free", "m_weibull", "--restarts", "1",
                     "--out", str(out)]) == 0
        fitted = load_material(out / "fitted_material.txt")
        assert fitted.sigma_f == 1500.0     # not in the free set
        report = (out / "fit_report.txt").read_text()
        assert "free parameters = m_weibull" in report


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run([sys.executable, "-m", "lcfpost.cli"],
                              capture_output=True, text=True)
        assert proc.returncode == 1
        assert "error" in proc.stderr
