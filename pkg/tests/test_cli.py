import csv
import json

import numpy as np
import pytest

from nnlse import io
from nnlse.cli import run
from nnlse.fock import enumerate_sector
from nnlse.lattice import make_grid
from nnlse.qoperators import build_hamiltonian


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_spectrum_csv(tmp_path):
    out = tmp_path / "eig.csv"
    rc = run(["spectrum", "--length", "6.2831853", "--modes", "8", "--particles", "2",
              "--coupling", "1.0", "--momentum-block", "0", "--out", str(out)])
    assert rc == 0
    rows = read_csv(out)
    assert rows[0] == ["sector_n", "momentum_block", "index", "eigenvalue", "residual"]
    assert len(rows) == 1 + 9
    assert all(float(r[4]) < 1e-9 for r in rows[1:])


def test_operator_export_roundtrip(tmp_path):
    trip, dense = tmp_path / "h.txt", tmp_path / "h.csv"
    assert run(["spectrum", "--modes", "2", "--particles", "2", "--out", str(tmp_path / "s.csv"),
                "--operator-out", str(trip)]) == 0
    assert run(["spectrum", "--modes", "2", "--particles", "2", "--out", str(tmp_path / "s.csv"),
                "--operator-out", str(dense), "--operator-format", "dense"]) == 0
    h = build_hamiltonian(enumerate_sector(make_grid(2 * np.pi, 2), 2), 1.0).matrix
    np.testing.assert_array_equal(io.read_triplets(trip, h.shape), h)
    np.testing.assert_array_equal(io.read_dense_csv(dense), h)


def test_gram_dirac(tmp_path):
    out, evfile = tmp_path / "gram.csv", tmp_path / "ev.json"
    assert run(["gram", "--kind", "dirac", "--particles", "1", "--modes", "4", "--length", "1",
                "--out", str(out), "--spectrum-out", str(evfile)]) == 0
    g = io.read_dense_csv(out)
    diag = np.diag(g)
    assert diag[4] == 1 and np.count_nonzero(diag) == 1
    ev = json.loads(evfile.read_text())
    np.testing.assert_allclose(ev, [-1] * 4 + [1] * 5, atol=1e-14)


def test_bethe_verify_report(tmp_path):
    out = tmp_path / "b.json"
    assert run(["bethe-verify", "--k", "-1,2", "--coupling", "1.5", "--grid", "400", "--box", "30",
                "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["cusp_residuals"]["0,1"] < 1e-10
    assert rep["fd"]["ratio"] > 1.8


def test_hermiticity_and_ls_series(tmp_path, capsys):
    assert run(["hermiticity", "--modes", "3", "--particles", "2", "--coupling", "-1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pseudo_hermiticity_defect_H"] < 1e-12
    assert rep["v_momentum_vs_position"] < 1e-12
    assert run(["ls-series", "--reference", "0,0", "--order", "2", "--coupling", "0.01"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["first_order_energy"] == pytest.approx(2 * 0.01 / (2 * np.pi))


def test_ring_bound_sweep_evolve(tmp_path, capsys):
    assert run(["ring-bethe", "--quantum-numbers", "0,1", "--coupling", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["residual"] < 1e-12
    assert run(["bound-state", "--cutoffs", "4,8", "--grid", "201"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["ed_ground"]["8"] < rep["ed_ground"]["4"] < 0
    assert run(["sweep", "--cutoffs", "3,4", "--momentum-block", "1", "--out", str(tmp_path / "sw.csv")]) == 0
    assert len(read_csv(tmp_path / "sw.csv")) == 1 + 2 * 3
    traj = tmp_path / "traj.csv"
    assert run(["evolve", "--points", "128", "--steps", "200", "--dt", "1e-3", "--every", "50",
                "--out", str(traj), "--snapshot-out", str(tmp_path / "snap.csv")]) == 0
    rows = read_csv(traj)
    assert rows[0] == ["t", "re_N", "im_N", "re_P", "im_P", "re_H", "im_H"]
    assert len(rows) == 1 + 5


def test_config_and_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"grid": {"L": 20.0, "M": 6}, "c": -2.0, "sector": {"n": 2, "momentum_block": 0}}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["spectrum", "--config", str(cfg), "--out", str(a)]) == 0
    assert run(["spectrum", "--config", str(cfg), "--modes", "4", "--out", str(b)]) == 0
    assert len(read_csv(a)) == 1 + 7
    assert len(read_csv(b)) == 1 + 5


def test_determinism(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        run(["bethe-verify", "--k", "-0.5,0.3,1.1", "--coupling", "0.7", "--grid", "200", "--box", "8",
             "--seed", "5", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_errors(tmp_path):
    assert run(["bogus"]) == 1
    assert run(["spectrum", "--nope"]) == 1
    assert run([]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(["spectrum", "--config", str(bad)]) == 1
    assert run(["spectrum", "--modes", "0"]) == 1
    # two equal quantum numbers are a validation error; non-convergence is exit 2
    assert run(["ring-bethe", "--quantum-numbers", "0,0"]) == 1
    assert run(["evolve", "--points", "64", "--amplitude", "60", "--dt", "0.05", "--steps", "200"]) == 2
