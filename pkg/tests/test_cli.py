import contextlib
import io
import json
import math
import re
from fractions import Fraction

import numpy as np
import pytest

import oracles
from rndf.cli import RunConfig, main


def run(args, env=None, monkeypatch=None):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        rc = main(args)
    return rc, buf.getvalue()


def run_json(args):
    rc, out = run(args)
    return rc, json.loads(out)


def csv_points(text):
    arr = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1)
    return arr[:, 0], arr[:, 1] + 1j * arr[:, 2]


def test_eval():
    rc, d = run_json(["eval", "--t", "0"])
    assert rc == 0 and abs(d["re"]) <= 1e-8 and abs(d["im"]) <= 1e-8 and d["err_bound"] <= 1e-8
    rc, d = run_json(["eval", "--x", "1", "--tol", "1e-8"])
    assert rc == 0 and abs(d["im"] - 1 / (2 * math.pi)) <= 1e-8 and abs(d["re"]) <= 1e-8
    rc, d = run_json(["eval", "--x", "2/5"])
    assert abs(complex(d["re"], d["im"]) - oracles.phi_rational(2, 5)) <= 1e-13


def test_usage_errors(capsys):
    assert main(["eval", "--t", "0", "--x", "1"]) == 2
    assert main(["eval"]) == 2
    assert main(["eval", "--t", "abc"]) == 2
    assert main(["--tol", "-1", "eval", "--t", "0"]) == 2
    assert main(["classify", "2/4"]) == 2
    assert main(["plot", "--from", "1", "--to", "0"]) == 2


def test_io_error(tmp_path):
    out = tmp_path / "missing" / "f.csv"
    assert main(["plot", "--from", "0", "--to", "1", "--n", "5", "--format", "csv", "--out", str(out)]) == 3


def test_run_config():
    RunConfig()
    with pytest.raises(ValueError):
        RunConfig(threads=0)
    with pytest.raises(ValueError):
        RunConfig(format="png")


def test_classify_and_cf():
    rc, d = run_json(["classify", "1/6"])
    assert rc == 0 and d["klass"] == "spiral" and d["q_tilde"] == 3 and d["verdict"] == "spiral"
    rc, d = run_json(["cf", "pi-3", "--n", "4"])
    pq = [(c["p"], c["q"]) for c in d["convergents"]]
    assert (1, 7) in pq and (16, 113) in pq and d["verdict"] == "certified"
    rc, d = run_json(["cf", "3/7", "--n", "8"])
    assert d["quotients"] == [0, 2, 3] and d["verdict"] == "exact"


def test_probe_corner():
    rc, d = run_json(["probe", "--rational", "1/8"])
    assert rc == 0 and d["verdict"] == "CornerMismatch"
    assert abs(d["angle_diff"] - math.pi / 2) < 2e-2


def test_probe_inconclusive():
    # four digits cannot support the irrational arc
    rc, d = run_json(["probe", "--x", "0.1416"])
    assert rc == 4 and d["verdict"] == "Inconclusive"


def test_csv_deterministic_and_atomic(tmp_path):
    args = ["plot", "--from", "0", "--to", "1", "--n", "257", "--var", "x", "--format", "csv"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "param,re,im"
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".rndf-")]


def test_threads_env_does_not_change_output(monkeypatch):
    args = ["plot", "--from", "0", "--to", "0.1", "--n", "50", "--format", "csv"]
    _, one = run(args)
    monkeypatch.setenv("RNDF_THREADS", "3")
    _, three = run(args)
    assert one == three


def test_svg_extent_matches_oracle():
    rc, svg = run(["plot", "--from", "0", "--to", "1", "--var", "x", "--n", "20001", "--format", "svg"])
    assert rc == 0 and svg.count("<path") == 1
    vb = [float(v) for v in re.search(r'viewBox="([^"]+)"', svg).group(1).split()]
    w, h = vb[2] / 1.1, vb[3] / 1.1
    xs = [oracles.phi_partial(Fraction(j, 400), 20000) for j in range(401)]
    xs = np.array(xs)
    ref = (xs.real.max() - xs.real.min()) / (xs.imag.max() - xs.imag.min())
    assert abs((w / h) / ref - 1) < 0.1


def test_zoom_spiral_winds():
    rc, out = run(["plot", "--var", "x", "--from", "999/2000", "--to", "1001/2000", "--n", "4001",
                   "--format", "csv"])
    _, z = csv_points(out)
    w = z - z[2000]
    for part in (w[:2000][::-1], w[2001:]):
        ang = np.unwrap(np.angle(part))
        assert ang.max() - ang.min() > 4 * math.pi


def test_zoom_corner_clusters():
    rc, out = run(["plot", "--var", "x", "--from", "1249/10000", "--to", "1251/10000", "--n", "2001",
                   "--format", "csv"])
    _, z = csv_points(out)
    w = z - z[1000]
    left, right = np.angle(w[900:990]), np.angle(w[1010:1100])
    assert left.std() < 1e-2 and right.std() < 1e-2
    gap = abs(math.remainder(right.mean() - left.mean(), 2 * math.pi))
    assert abs(gap - math.pi / 2) < 2e-2
