import json

import numpy as np
import pytest

from hardyscale.cli import main
from hardyscale.numerics import torus_points


def write_csv(path, values, with_im=True):
    lines = ["index,re,im" if with_im else "index,re"]
    for k, v in enumerate(values):
        v = complex(v)
        lines.append(f"{k},{float(v.real)!r},{float(v.imag)!r}" if with_im
                     else f"{k},{float(v.real)!r}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def z_plus_z2(tmp_path):
    z = torus_points(4096)
    return write_csv(tmp_path / "f.csv", z + z ** 2)


def test_unwind(capsys, z_plus_z2):
    code, out, _ = run(capsys, "unwind", "--input", z_plus_z2, "--stages", "4")
    assert code == 0
    c = [complex(e["re"], e["im"]) for e in json.loads(out)["coefficients"]]
    assert np.allclose(c, [1, 1, 0, 0], atol=1e-8)


def test_unwind_deterministic_and_with_zeros(capsys, z_plus_z2):
    a = run(capsys, "unwind", "--input", z_plus_z2, "--with-zeros")[1]
    b = run(capsys, "unwind", "--input", z_plus_z2, "--with-zeros")[1]
    assert a == b
    assert "stage_zero_estimates" in json.loads(a)


def test_grid_env(capsys, z_plus_z2, monkeypatch):
    monkeypatch.setenv("UNWIND_GRID_N", "abc")
    assert run(capsys, "unwind", "--input", z_plus_z2)[0] == 2
    monkeypatch.setenv("UNWIND_GRID_N", "1024")
    assert run(capsys, "unwind", "--input", z_plus_z2, "--stages", "2")[0] == 0


def test_factor(capsys, tmp_path):
    z = torus_points(1024)
    inp = write_csv(tmp_path / "g.csv", (z - 0.5) * (2 + z))
    bout = tmp_path / "b.csv"
    code, out, _ = run(capsys, "factor", "--input", inp, "--blaschke-out", str(bout))
    assert code == 0
    d = json.loads(out)
    assert d["winding_number"] == 1
    assert abs(d["zero_estimates"][0]["re"] - 0.5) < 1e-8
    assert bout.read_text().startswith("index,re,im\n")


def test_mt_dyadic(capsys, tmp_path, frozen):
    inp = write_csv(tmp_path / "z.csv", torus_points(4096))
    code, out, _ = run(capsys, "mt", "--input", inp, "--preset", "dyadic", "--n-max", "1")
    assert code == 0
    c = json.loads(out)["coefficients"]
    assert abs(c[0]["re"] - frozen["mt"]["z_against_phi0_half"]) < 1e-12


def test_mt_real_signal_lift(capsys, tmp_path):
    # cos lifts to z
    inp = write_csv(tmp_path / "c.csv", torus_points(4096).real, with_im=False)
    code, out, _ = run(capsys, "mt", "--input", inp, "--preset", "dyadic", "--n-max", "1")
    assert code == 0
    c = json.loads(out)["coefficients"]
    assert abs(c[0]["re"] - np.sqrt(0.75) * 0.5) < 1e-12


def test_mt_zeros_file(capsys, tmp_path):
    inp = write_csv(tmp_path / "z.csv", torus_points(256))
    zf = tmp_path / "zeros.json"
    zf.write_text(json.dumps({"zeros": [{"re": 0, "im": 0}, {"re": 0.2, "im": 0.1}]}))
    code, out, _ = run(capsys, "mt", "--input", inp, "--zeros-file", str(zf))
    assert code == 0
    c = json.loads(out)["coefficients"]
    assert abs(c[0]["re"]) < 1e-14
    zf.write_text(json.dumps({"zeros": [{"im": 0.1}]}))
    code, _, err = run(capsys, "mt", "--input", inp, "--zeros-file", str(zf))
    assert code == 2 and "zeros[0]" in err


def test_fixed_points(capsys):
    code, out, _ = run(capsys, "fixed-points", "--a-re", "0")
    assert code == 0
    d = json.loads(out)
    assert d["Q"] == -1
    zs = sorted(complex(p["z"]["re"], p["z"]["im"]).real for p in d["fixed_points"])
    assert np.allclose(zs, [0, 1], atol=1e-12)
    assert run(capsys, "fixed-points", "--a-re", "1.5")[0] == 2


def test_curves(capsys):
    code, out, _ = run(capsys, "curves", "cardioid", "--samples", "16")
    assert code == 0 and out.count("\n") == 17
    code, out, _ = run(capsys, "curves", "bounds", "--a-modulus", "0.5", "--k", "1",
                       "--samples", "5")
    assert code == 0 and out.startswith("t,g,h\n")
    assert run(capsys, "curves", "bounds")[0] == 2


def test_wavelet(capsys):
    code, out, _ = run(capsys, "wavelet", "--n", "0", "--j", "1", "--samples", "9")
    assert code == 0 and out.startswith("x,re,im\n") and out.count("\n") == 10


def test_iterate(capsys, tmp_path):
    bf = tmp_path / "b.json"
    bf.write_text(json.dumps({"nu": 1, "zeros": [{"re": 0.5, "im": 0}]}))
    code, out, _ = run(capsys, "iterate", "--blaschke-file", str(bf), "--times", "3")
    assert code == 0
    d = json.loads(out)
    assert d["nu"] + sum(e["mult"] for e in d["zeros"]) == 8
    assert run(capsys, "iterate", "--blaschke-file", str(bf), "--times", "20")[0] == 2


def test_render(capsys, tmp_path):
    out = tmp_path / "r.ppm"
    args = ["render", "--preset", "fig2", "--iterate", "2", "--mode", "neglog", "--width", "32",
            "--height", "16", "--out", str(out)]
    assert run(capsys, *args)[0] == 0
    first = out.read_bytes()
    assert run(capsys, *args)[0] == 0
    assert out.read_bytes() == first and first.startswith(b"P6\n32 16\n255\n")


def test_render_validation_leaves_no_file(capsys, tmp_path):
    out = tmp_path / "r.ppm"
    assert run(capsys, "render", "--preset", "fig2", "--width", "4", "--out", str(out))[0] == 2
    assert not out.exists()
    assert run(capsys, "render", "--out", str(out))[0] == 2
    assert list(tmp_path.iterdir()) == []


def test_malformed_signal_names_field_and_line(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("index,re,im\n0,1.0,0\n1,oops,0\n2,0,0\n3,0,0\n")
    code, _, err = run(capsys, "unwind", "--input", str(p))
    assert code == 2 and "re" in err and "line 3" in err
    p.write_text("idx,re\n0,1\n")
    code, _, err = run(capsys, "unwind", "--input", str(p))
    assert code == 2 and "header" in err


def test_non_analytic_input_is_validation_error(capsys, tmp_path):
    inp = write_csv(tmp_path / "n.csv", np.conj(torus_points(64)))
    assert run(capsys, "unwind", "--input", inp)[0] == 2


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["unwind"])
    assert exc.value.code == 2
