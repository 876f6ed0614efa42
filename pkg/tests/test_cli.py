import pytest

from acq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_builtins(capsys):
    code, out, _ = run(capsys, "builtins")
    assert code == 0
    assert out.splitlines()[0].startswith("commutative: ")
    assert "families: taft(p), z2n(n)" in out


def test_normalize(capsys):
    assert run(capsys, "normalize", "--model", "quantum_plane", "y*x")[1] == "result: q^-1*x*y\n"
    assert run(capsys, "normalize", "--model", "quaternions", "e1*e2*e1*e2")[1] == "result: -1\n"


def test_bracket_and_apply(capsys):
    code, out, _ = run(capsys, "bracket", "--model", "quantum_plane", "x*D[x]", "y*D[x]")
    assert out == "result: {x -> -y}\nbidegree: weight=0 gdeg=(-1,1)\n"
    assert run(capsys, "apply", "--model", "quantum_plane", "D[x]", "x^2*y")[1] == "result: 2*x*y\n"


def test_q_check_exit_codes(capsys):
    assert run(capsys, "q-check", "--model", "torus_action")[0] == 0
    code, out, _ = run(capsys, "q-check", "--model", "corrupted_torus_action")
    assert code == 1
    assert "residual q-check 1: [Q,Q] on u\n  2*tau*u*eta_u*eta_v" in out


def test_algebroid_commands(capsys):
    code, out, _ = run(capsys, "derived-bracket", "--model", "torus_action", "D[eta_u]", "D[eta_v]")
    assert code == 0 and out.startswith("result: 0\n")
    assert run(capsys, "anchor", "--model", "torus_action", "D[eta_u]", "u")[1] == "result: tau*u\n"
    assert run(capsys, "structure-check", "--model", "free_algebroid")[0] == 0
    assert run(capsys, "structure-check", "--model", "corrupted_torus_action")[0] == 1


def test_forms_commands(capsys):
    assert run(capsys, "forms-eval", "--model", "quantum_plane", "x*dy", "D[y]")[1] == "result: q*x\n"
    assert run(capsys, "cartan-check", "--model", "torus", "--budget", "3")[0] == 0
    assert run(capsys, "cartan-check", "--model", "quantum_plane", "x*D[x]", "y*D[y]")[0] == 0


def test_deformation_commands(capsys):
    code, out, _ = run(capsys, "mc-check", "--model", "torus_action", "Q")
    assert code == 0 and "note mc-check: Q+X certified: yes" in out
    code, out, _ = run(capsys, "symmetry-check", "--model", "torus_action", "u*D[u] + eta_u*D[eta_u]")
    assert code == 1
    code, out, _ = run(capsys, "symmetry-check", "--model", "torus_action", "Xu", "--omega", "tau^-1*D[eta_u]")
    assert code == 0 and "inner: pass" in out
    assert run(capsys, "module-check", "--model", "torus_action", "--budget", "3")[0] == 0


def test_suite_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "suite", "list", "--model", "corrupted_torus_action")
    assert out.splitlines()[0] == "default = roundtrip, q-check!fail, structure-check!fail"
    path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "suite", "run", "default", "--model", "corrupted_torus_action",
                       "--report", str(path))
    assert code == 0
    assert path.read_text() == out
    assert out.splitlines()[-2] == "result: pass"


def test_model_file(capsys, tmp_path):
    p = tmp_path / "m.acq"
    p.write_text("model m\ngrading Z^1\ngenerator x weight=0 gdeg=(1) free\nsuite default = cocycle/5, jacobi/3\n")
    assert run(capsys, "suite", "run", "default", "--model", str(p))[0] == 0


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "normalize", "--model", "quantum_plane", "x*z")
    assert code == 2 and err == "error: line 1, col 3: unknown identifier 'z'\n"
    assert run(capsys, "normalize", "--model", "nosuch", "x")[0] == 2
    p = tmp_path / "bad.acq"
    p.write_text("model bad\ngrading Z^1\ngenerator x weight=0 gdeg=(1) free\nderivation X gdeg=(0) weight=0 = x*D[zz]\n")
    code, _, err = run(capsys, "q-check", "--model", str(p))
    assert code == 2 and "line 4, col 36" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit):
        main([])
