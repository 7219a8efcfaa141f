import json

import pytest

from diffbasis.cli import (EXIT_BUDGET, EXIT_INCONSISTENT, EXIT_OK, EXIT_PARSE, EXIT_PROBLEM,
                           EXIT_USAGE, main)

TORIC = """\
indices: [x, y, z, w]
functions: [v]
equations:
  - v[x+7,y,z,w] - v[x,y+2,z+1,w]
  - v[x+4,y,z,w+1] - v[x,y+3,z,w]
  - v[x+3,y+1,z,w] - v[x,y,z+1,w+1]
"""

TWO = """\
indices: [x, y]
functions: [u]
equations:
  - u[x+1,y] - u[x,y]
  - u[x,y+1] - u[x,y]
targets: ["u[x+2,y+3]"]
"""

TAGGED = """\
indices: [x, y]
functions: [u]
equations:
  - Tx*u - u = r1
  - Ty*u - u = r2
"""

RECURRENCE = """\
indices: [x]
functions: [y]
equations:
  - y[x+1]*y[x] - y[x]
"""

LINE = """\
indices: [x, y]
functions: [u]
equations:
  - u[x+1,y] - u[x,y]
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="p.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv_list(out, key):
    return [ln.split(": ", 1)[1] for ln in out.splitlines() if ln.startswith(f"{key}[")]


def kv(out, key):
    for ln in out.splitlines():
        if ln.startswith(f"{key}: "):
            return ln.split(": ", 1)[1]
    raise KeyError(key)


def test_toric_basis_counts(write, capsys):
    path = write(TORIC)
    code, out, _ = run(capsys, "basis", path)
    assert code == EXIT_OK
    assert kv(out, "basis") == "5"
    assert kv(out, "division") == "janet-like"
    _, out_j, _ = run(capsys, "basis", path, "--division", "janet")
    assert kv(out_j, "basis") == "11"
    _, out_r, _ = run(capsys, "basis", path, "--reduced")
    assert sorted(kv_list(out_r, "basis")) == sorted([
        "v[x+7,y,z,w] - v[x,y+2,z+1,w]",
        "v[x+4,y,z,w+1] - v[x,y+3,z,w]",
        "v[x+3,y+1,z,w] - v[x,y,z+1,w+1]",
        "v[x,y+4,z,w] - v[x+1,y,z+1,w+2]",
    ])


def test_header_lines(write, capsys):
    _, out, _ = run(capsys, "basis", write(TWO))
    lines = out.splitlines()
    assert lines[:5] == ["command: basis", "indices: x, y", "functions: u",
                         "ranking: degrevlex top", "direction: forward"]


def test_reduce(write, capsys):
    path = write(TWO)
    code, out, _ = run(capsys, "reduce", path)
    assert code == EXIT_OK
    assert kv_list(out, "normal-form") == ["u[x,y]"]
    _, out, _ = run(capsys, "reduce", path, "--target", "3*u[x+5,y] - u[x,y+1]")
    assert kv_list(out, "normal-form") == ["u[x,y]", "2*u[x,y]"]


def test_reduce_with_relation(write, capsys):
    path = write(LINE)
    _, out, _ = run(capsys, "reduce", path, "--target", "u[x,y+4] + u[x,y+1]",
                    "--relation", "u[x, y>=3]")
    assert kv_list(out, "relations") == ["u[x, y>=3]"]
    assert kv_list(out, "normal-form") == ["u[x,y+1]"]


def test_compcond(write, capsys):
    code, out, _ = run(capsys, "compcond", write(TAGGED))
    assert code == EXIT_OK
    assert kv(out, "tags") == "r1, r2"
    cond = kv_list(out, "conditions")
    assert len(cond) == 1
    assert set(cond[0].replace(" - ", " + -").split(" + ")) in (
        {"r1[x,y+1]", "-r1[x,y]", "-r2[x+1,y]", "r2[x,y]"},
        {"-r1[x,y+1]", "r1[x,y]", "r2[x+1,y]", "-r2[x,y]"})


def test_hilbert_and_residue_basis(write, capsys):
    path = write(TORIC)
    _, out, _ = run(capsys, "hilbert", path, "--series-order", "3")
    assert kv(out, "series") == "(1 + 2*t + 3*t^2 + 4*t^3 + 3*t^4 + t^5 - t^7)/(1 - t)^2"
    assert kv(out, "expansion") == "1 + 4*t + 10*t^2 + 20*t^3 + O(t^4)"
    _, out, _ = run(capsys, "residue-basis", write(TWO, "two.yaml"))
    assert kv(out, "finite") == "yes"
    assert kv_list(out, "terms") == ["u[x,y]"]
    _, out, _ = run(capsys, "residue-basis", write(LINE, "line.yaml"), "--max-degree", "2")
    assert kv(out, "finite") == "no"
    assert kv_list(out, "cones") == ["u[x,y] {y}"]
    assert kv_list(out, "terms") == ["u[x,y]", "u[x,y+1]", "u[x,y+2]"]


def test_standard_basis(write, capsys):
    path = write(RECURRENCE)
    code, out, _ = run(capsys, "standard-basis", path, "--budget", "1")
    assert code == EXIT_BUDGET
    assert kv(out, "status") != "complete"
    assert kv_list(out, "basis")[0] == "y[x+1]*y[x] - y[x]"
    simple = write("indices: [x]\nfunctions: [y]\nequations: ['y[x+1] - y[x]^2']\n", "s.yaml")
    code, out, _ = run(capsys, "standard-basis", simple)
    assert code == EXIT_OK
    assert kv(out, "status") == "complete"


def test_convert(write, capsys):
    path = write(TWO)
    _, out, _ = run(capsys, "convert", path)
    assert kv_list(out, "operator") == ["(Tx - 1)*u", "(Ty - 1)*u"]
    _, out, _ = run(capsys, "convert", path, "--shift", "Tx^2*Ty - 1", "--function", "u")
    assert kv_list(out, "equation") == ["u[x+2,y+1] - u[x,y]"]


def test_relations_file(write, capsys, tmp_path):
    path = write(LINE)
    rel = str(tmp_path / "rel.txt")
    code, out, _ = run(capsys, "relations", path, "--relations-file", rel, "--add", "u[x>=2, y]")
    assert code == EXIT_OK
    assert kv_list(out, "relations") == ["u[x>=2, y]"]
    _, out, _ = run(capsys, "relations", path, "--relations-file", rel, "--add", "u[x, y=0]")
    assert kv_list(out, "relations") == ["u[x>=2, y]", "u[x, y=0]"]
    code, _, _ = run(capsys, "relations", path, "--relations-file", rel, "--add", "u[z, y]")
    assert code == EXIT_PARSE
    with open(rel) as fh:
        assert len(fh.read().splitlines()) == 2


def test_output_is_deterministic(write, capsys):
    path = write(TORIC)
    for fmt in ("kv", "json", "text"):
        outs = {run(capsys, "basis", path, "--format", fmt)[1] for _ in range(3)}
        assert len(outs) == 1
    data = json.loads(run(capsys, "basis", path, "--format", "json")[1])
    assert data["command"] == "basis" and len(data["basis"]) == 5


def test_backward_direction(write, capsys):
    path = write("indices: [x]\nfunctions: [u]\nequations: ['u[x-1] - 2*u[x]']\n"
                 "options: {direction: backward}\n")
    _, out, _ = run(capsys, "reduce", path, "--target", "u[x-2]")
    assert kv(out, "direction") == "backward"
    assert kv_list(out, "normal-form") == ["4*u[x]"]


@pytest.mark.parametrize("text, argv, code", [
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x+1] - ']\n", ["basis"], EXIT_PARSE),
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x-1] - u[x]']\n", ["basis"], EXIT_PARSE),
    ("indices: [x]\nequations: ['u[x+1]']\n", ["basis"], EXIT_PROBLEM),
    ("indices: [x]\nfunctions: [u]\nbogus: 1\n", ["basis"], EXIT_PROBLEM),
    ("indices: [x\n", ["basis"], EXIT_PROBLEM),
    ("indices: [x]\nfunctions: [u]\n", ["basis"], EXIT_PROBLEM),
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x+1] - u[x]', 'u[x+1] - u[x] - 1']\n",
     ["basis"], EXIT_INCONSISTENT),
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x+1]']\n", ["basis", "--budget", "3"], EXIT_USAGE),
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x+1]']\n", ["reduce"], EXIT_USAGE),
    ("indices: [x]\nfunctions: [u]\nequations: ['u[x+1]']\noptions: {division: pommaret}\n",
     ["basis"], EXIT_USAGE),
])
def test_exit_codes(write, capsys, text, argv, code):
    path = write(text)
    got, out, err = run(capsys, argv[0], path, *argv[1:])
    assert got == code, err
    assert out == ""
    assert err


def test_parse_error_message_points_at_column(write, capsys):
    path = write("indices: [x]\nfunctions: [u]\nequations: ['u[x+1] + w[x]']\n")
    code, _, err = run(capsys, "basis", path)
    assert code == EXIT_PARSE
    assert "equations[1]" in err and "column 10" in err


def test_usage_errors_exit_2(write, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", write(TWO)])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, "basis", str(tmp_path / "nope.yaml"))
    assert code == 1 and out == "" and "nope.yaml" in err


def test_trace_env_var(write, capsys, monkeypatch):
    monkeypatch.setenv("DIFFBASIS_TRACE", "2")
    import logging
    logging.getLogger().handlers.clear()
    code, out, err = run(capsys, "basis", write(TWO))
    assert code == EXIT_OK
    assert "completion stats" in err
    logging.getLogger().handlers.clear()
    logging.getLogger().setLevel(logging.WARNING)
