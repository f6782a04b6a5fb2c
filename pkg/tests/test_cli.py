import json

import pytest

from superharm import __version__
from superharm.cli import build_parser, run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify_sl2_point(capsys):
    assert run(["verify", "sl2", "--m", "3", "--n", "1", "--deg", "6"]) == 0
    rep = _json(capsys)
    assert rep["checks"] and all(c["pass"] for c in rep["checks"])


def test_gram_spherical_predict(capsys):
    assert run(["gram", "spherical", "--m", "3", "--n", "1", "--inner", "2", "--predict", "--deg", "2"]) == 0
    assert _json(capsys)


def test_gram_fermionic_csv(capsys):
    assert run(["gram", "fermionic", "--n", "2", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert "," in out.splitlines()[0]


def test_mehler_fermionic(capsys):
    assert run(["mehler", "fermionic", "--n", "2"]) == 0
    rep = _json(capsys)
    names = [c["name"] for c in rep["checks"]]
    assert len(names) == 3 and all(c["pass"] for c in rep["checks"])


def test_fischer_at_zero_dimension_fails(capsys):
    # R^2 is harmonic when M = 0, so the decomposition is unavailable
    assert run(["verify", "fischer", "--m", "2", "--n", "1", "--deg", "2"]) == 1
    out, err = capsys.readouterr()
    assert "BadDimension" in out + err


def test_usage_errors(capsys):
    assert run(["verify", "nonsense"]) == 2
    assert run(["verify", "sl2", "--m", "3"]) == 2
    assert run([]) == 2
    capsys.readouterr()


def test_text_format_and_out_file(tmp_path, capsys):
    path = tmp_path / "rep.txt"
    assert run(["verify", "nogo", "--format", "text", "--out", str(path)]) == 0
    assert "PASS" in path.read_text()


def test_dump_harmonics(capsys):
    assert run(["dump", "harmonics", "--m", "3", "--n", "1", "--deg", "1"]) == 0
    items = _json(capsys)["items"]
    assert len(items) == 5


def test_dump_kernel_text(capsys):
    assert run(["dump", "kernel", "--m", "0", "--n", "1", "--deg", "0", "--format", "text"]) == 0
    assert "kernel=" in capsys.readouterr().out


def test_version(capsys):
    assert run(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_parser_targets():
    p = build_parser()
    args = p.parse_args(["mehler", "super", "--m", "3", "--n", "1", "--deg", "2"])
    assert (args.m, args.n, args.deg, args.jobs) == (3, 1, 2, 1)


@pytest.mark.parametrize("argv", [["verify", "appendix"], ["verify", "cartesian"],
                                  ["mehler", "classical", "--m", "3", "--deg", "2"]])
def test_quick_targets_pass(argv, capsys):
    assert run(argv) == 0
    capsys.readouterr()
