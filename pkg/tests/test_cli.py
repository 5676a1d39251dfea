import json

import pytest

from bnchain.chain_search import ChainError
from bnchain.cli import parse_chain, run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_chain_forms():
    assert str(parse_chain("tail:16,ell:9,ell:9,tail:16")) == "TCBE(16,16;2,9)"
    assert str(parse_chain("--tcbe g1=2,g2=2,n=2,t=3")) == "TCBE(2,2;2,3)"
    for bad in ["ell:3,tail:2,tail:2", "--tcbe g1=2,t=3", "--tcbe g1=2,g2=2,t=3,x=1"]:
        with pytest.raises(ChainError):
            parse_chain(bad)


def test_rho_and_eh(capsys):
    assert _run(capsys, "rho", "--g", "34", "--r", "4", "--d", "31")[1].strip() == "-1"
    code, out, _ = _run(capsys, "eh", "--g", "2", "--r", "1", "--d", "2", "--alpha", "0,1", "--format", "json")
    assert code == 0 and json.loads(out)["exists"] is False


def test_bounds(capsys):
    code, out, _ = _run(capsys, "bounds", "--g", "34", "--r", "2", "--d", "24", "--g1", "16", "--g2", "16")
    assert code == 0
    assert "existence [5, 12]" in out and "threshold 13" in out


def test_search_exit_codes(capsys):
    args = ["search", "--tcbe", "g1=2,g2=2,t=5", "--r", "1", "--d", "3", "--mode", "crude", "--criterion", "necessary"]
    code, out, err = _run(capsys, *args)
    assert code == 0 and "NotExists" in out and "took" in err
    code, out, _ = _run(capsys, "search", "--tcbe", "g1=2,g2=2,t=3", "--r", "1", "--d", "3", "--criterion", "necessary")
    assert code == 2 and "Undetermined" in out
    code, _, err = _run(capsys, "search", "--chain", "ell:3,tail:2,tail:2", "--r", "1", "--d", "3")
    assert code == 1 and "error" in err
    code, _, _ = _run(capsys, "search", "--r", "1", "--d", "3")
    assert code == 1
    code, _, _ = _run(capsys, "search", "--tcbe", "g1=2,g2=2,t=3", "--chain", "tail:2,ell:3,tail:2", "--r", "1", "--d", "3")
    assert code == 1
    assert _run(capsys, "nonsense")[0] == 1


def test_search_json_is_deterministic(capsys):
    args = ["search", "--tcbe", "g1=4,g2=3,t=5", "--r", "2", "--d", "8", "--format", "json"]
    first = _run(capsys, *args)[1]
    second = _run(capsys, *args, "--jobs", "3")[1]
    assert first == second
    payload = json.loads(first)
    assert payload["family"] == "TCBE(4,3;2,5)" and payload["verdict"] in ("exists", "not_exists", "undetermined")


def test_table34_golden(capsys, golden_dir):
    assert _run(capsys, "table34", "--format", "md")[1] == (golden_dir / "table34.md").read_text()
    assert _run(capsys, "table34", "--format", "csv")[1] == (golden_dir / "table34.csv").read_text()
    rows = json.loads(_run(capsys, "table34", "--format", "json")[1])
    assert {"locus": "M^2_{34,24}", "g1": 17, "threshold": 14}.items() <= next(
        r for r in rows if r["locus"] == "M^2_{34,24}" and r["g1"] == 17
    ).items()


def test_relations_golden(capsys, golden_dir):
    args = [
        "relations", "--g", "34", "--g1", "16", "--g2", "16",
        "--union", "16,16,11;16,16,12;17,15,12",
        "--union", "16,16,11;16,16,12;17,15,11;17,15,12",
    ]  # fmt: skip
    assert _run(capsys, *args)[1] == (golden_dir / "relations_34.txt").read_text()


def test_sweep_small(capsys):
    code, out, err = _run(capsys, "sweep", "--g-max", "8", "--r-max", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("g1,g2,r,d,rho,t")
    assert all(line.endswith(",not_exists,0") for line in lines[1:])
    assert "0 violations" in err


def test_oracle_command(capsys):
    code, out, _ = _run(capsys, "oracle", "--t", "3", "--d-max", "4", "--samples", "5", "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["ok"] is True


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "bnchain", "rho", "--g", "34", "--r", "2", "--d", "24"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "-2"
