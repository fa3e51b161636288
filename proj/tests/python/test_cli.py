import json
import os
import subprocess


def run(cli, *args, env=None, stdin=None):
    full_env = dict(os.environ)
    full_env.pop("FRAC_BACKEND", None)
    full_env.update(env or {})
    return subprocess.run([cli, *args], capture_output=True, text=True, env=full_env, input=stdin)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_apply_json(cli, tmp_path):
    src = write(tmp_path, "ones.json", json.dumps({"origin": "0", "direction": "forward", "values": [1] * 6}))
    out = run(cli, "apply", src, "--order", "1/2", "--kind", "nabla")
    assert out.returncode == 0, out.stderr
    rec = json.loads(out.stdout)
    assert rec["domain"] == "N_{0}"
    assert rec["values"][2] == "1.5"


def test_apply_round_trip(cli, tmp_path):
    src = write(tmp_path, "f.csv", "t,value\n0,1\n1,1/3\n2,-2\n3,0.25\n4,5\n")
    first = tmp_path / "sum.json"
    assert run(cli, "apply", src, "--order", "1/3", "-o", str(first)).returncode == 0
    rec = json.loads(first.read_text())
    assert rec["origin"] == "1/3"
    again = run(cli, "apply", str(first), "--order", "1/2", "--anchor", "1/3")
    assert again.returncode == 0, again.stderr
    assert json.loads(again.stdout)["origin"] == "5/6"


def test_backend_env_override(cli, tmp_path):
    src = write(tmp_path, "f.json", json.dumps({"values": [1, 1, 1, 1]}))
    exact = json.loads(run(cli, "apply", src, "--order", "1/3").stdout)
    floating = run(cli, "apply", src, "--order", "1/3", "--backend", "rational", env={"FRAC_BACKEND": "floating"})
    assert floating.returncode == 0
    values = json.loads(floating.stdout)["values"]
    assert "/" in "".join(exact["values"])
    assert all("/" not in v for v in values)
    assert run(cli, "apply", src, "--order", "1/3", env={"FRAC_BACKEND": "bogus"}).returncode == 2


def test_exit_codes(cli, tmp_path):
    src = write(tmp_path, "f.json", json.dumps({"values": [1, 2, 3, 4]}))
    assert run(cli).returncode == 2
    assert run(cli, "apply", src, "--order", "abc").returncode == 2
    assert run(cli, "apply", src, "--order", "2", "--family", "riemann", "--form", "direct").returncode == 2
    assert run(cli, "apply", write(tmp_path, "bad.json", "{"), "--order", "1/2").returncode == 2
    assert run(cli, "apply", src, "--order", "1/2", "--side", "right").returncode == 3
    assert run(cli, "theorems", "--id", "T_U1", "--length", "20", "--values", "-2..2").returncode == 4


def test_check_and_inject(cli):
    ok = run(cli, "check", "Q_SUM_DELTA", "RELATE_NABLA_LEFT", "--instances", "20", "--seed", "5")
    assert ok.returncode == 0, ok.stderr
    lines = [json.loads(l) for l in ok.stdout.splitlines()]
    assert [l["id"] for l in lines] == ["Q_SUM_DELTA", "RELATE_NABLA_LEFT"]
    assert all(l["pass"] for l in lines)
    assert lines[0]["config"]["seed"] == 5
    bad = run(cli, "check", "Q_SUM_DELTA", "--instances", "20", "--inject-error")
    assert bad.returncode == 1


def test_theorems_report(cli, tmp_path):
    report = tmp_path / "report.jsonl"
    out = run(cli, "theorems", "--id", "T_JEP1", "--length", "5", "--values", "-1,0,1", "--report", str(report))
    assert out.returncode == 0, out.stderr
    rec = json.loads(report.read_text())
    assert rec["id"] == "T_JEP1"
    assert rec["counterexamples"] == 0
    assert rec["config"]["values"] == ["-1", "0", "1"]
    violated = run(cli, "theorems", "--id", "T_JEP", "--length", "3")
    assert violated.returncode == 1


def test_thread_count_does_not_change_output(cli):
    args = ["theorems", "--id", "T_SLOV2", "--id", "T_C5", "--length", "5"]
    one = run(cli, "--threads", "1", *args)
    many = run(cli, "--threads", "4", *args)
    assert one.returncode == many.returncode == 0
    assert one.stdout == many.stdout
