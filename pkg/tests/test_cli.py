import json
import math
import os


from dyboltz.cli import main

GAP_S2 = (2.0 / 3.0) * (1.0 - 2.0 ** -1.5)


def run(tmp_path, *argv):
    os.makedirs(tmp_path, exist_ok=True)
    return main(list(argv))


def test_eigs_writes_gap(tmp_path):
    out = str(tmp_path)
    assert run(tmp_path, "eigs", "--s", "2", "--nmax", "2", "--lmax", "0",
               "--out", out) == 0
    lines = open(tmp_path / "eigs_s2_n2_l0.csv").read().strip().split("\n")
    assert lines[0] == "n,l,lambda,err,ratio_to_log_bound,asymptotic_leading"
    rows = {tuple(map(int, ln.split(",")[:2])): ln.split(",") for ln in lines[1:]}
    assert float(rows[(0, 0)][2]) == 0.0
    assert float(rows[(1, 0)][2]) == 0.0
    lam = float(rows[(2, 0)][2])
    assert abs(lam - GAP_S2) < 1e-8
    assert abs(float(rows[(2, 0)][4]) - lam / math.log(4 + math.e)) < 1e-12


def test_eigs_cache_hit_byte_identical(tmp_path):
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    cache = str(tmp_path / "cache")
    args = ["--s", "1", "--nmax", "10", "--lmax", "10", "--cache-dir", cache]
    assert run(tmp_path, "eigs", *args, "--out", out1) == 0
    assert run(tmp_path, "eigs", *args, "--out", out2) == 0
    a = open(os.path.join(out1, "eigs_s1_n10_l10.csv"), "rb").read()
    b = open(os.path.join(out2, "eigs_s1_n10_l10.csv"), "rb").read()
    assert a == b


def test_eigs_json_format(tmp_path):
    out = str(tmp_path)
    assert run(tmp_path, "eigs", "--s", "2", "--nmax", "3", "--lmax", "3",
               "--format", "json", "--out", out) == 0
    doc = json.load(open(tmp_path / "eigs_s2_n3_l3.json"))
    assert doc["columns"][2] == "lambda"
    assert len(doc["rows"]) == 16


def test_eigs_rejects_bad_s(tmp_path):
    assert run(tmp_path, "eigs", "--s", "0", "--out", str(tmp_path)) == 2
    assert run(tmp_path, "eigs", "--s", "-1", "--out", str(tmp_path)) == 2


def test_eigs_corrupt_cache_rejected(tmp_path):
    cache = tmp_path / "cache"
    args = ["--s", "2", "--nmax", "4", "--lmax", "4", "--cache-dir", str(cache)]
    assert run(tmp_path, "eigs", *args, "--out", str(tmp_path)) == 0
    cache_file = next(cache.glob("eigs-*.json"))
    doc = json.load(open(cache_file))
    doc["header"]["version"] = "f" * 16
    json.dump(doc, open(cache_file, "w"))
    assert run(tmp_path, "eigs", *args, "--out", str(tmp_path)) == 2


def test_convergence_failure_exit_code(tmp_path, capsys):
    # panel budget too small to converge: exit 3, failing mode named
    rc = run(tmp_path, "eigs", "--s", "1", "--nmax", "4", "--lmax", "0",
             "--max-panels", "2", "--out", str(tmp_path))
    assert rc == 3
    assert "(2,0)" in capsys.readouterr().err
    # tiny nodes_per_panel is a usage error, not a convergence failure
    rc = run(tmp_path, "eigs", "--s", "1", "--nodes-per-panel", "4",
             "--out", str(tmp_path))
    assert rc == 2


def test_evolve_single_mode(tmp_path):
    out = str(tmp_path)
    assert run(tmp_path, "evolve", "--s", "2", "--init", "modes:2,0,0,1,0",
               "--times", "0,1", "--norms", "l2", "--out", out) == 0
    lines = open(tmp_path / "evolve_s2.csv").read().strip().split("\n")
    assert lines[1].startswith("0.0,l2,1.0")
    t1 = float(lines[2].split(",")[2])
    assert abs(t1 - math.exp(-GAP_S2)) < 1e-10  # 0.6498820...


def test_evolve_null_mode_constant_rows(tmp_path):
    out = str(tmp_path)
    assert run(tmp_path, "evolve", "--s", "2", "--init", "modes:0,1,0,2,0",
               "--times", "0,1,5", "--norms", "l2;shubin:k=2", "--out", out) == 0
    lines = open(tmp_path / "evolve_s2.csv").read().strip().split("\n")[1:]
    by_norm = {}
    for ln in lines:
        t, norm, v = ln.split(",", 2)
        by_norm.setdefault(norm, set()).add(v)
    assert all(len(vals) == 1 for vals in by_norm.values())


def test_evolve_rejects_unknown_norm(tmp_path, capsys):
    rc = run(tmp_path, "evolve", "--s", "2", "--init", "modes:2,0,0,1,0",
             "--times", "1", "--norms", "sobolev:k=2", "--out", str(tmp_path))
    assert rc == 2
    err = capsys.readouterr().err
    assert "canonical forms" in err


def test_evolve_rejects_bad_init(tmp_path):
    rc = run(tmp_path, "evolve", "--s", "2", "--init", "garbage",
             "--times", "1", "--out", str(tmp_path))
    assert rc == 2


def test_verify_kernel_suite_passes(tmp_path, capsys):
    rc = run(tmp_path, "verify", "--suite", "kernel", "--s", "2",
             "--out", str(tmp_path))
    assert rc == 0
    doc = json.load(open(tmp_path / "verify_kernel.json"))
    assert doc["passed"] is True
    assert any(c["name"] == "gap_closed_form_s2" for c in doc["checks"])


def test_verify_spaces_suite_passes(tmp_path):
    assert run(tmp_path, "verify", "--suite", "spaces", "--s", "2",
               "--out", str(tmp_path)) == 0


def test_verify_unknown_suite_usage_error(tmp_path):
    assert run(tmp_path, "verify", "--suite", "nope", "--out", str(tmp_path)) == 2


def test_scenario_remark14(tmp_path):
    assert run(tmp_path, "scenario", "--scenario", "remark14", "--s", "1",
               "--series-n", "2000", "--times", "0.1,1.0",
               "--out", str(tmp_path)) == 0
    lines = open(tmp_path / "scenario_remark14.csv").read().strip().split("\n")
    verdicts = {ln.split(",")[0]: ln.split(",")[2] for ln in lines[1:]}
    assert verdicts["0.1"] == "divergent"
    assert verdicts["1.0"] == "convergent"


def test_scenario_example42(tmp_path):
    assert run(tmp_path, "scenario", "--scenario", "example42", "--s", "4",
               "--series-n", "2000", "--times", "1.0",
               "--out", str(tmp_path)) == 0
    lines = open(tmp_path / "scenario_example42.csv").read().strip().split("\n")[1:]
    by_norm = {ln.split(",")[1]: ln.split(",")[2] for ln in lines}
    assert by_norm["shubin:k=1"] == "convergent"
    assert by_norm["shubin:k=2"] == "divergent"


def test_scenario_example41_frontier(tmp_path):
    assert run(tmp_path, "scenario", "--scenario", "example41", "--s", "2",
               "--series-n", "2000", "--k-grid", "1,2",
               "--out", str(tmp_path)) == 0
    lines = open(tmp_path / "scenario_example41_frontier.csv").read().strip().split("\n")[1:]
    fr = {float(ln.split(",")[0]): float(ln.split(",")[1]) for ln in lines}
    assert fr[1.0] < fr[2.0]


def test_scenario_unknown_name(tmp_path):
    assert run(tmp_path, "scenario", "--scenario", "nope",
               "--out", str(tmp_path)) == 2
