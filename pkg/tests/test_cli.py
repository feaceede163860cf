import json
import subprocess
import sys

import pytest

from spreadlab.cli import main
from spreadlab.family import k_subsets, star
from spreadlab.serialize import dumps_family, dumps_perms, load_family, load_perms


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, json.loads(out) if out.strip() else None, json.loads(err) if err.strip() else None


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    A = k_subsets(12, 3)

    def write(name, text):
        path = d / name
        path.write_text(text)
        return str(path)

    return {
        "A12": write("a12.json", dumps_family(A)),
        "star": write("star.json", dumps_family(star(A, 1))),
        "pairs4": write("pairs4.json", dumps_family(k_subsets(4, 2))),
        "star4": write("star4.json", dumps_family(star(k_subsets(4, 2), 1))),
        "singletons": write("singletons.json", dumps_family(k_subsets(1024, 1))),
        "tri": write("tri.json", '{"n": 3, "sets": [[1, 2], [1, 3], [2, 3]]}\n'),
        "disjoint": write("disjoint.json", '{"n": 4, "sets": [[1, 2], [3, 4]]}\n'),
        "one": write("one.json", '{"n": 2, "sets": [[1]]}\n'),
        "two": write("two.json", '{"n": 2, "sets": [[2]]}\n'),
        "bad": write("bad.json", '{"n": 3,\n "sets": [[1, 2], [1, 7]]}\n'),
        "dir": d,
    }


# -- generate -------------------------------------------------------------------------


@pytest.mark.parametrize("kind,args,size,n", [
    ("ksets", ["--n", 5, "--k", 2], 10, 5),
    ("perms", ["--n", 3], 6, 9),
    ("product", ["--n", 4, "--k", 2, "--w", 2], 36, 8),
    ("cube", ["--n", 3, "--k", 2], 9, 6),
    ("fano", [], 7, 7),
])
def test_generate_sizes(capsys, kind, args, size, n):
    code = main(["generate", kind] + [str(a) for a in args])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["n"] == n and len(doc["sets"]) == size


def test_generate_perm_members_have_n_cells(capsys):
    main(["generate", "perms", "--n", "3"])
    doc = json.loads(capsys.readouterr().out)
    assert all(len(s) == 3 for s in doc["sets"])


@pytest.mark.parametrize("kind,args", [
    ("ksets", ["--n", 5, "--k", 2]),
    ("perms", ["--n", 4]),
    ("perms", ["--n", 4, "--as-perms"]),
    ("product", ["--n", 4, "--k", 2, "--w", 2]),
    ("fano", []),
])
def test_round_trip_is_byte_identical(capsys, tmp_path, kind, args):
    path = tmp_path / "f.json"
    assert main(["generate", kind, "--out", str(path)] + [str(a) for a in args]) == 0
    text = path.read_text()
    if "--as-perms" in args:
        assert dumps_perms(load_perms(str(path))) == text
    else:
        assert dumps_family(load_family(str(path))) == text


def test_generate_size_guard(capsys):
    code, _, err = run(capsys, "generate", "ksets", "--n", 60, "--k", 5)
    assert code == 1 and "force" in err["message"]


def test_generate_missing_parameter(capsys):
    code, _, err = run(capsys, "generate", "ksets", "--n", 5)
    assert code == 1 and "--k" in err["message"]


# -- analysis commands ------------------------------------------------------------------


def test_spread_command(capsys, files):
    code, rep, _ = run(capsys, "spread", "--family", files["pairs4"], "--r", 2)
    assert code == 0
    radius = rep["results"]["radius"]
    assert radius["base"] == {"num": 2, "den": 1} and radius["exponent"] == 1
    assert rep["results"]["witness"] == [1]
    assert rep["verdicts"] == {"r_spread": True}
    assert set(rep) == {"command", "config", "results", "verdicts", "version", "wall_time"}
    code, rep, _ = run(capsys, "spread", "--family", files["pairs4"], "--r", "21/10")
    assert code == 2 and rep["verdicts"]["r_spread"] is False


def test_homog_command(capsys, files):
    code, rep, _ = run(capsys, "homog", "--family", files["pairs4"], "--tau", "101/100")
    assert code == 0 and rep["verdicts"]["homogeneous"]
    assert rep["verdicts"]["radius_at_least_n_over_tau_k"]
    code, rep, _ = run(capsys, "homog", "--family", files["star4"], "--tau", "3/2")
    assert code == 2 and rep["results"]["witness"] == [1]
    code, rep, _ = run(capsys, "homog", "--family", files["star4"], "--tau", 1, "--ambient", files["pairs4"])
    assert code == 2 and rep["results"]["relative"]


def test_homog_rejects_small_tau(capsys, files):
    code, rep, err = run(capsys, "homog", "--family", files["pairs4"], "--tau", "1/2")
    assert code == 1 and rep is None and err["error"] == "ConfigError"


def test_rq_spread_command(capsys, files):
    code, rep, _ = run(capsys, "rq-spread", "--family", files["pairs4"], "--r", 2, "--q", 2)
    assert code == 0 and rep["verdicts"]["rq_spread"]
    code, rep, _ = run(capsys, "rq-spread", "--family", files["pairs4"], "--r", 3, "--q", 1)
    assert code == 2 and rep["results"]["witness"] == {"S": [], "X": [1]}


def test_regularity_command(capsys, files):
    code, rep, _ = run(capsys, "regularity", "--family", files["disjoint"], "--t", 1, "--q", 1,
                       "--eps", "1/100", "--theta", 1)
    assert code == 2 and rep["results"]["failing_condition"] == "shadow_deficit"
    code, rep, _ = run(capsys, "regularity", "--family", files["pairs4"], "--t", 1, "--q", 1,
                       "--eps", 1, "--theta", 1)
    assert code == 0 and rep["verdicts"]["regular"]
    code, _, _ = run(capsys, "regularity", "--family", files["pairs4"], "--t", 1, "--q", 1,
                     "--eps", 0, "--theta", 1)
    assert code == 1


def test_approx_star_fixture(capsys, files):
    code, rep, _ = run(capsys, "approx", "run", "--ambient", files["A12"], "--family", files["star"],
                       "--tau", "5/2", "--q", 3, "--t", 1)
    assert code == 0
    assert rep["results"]["S"] == [[1]]
    assert rep["results"]["remainder"] == []
    assert all(v is True for v in rep["verdicts"].values())
    assert set(rep["verdicts"]) == {"coverage", "homogeneity", "remainder_bound", "sizes", "S_t_intersecting"}


def test_approx_star_at_tau_two(capsys, files):
    code, rep, _ = run(capsys, "approx", "run", "--ambient", files["A12"], "--family", files["star"],
                       "--tau", 2, "--q", 3)
    assert code == 0
    assert len(rep["results"]["S"]) == 25 and rep["results"]["S"][0] == [1, 2]


def test_approx_rejects_tau_half(capsys, files):
    code, _, err = run(capsys, "approx", "run", "--ambient", files["A12"], "--family", files["star"],
                       "--tau", 0.5, "--q", 3)
    assert code == 1 and "tau" in err["message"]


def test_approx_rejects_non_subfamily(capsys, files):
    code, _, _ = run(capsys, "approx", "run", "--ambient", files["pairs4"], "--family", files["tri"],
                     "--tau", 2, "--q", 2)
    assert code == 1


def test_reduce_command(capsys, files):
    code, rep, _ = run(capsys, "reduce", "--family", files["tri"], "--t", 1)
    assert code == 0 and rep["results"]["T"] == [[1, 2], [1, 3], [2, 3]]
    code, _, _ = run(capsys, "reduce", "--family", files["disjoint"], "--t", 1)
    assert code == 1


def test_chain_command(capsys, files):
    code, rep, _ = run(capsys, "chain", "--family", files["tri"], "--ambient", files["tri"], "--t", 1, "--q", 2)
    assert code == 0
    assert rep["results"]["levels"][0]["W"] == [[1, 2], [1, 3], [2, 3]]
    assert rep["results"]["final"] == []
    assert rep["verdicts"]["sunflower_free"] and rep["verdicts"]["collapse_bound"]


def test_sunflower_commands(capsys, files):
    code, rep, _ = run(capsys, "sunflower", "find", "--family", files["pairs4"], "--petals", 3)
    assert code == 0 and rep["results"]["found"] and rep["verdicts"]["valid"]
    code, rep, _ = run(capsys, "sunflower", "find", "--family", files["tri"], "--petals", 3)
    assert code == 0 and rep["results"]["found"] is False
    code, rep, _ = run(capsys, "sunflower", "thresholds", "--k", 2, "--petals", 3)
    assert code == 0 and rep["results"]["erdos_rado"] == 8


def test_mc_spread_lemma_singletons(capsys, files):
    code, rep, _ = run(capsys, "mc", "spread-lemma", "--family", files["singletons"], "--m", 2,
                       "--delta", "1/4", "--trials", 20000, "--seed", 1)
    assert code == 0 and rep["verdicts"]["spread_lemma"] is True
    assert rep["results"]["bound"] == pytest.approx(0.609375)


def test_mc_containment(capsys, files):
    code, rep, _ = run(capsys, "mc", "containment", "--family", files["one"], "--p", "1/2",
                       "--trials", 4000, "--seed", 3)
    assert code == 0 and abs(rep["results"]["estimate"] - 0.5) <= 3 * rep["results"]["stderr"]
    code, _, _ = run(capsys, "mc", "containment", "--family", files["one"], "--p", 2,
                     "--trials", 10, "--seed", 3)
    assert code == 1


def test_pair_color(capsys, files):
    code, rep, _ = run(capsys, "pair-color", "--family1", files["one"], "--family2", files["two"],
                       "--trials", 50, "--seed", 2)
    assert code == 0 and rep["results"]["found"] and rep["verdicts"]["disjoint"]


def test_oracle_commands(capsys, files):
    code, rep, _ = run(capsys, "oracle", "max-intersecting", "--ambient", "perms", "--n", 4, "--t", 1)
    assert code == 0 and rep["results"]["optimum"] == 6 and rep["results"]["matches_reference"]
    assert len(rep["results"]["witness"]["perms"]) == 6
    code, rep, _ = run(capsys, "oracle", "max-avoiding", "--n", 5, "--k", 2, "--t", 1)
    assert code == 0 and rep["results"]["optimum"] == 4
    code, rep, _ = run(capsys, "oracle", "regular", "--n", 7, "--k", 3)
    assert code == 0 and rep["results"]["optimum"] == 7
    code, rep, _ = run(capsys, "oracle", "trivial", "--family", files["star4"], "--t", 1)
    assert code == 0 and rep["results"]["core"] == [1]
    code, rep, _ = run(capsys, "oracle", "hilton-milner", "--n", 4, "--t", 2)
    assert code == 0 and rep["results"]["size"] == 3
    code, rep, _ = run(capsys, "oracle", "hilton-milner", "--n", 4, "--t", 1)
    assert code == 2 and rep["verdicts"]["non_trivial"] is False


def test_oracle_perm_cap(capsys):
    code, _, err = run(capsys, "oracle", "max-intersecting", "--ambient", "perms", "--n", 6, "--t", 1)
    assert code == 1 and "max-perm-n" in err["message"]


def test_perm_classes(capsys):
    code, rep, _ = run(capsys, "perm-classes", "--n", 5, "--t", 1, "--pi", "2,1,3,4,5")
    assert code == 0 and rep["results"]["total"] == 24
    code, rep, _ = run(capsys, "perm-classes", "--n", 4, "--t", 2, "--pi", "2,1,3,4")
    assert code == 2 and rep["verdicts"] == {"bound": False, "mass": True}
    code, _, _ = run(capsys, "perm-classes", "--n", 4, "--t", 2, "--pi", "1,2,4,3")
    assert code == 1


# -- plumbing ----------------------------------------------------------------------------


def test_malformed_input_has_line_and_field(capsys, files):
    code, _, err = run(capsys, "spread", "--family", files["bad"])
    assert code == 1
    assert err["line"] == 2 and err["field"] == "sets[1][1]" and err["source"] == files["bad"]


def test_missing_file(capsys, files):
    code, _, err = run(capsys, "spread", "--family", str(files["dir"] / "nope.json"))
    assert code == 1 and err is not None


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 1


def test_threads_env_overrides_flag(capsys, monkeypatch):
    monkeypatch.setenv("SPREADLAB_THREADS", "3")
    code, rep, _ = run(capsys, "oracle", "derangements", "--m", 4, "--threads", 1)
    assert code == 0 and rep["config"]["threads"] == 3
    monkeypatch.setenv("SPREADLAB_THREADS", "zero")
    assert run(capsys, "oracle", "derangements", "--m", 4)[0] == 1


def test_out_file_and_no_wall_time(capsys, tmp_path, files):
    out = tmp_path / "r.json"
    assert main(["spread", "--family", files["pairs4"], "--out", str(out), "--no-wall-time"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["wall_time"] is None


def test_report_is_byte_stable(tmp_path, files):
    paths = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        main(["mc", "containment", "--family", files["pairs4"], "--p", "1/3", "--trials", "5000",
              "--seed", "9", "--no-wall-time", "--out", str(p)])
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "spreadlab", "oracle", "derangements", "--m", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["count"] == 2

