"""Scenario configs, runner reports, exit codes and the command line."""
import json
import time
from fractions import Fraction

import pytest

from topclosure.cli import ConfigError, parse_config, run, to_json, to_table
from topclosure.cli import runner as runner_mod
from topclosure.cli.main import demo_names, demo_text, main
from topclosure.groups import SplitTorus, WeilRestriction
from topclosure.real.closure import Verdict


def cfg(text):
    return parse_config(text)


# --- parsing ------------------------------------------------------------------

def test_minimal_kronecker():
    c = cfg("kind = kronecker\ntheta = sqrt(2)\n")
    (text, theta), = c.thetas
    assert text == "sqrt(2)" and not theta.is_rational and theta.embedding == 0
    assert theta.value.field.defining_poly == (-2, 0, 1)


def test_negative_precision_names_field():
    with pytest.raises(ConfigError) as exc:
        cfg("kind = kronecker\ntheta = 1/3\nprecision = -4\n")
    (issue,) = exc.value.issues
    assert issue.path == "precision" and issue.line == 3 and issue.column == 13


def test_three_points_fixture():
    c = cfg(demo_text("torus_counterexample"))
    assert c.kind == "torus_closure" and isinstance(c.ambient, SplitTorus)
    assert c.generators == [
        (1, 2, 3),
        (Fraction(1, 2), 1, 5),
        (Fraction(1, 3), Fraction(1, 5), 1),
    ]


def test_all_errors_reported_with_positions():
    text = "kind = kronecker\nprecision = x\nwhat = 1\nno equals sign\n = 3\ntheta = cbrt(2)\nkind = dirichlet\n"
    with pytest.raises(ConfigError) as exc:
        cfg(text)
    got = [(i.line, i.path) for i in exc.value.issues]
    assert (2, "precision") in got
    assert (3, "what") in got
    assert (4, "") in got and (5, "") in got
    assert (6, "theta[0]") in got
    assert (7, "kind") in got
    assert len(got) == 6


def test_unknown_kind_and_missing_required():
    with pytest.raises(ConfigError) as exc:
        cfg("kind = nonsense\n")
    assert exc.value.issues[0].path == "kind"
    with pytest.raises(ConfigError) as exc:
        cfg("kind = nori_scan\nambient = split_torus 1\n")
    assert {i.path for i in exc.value.issues} == {"generator", "primes"}


def test_semantic_field_paths():
    text = "kind = torus_closure\nambient = split_torus 2\ngenerator = 1 2\ngenerator = 1 2 3\ngenerator = 0 1\n"
    with pytest.raises(ConfigError) as exc:
        cfg(text)
    assert [i.path for i in exc.value.issues] == ["generator[1]", "generator[2]"]


def test_key_not_allowed_for_kind():
    with pytest.raises(ConfigError) as exc:
        cfg("kind = kronecker\ntheta = 2\nprimes = 2..5\n")
    assert exc.value.issues[0].path == "primes"


def test_comments_quotes_and_ranges():
    c = cfg('# header\nkind = nori_scan   # trailing\nlabel = "a # label"\nambient = weil x^2 - 2\ngenerator = 1, 1\nprimes = 10..30\n')
    assert c.label == "a # label" and isinstance(c.ambient, WeilRestriction)
    assert c.primes == [11, 13, 17, 19, 23, 29]
    with pytest.raises(ConfigError):
        cfg("kind = nori_scan\nambient = weil x^2 - 2\ngenerator = 1 1\nprimes = 4 6\n")
    with pytest.raises(ConfigError) as exc:
        cfg('kind = kronecker\ntheta = "sqrt(2)\n')
    assert "unterminated" in exc.value.issues[0].message


def test_json_input_equivalent():
    text = cfg(demo_text("nori_sqrt2"))
    js = cfg(json.dumps({"kind": "nori_scan", "label": "units of Q(sqrt 2)", "ambient": "weil x^2 - 2",
                         "generator": [[1, 1]], "primes": "2..99", "padic_n": 64}))
    assert js.primes == text.primes and js.generators == text.generators
    with pytest.raises(ConfigError) as exc:
        cfg('{"kind": "kronecker", ')
    assert exc.value.issues[0].line == 1


def test_theta_forms():
    c = cfg("kind = kronecker\ntheta = sqrt(9)\ntheta = root(x^2 - x - 1, 1)\ntheta = -3/4\n")
    assert c.thetas[0][1].is_rational and c.thetas[0][1].value == 3
    assert c.thetas[1][1].embedding == 1
    assert c.thetas[2][1].value == Fraction(-3, 4)
    with pytest.raises(ConfigError):
        cfg("kind = kronecker\ntheta = root(x^2 + 1, 0)\n")


def test_elliptic_configs():
    c = cfg("kind = mazur_check\ncurve = 5077a\nprimes = 3\n")
    assert len(c.points) == 3
    with pytest.raises(ConfigError) as exc:
        cfg("kind = elliptic_scan\ncurve = 0 0 1 -1 0\npoint = 1 1\nprimes = 5\n")
    assert exc.value.issues[0].path == "point[0]"


# --- runner and exit codes ----------------------------------------------------------

EXIT_CASES = [
    ("kronecker", "kind = kronecker\ntheta = sqrt(3)\ntheta = 2/5\n", 0),
    ("dirichlet", "kind = dirichlet\ntheta = sqrt(2)\ncount = 5\n", 0),
    ("six_exp", "kind = six_exp\ninstances = 3\n", 0),
    ("four_exp_matrix", "kind = four_exp_matrix\nprimes = 2 3 5 7\n", 0),
    ("four_exp_zero", "kind = four_exp_matrix\nrow = 2 4\nrow = 4 16\n", 0),
    ("torus_discrete", "kind = torus_closure\nambient = split_torus 1\ngenerator = 2\n", 0),
    ("torus_conjectural", demo_text("torus_counterexample"), 2),
    ("nori_scan", "kind = nori_scan\nambient = split_torus 1\ngenerator = 2\ngenerator = 3\nprimes = 5..30\n", 0),
    ("nori_no_data", "kind = nori_scan\nambient = weil x^2 - 2\ngenerator = 1 1\nprimes = 3 5\n", 2),
    ("elliptic_scan", "kind = elliptic_scan\ncurve = 37a\nprimes = 3..13\npadic_n = 16\n", 0),
    ("structural_exact", "kind = structural_rank\nrow = 2 3\nrow = 5 7\n", 0),
    ("structural_random", "kind = structural_rank\nrow = 1 2 3\nrow = 1/2 1 5\nrow = 1/3 1/5 1\nmode = random\n", 2),
    ("mazur_check", "kind = mazur_check\ncurve = 5077a\nprimes = 5\npadic_n = 16\n", 0),
]


@pytest.mark.parametrize("name, text, code", EXIT_CASES, ids=[c[0] for c in EXIT_CASES])
def test_exit_code_contract(name, text, code):
    report = run(cfg(text))
    assert report["exit_code"] == code, report["items"]
    assert report["schema_version"] == 1 and report["tool"]["name"] == "topclosure"
    json.loads(to_json(report))
    assert to_table(report).startswith(report["label"])


def test_hard_failure_exit_code(monkeypatch):
    def boom(cfg, workers):
        raise RuntimeError("broken module")

    monkeypatch.setitem(runner_mod.RUNNERS, "kronecker", boom)
    report = run(cfg("kind = kronecker\ntheta = 2\n"))
    assert report["exit_code"] == 1 and report["items"][0]["status"] == "error"


def test_four_exp_label():
    report = run(cfg("kind = four_exp_matrix\nprimes = 2 3 5 7\n"))
    item = report["items"][0]["result"]
    assert item["label"] == "numerically nonzero; unproven in general"
    assert item["determinant_excludes_zero"] is True


def test_torus_report_contents():
    report = run(cfg(demo_text("torus_counterexample")))
    closure, structural = report["items"]
    assert closure["result"]["verdict"] == Verdict.NOT_ALGEBRAIC.value
    assert closure["result"]["confidence"] == {"kind": "conjectural_at_precision", "bits": 256}
    assert structural["result"]["s"] == 2 and structural["result"]["generic_rank"]["exact"]


def test_conjectural_claims_carry_precision():
    report = run(cfg(demo_text("torus_counterexample")))
    for it in report["items"]:
        conf = it["result"]["confidence"]
        if conf["kind"] != "exact":
            assert "bits" in conf


# --- demos, determinism and the command line -------------------------------------------

def test_demo_list():
    assert set(demo_names()) == {
        "dirichlet", "elliptic_37a", "four_exp", "kronecker", "mazur_5077a",
        "nori_sqrt2", "six_exp", "structural", "torus_counterexample",
    }


@pytest.mark.parametrize("name", demo_names())
def test_demo_parses_runs_and_is_deterministic(name):
    start = time.perf_counter()
    a = to_json(run(cfg(demo_text(name)), workers=1))
    assert time.perf_counter() - start < 60
    b = to_json(run(cfg(demo_text(name)), workers=3))
    assert a == b
    assert "timings" not in json.loads(a)


def test_nori_demo_report():
    report = run(cfg(demo_text("nori_sqrt2")))
    assert report["exit_code"] == 0
    assert report["aggregate"]["verdict"] == "constant" and report["aggregate"]["structural_rank"] == 1
    assert [it["result"]["d_p"] for it in report["items"]] == [1] * 11


def test_main_demo_json(capsys):
    assert main(["demo", "dirichlet", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [c["q"] for c in out["items"][0]["result"]["convergents"]][:5] == [1, 2, 5, 12, 29]


def test_main_run_and_out(tmp_path):
    conf = tmp_path / "s.cfg"
    conf.write_text("kind = kronecker\ntheta = 1/3\n")
    out = tmp_path / "r.json"
    assert main(["run", str(conf), "--out", str(out), "--seed", "3"]) == 0
    data = json.loads(out.read_text())
    assert data["seed"] == 3 and data["items"][0]["result"]["verdict"] == "not_dense"


def test_main_errors(tmp_path, capsys):
    conf = tmp_path / "bad.cfg"
    conf.write_text("kind = kronecker\nprecision = 0\n")
    assert main(["run", str(conf)]) == 1
    err = capsys.readouterr().err
    assert "precision" in err and "theta" in err
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1
    assert main(["demo", "nope"]) == 1


def test_main_scan_overrides_primes(capsys):
    assert main(["scan", "--primes", "100..140", "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "p=103" in out and "p=137" in out and "p=97 " not in out
    assert main(["scan", "kronecker", "--primes", "3..5"]) == 1


def test_main_overrides_precision_and_workers_env(monkeypatch, capsys):
    monkeypatch.setenv("TOPCLOSURE_WORKERS", "2")
    assert main(["demo", "kronecker", "--precision", "128"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["parameters"]["precision"] == 128


def test_timings_opt_in(capsys):
    main(["demo", "four_exp", "--timings"])
    assert "timings" in json.loads(capsys.readouterr().out)
