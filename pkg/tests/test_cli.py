import json
import random

import pytest

from qpbcalc import __version__
from qpbcalc.cli import (
    SPACE_NAMES,
    cmd_coact,
    cmd_coinv,
    cmd_d,
    cmd_normalize,
    cmd_tables,
    evaluate_text,
    get_space,
    main,
    parse_expr,
    render_value,
    report_json,
    report_text,
)
from qpbcalc.config import ENV_VAR, Config, ConfigError, load_config
from qpbcalc.errors import ParseError, PresentationMismatch, UnknownSuite
from qpbcalc.smash import random_form
from qpbcalc.suites import FLAGGED, PASS, Check, Report, _random_element, run_verify


def test_parse_shapes():
    for text in ("alpha*delta - q^-1*beta*gamma", "d(alpha)", "q^(1/2) * K", "-(beta + 2)^3", "lambda^2"):
        parse_expr(text)


def test_parse_error_column():
    with pytest.raises(ParseError) as exc:
        parse_expr("alpha *")
    assert exc.value.column == 8
    assert "column 8" in str(exc.value)
    with pytest.raises(ParseError) as exc:
        parse_expr("alpha $ beta")
    assert exc.value.column == 7


def test_normalize():
    assert cmd_normalize("1", "sl2") == "1"
    assert cmd_normalize("alpha*delta - q^-1*beta*gamma", "sl2") == "1"
    assert cmd_normalize("delta*alpha", "sl2") == cmd_normalize("1 + q*beta*gamma", "sl2")
    assert cmd_normalize("lambda^2", "sl2") == cmd_normalize("q^-2 - 2 + q^2", "sl2")
    assert cmd_normalize("p*t", "p") == cmd_normalize("q*t*p", "p")


def test_unknown_identifier():
    with pytest.raises(PresentationMismatch):
        cmd_normalize("t", "sl2")
    with pytest.raises(PresentationMismatch):
        get_space("nowhere")


def test_type_errors():
    with pytest.raises(ParseError):
        cmd_normalize("w1 * w2", "sl2")
    with pytest.raises(ParseError):
        cmd_normalize("beta^-1", "sl2")


def test_d_command():
    assert cmd_d("u", "u1") == "-ainv^2 * w2"
    assert cmd_d(
        "ainv", "a1"
    ) == "(1/(1 + q)) * ainv * w1 + ainv^2 * beta * w2 + (-q/(1 + q)) * ainv * w4"
    assert cmd_d("u", "b1") == "e1"
    assert cmd_d("v", "b2") == "e1"
    assert cmd_d("3", "sl2") == "0"


def test_one_form_identity():
    # omega^2 as a combination of differentials
    assert cmd_normalize("q^-1*gamma*d(alpha) - alpha*d(gamma)", "sl2") == "w2"
    assert cmd_normalize("q*beta*d(delta) - delta*d(beta)", "sl2") == "w3"


def test_coact_command():
    assert cmd_coact("p", "p") == "t (x) p + p (x) tinv"
    assert cmd_coact("alpha", "sl2") == "alpha (x) t"
    assert cmd_coact("w2", "sl2") == "w2 (x) t^2"


def test_coinv_command():
    assert cmd_coinv("gamma*ainv", "a1", 2, 1) == "true"
    assert cmd_coinv("alpha", "a1", 2, 1) == "false"
    assert cmd_coinv(None, "a1", 2, 1).splitlines() == ["1", "ainv * gamma"]


def test_tables_command():
    out = cmd_tables("p").splitlines()
    assert "wb4 t = q^-1 * t * wb4" in out
    assert any(line.startswith("d p = ") for line in out)
    with pytest.raises(PresentationMismatch):
        cmd_tables("uq")


@pytest.mark.parametrize("space", SPACE_NAMES)
def test_render_parse_round_trip(space):
    sp = get_space(space)
    rng = random.Random(hash(space) % 1000)
    for _ in range(200):
        x = _random_element(sp.alg, rng, 3, 1)
        assert evaluate_text(render_value(x), sp) == x
    if sp.calc is not None and sp.calc.rank:
        for _ in range(20):
            w = random_form(sp.calc, rng)
            assert evaluate_text(render_value(w), sp) == w


def test_empty_report_json():
    assert report_json(Report("x", [])) == '{"suite":"x","version":"%s","checks":[]}\n' % __version__


def test_report_records():
    r = Report("x", [Check("a", PASS, "w", "deg<=2"), Check("b", FLAGGED, "reference differs")])
    body = json.loads(report_json(r))
    assert body["checks"][0] == {"anchor": "a", "status": "pass", "witness": "w", "window": "deg<=2"}
    assert body["checks"][1]["status"] == "flagged"
    assert r.ok
    text = report_text(r)
    assert text.splitlines()[1] == "config: " + Config().header()
    assert text.rstrip().endswith("1 pass, 0 fail, 1 flagged")


def test_verify_is_deterministic():
    a = report_json(run_verify("all", Config()))
    b = report_json(run_verify("all", Config()))
    assert a == b


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_verify("bogus")


def test_exit_codes(capsys):
    assert main(["normalize", "alpha*ainv", "--space", "a1"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["verify", "relations"]) == 0
    assert main(["verify", "quotient-p"]) == 1
    assert main(["verify", "bogus"]) == 2
    assert main(["normalize", "alpha *"]) == 2
    assert "column 8" in capsys.readouterr().err
    assert main(["normalize", "t"]) == 2


def test_report_to_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["report", "relations", "--output", str(out)]) == 0
    body = json.loads(out.read_text())
    assert set(body) == {"suite", "version", "checks"}
    assert body["suite"] == "relations"


def test_config_file(tmp_path, monkeypatch):
    f = tmp_path / "q.cfg"
    f.write_text("samples = 7\neval_points = 2, 7\n")
    cfg = load_config(f)
    assert cfg.samples == 7 and cfg.eval_points == (2, 7)
    monkeypatch.setenv(ENV_VAR, str(f))
    assert load_config().samples == 7
    assert load_config(overrides={"samples": 3, "seed": None}).samples == 3
    f.write_text("nonsense = 1\n")
    with pytest.raises(ConfigError):
        load_config(f)
    assert main(["verify", "relations", "--config", str(f)]) == 2
