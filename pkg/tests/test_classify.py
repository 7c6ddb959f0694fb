import csv
import io
import json
import math

import numpy as np
import pytest
from sklearn.base import clone

from dalpha_ergodic.classify import (
    CSV_COLUMNS,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    SCHEMA_VERSION,
    ConfigError,
    ErgodicClassifier,
    ExperimentConfig,
    Verdict,
    parse_number,
    parse_symbol,
    run_classify,
    run_paper_examples,
    to_csv,
    to_json,
)
from dalpha_ergodic.zoo import phi_power_half

SMALL = dict(n_max=64, lambda_count=8, trunc=1024)


def classify(symbol, alpha, diagnostics=("pb", "cb", "ukb", "acb", "integrals"), **kw):
    cfg = ExperimentConfig(symbol, alpha, diagnostics, **{**SMALL, **kw})
    return run_classify(cfg)


def statuses(doc):
    return {k: v["status"] for k, v in doc["verdicts"].items()}


# ---------------------------------------------------------------- config


@pytest.mark.parametrize("kw", [
    dict(alpha=-1.0), dict(alpha=float("nan")), dict(alpha="x"), dict(n_max=0), dict(n_max=4),
    dict(lambda_count=0), dict(trunc=1), dict(tol=0.0), dict(seed=-1), dict(diagnostics=("bogus",)),
    dict(diagnostics=()), dict(format="xml"), dict(min_r2=2.0), dict(n_max=2.5),
])
def test_config_errors(kw):
    base = dict(symbol="builder:mz", alpha=0.5)
    with pytest.raises(ConfigError):
        ExperimentConfig(**{**base, **kw})


def test_config_normalizes_diagnostics():
    cfg = ExperimentConfig("builder:mz", 0, ("ukb", "pb"), out="x.json")
    assert cfg.diagnostics == ("pb", "ukb")
    assert isinstance(cfg.alpha, float)
    assert "out" not in cfg.as_dict()


# ---------------------------------------------------------------- symbols


def test_parse_number():
    assert parse_number("pi/2") == pytest.approx(math.pi / 2)
    assert parse_number("-sqrt(2)*cos(0)") == pytest.approx(-math.sqrt(2))
    assert parse_number("1e-3") == 1e-3
    for bad in ("__import__('os')", "x", "2**", "open(1)", "[1]"):
        with pytest.raises(ConfigError):
            parse_number(bad)


def test_parse_coeffs():
    s = parse_symbol("coeffs:[0,0;0.5,0.25;1/4]")
    np.testing.assert_allclose(s.series.coeffs, [0, 0.5 + 0.25j, 0.25])
    assert s.closed_form is None


def test_parse_builders_and_zoo():
    s = parse_symbol("builder:power_half(pi/2,2)")
    np.testing.assert_allclose(s.series.coeffs, phi_power_half(math.pi / 2, 2).coeffs)
    assert parse_symbol("zoo:mz").series.degree == 1
    c = parse_symbol("builder:cusp(pi/2)", trunc=1024, alpha=0.0)
    assert c.closed_form is not None and c.series.cap == 1023 and c.tail_mass > 0
    assert parse_symbol("zoo:cusp", trunc=1024).series.tail_flag


@pytest.mark.parametrize("spec", [
    "mz", "coeffs:0,1", "coeffs:[]", "coeffs:[1,2,3]", "zoo:assani", "zoo:nothing", "builder:foo",
    "builder:power_half(0)", "builder:power_half(1,0.5)", "builder:cusp(0)", "other:1",
])
def test_parse_symbol_errors(spec):
    with pytest.raises(ConfigError):
        parse_symbol(spec, trunc=1024)


def test_operator_example_hint():
    with pytest.raises(ConfigError, match="examples command"):
        parse_symbol("zoo:assani")


def test_cusp_needs_large_trunc():
    with pytest.raises(ConfigError):
        parse_symbol("zoo:cusp", trunc=256)


# ---------------------------------------------------------------- verdicts


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict("PB", FAILS, citations=["x"])
    with pytest.raises(ValueError):
        Verdict("PB", HOLDS)
    with pytest.raises(ValueError):
        Verdict("PB", "maybe", citations=["x"])


def test_shift_on_half_space():
    doc = classify("builder:mz", 0.5)
    st = statuses(doc)
    assert st["PB"] == FAILS and st["ACB"] == FAILS
    assert st["CB"] == st["UKB"] == st["ME"] == HOLDS
    assert doc["regime"] == "sequences" and not doc["flagged"]
    assert doc["verdicts"]["PB"]["witness"]["n"] == 64
    # the unweighted sufficient integral diverges for phi = z; it decides nothing here
    assert doc["integrals"]["cb"]["divergent"]


def test_shift_cb_fails_for_negative_alpha():
    doc = classify("builder:mz", -0.5, ("pb", "cb"))
    v = doc["verdicts"]["CB"]
    assert v["status"] == FAILS
    assert v["witness"]["test_function"] == "f=1"
    # ||M_n(M_z) 1||^2 = (n+1)^-2 sum_{k<=n} (k+1)^(3/2)
    n = v["witness"]["n"]
    ref = math.sqrt(sum((k + 1) ** 1.5 for k in range(n + 1))) / (n + 1)
    assert v["witness"]["norm"] == pytest.approx(ref, rel=1e-12)
    assert doc["verdicts"]["ME"]["status"] == FAILS


def test_contraction_holds_everywhere():
    st = statuses(classify("coeffs:[0,0;0.5,0]", 0.5))
    assert all(s == HOLDS for s in st.values())


def test_large_alpha_collapse():
    doc = classify("builder:mz", 1.0)
    st = statuses(doc)
    assert doc["regime"] == "large-alpha"
    assert st["PB"] == st["CB"] == st["UKB"] == HOLDS
    assert st["ME"] == INCONCLUSIVE
    assert doc["integrals"]["evaluated"] is False


def test_spectral_failure():
    doc = classify("coeffs:[0,0;2,0]", 0.5)
    assert doc["regime"] == "spectral"
    for p in ("PB", "CB", "UKB"):
        v = doc["verdicts"][p]
        assert v["status"] == FAILS and v["witness"]["abs_phi"] == pytest.approx(2.0, abs=1e-4)


def test_integrals_skipped_below_zero():
    doc = classify("builder:mz", -0.5, ("pb", "integrals"))
    assert doc["integrals"]["evaluated"] is False
    assert "not implemented" in doc["integrals"]["reason"]


def test_ubscm_section():
    doc = classify("builder:mz", 0.5, ("pb", "cb", "ubscm"), n_max=16)
    u = doc["ubscm"]
    assert u["n_max"] == 16 and u["test_set_size"] > 1
    assert set(u) >= {"pb", "cb"}
    assert u["pb"]["n"] == [1, 2, 4, 8, 16]


def test_report_shape_and_json_roundtrip():
    doc = classify("builder:mz", 0.5, ("pb", "cb"))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert set(doc) >= {"config", "thresholds", "symbol", "sup_norm", "sequences", "verdicts", "flags", "flagged"}
    back = json.loads(to_json(doc))
    assert back["config"]["alpha"] == 0.5
    for v in back["verdicts"].values():
        assert v["citations"]


def test_csv_layout():
    doc = classify("builder:mz", 0.5, ("pb", "ukb"))
    rows = list(csv.reader(io.StringIO(to_csv(doc))))
    assert tuple(rows[0]) == CSV_COLUMNS
    power = [r for r in rows[1:] if r[1] == ""]
    ces = [r for r in rows[1:] if r[1] != ""]
    assert len(power) == 7 and len(ces) == 7 * 8
    lams = sorted({(r[1], r[2]) for r in ces})
    assert len(lams) == 8
    assert all(abs(complex(float(a), float(b))) == pytest.approx(1.0) for a, b in lams)
    assert all(r[4] in ("0", "1") for r in rows[1:])


def test_reports_are_deterministic():
    cfg = ExperimentConfig("builder:mz", 0.5, ("pb", "cb", "acb"), **SMALL)
    assert to_json(run_classify(cfg)) == to_json(run_classify(cfg, workers=1))


def test_paper_examples_document():
    doc = run_paper_examples("assani")
    assert doc["all_passed"] and doc["schema_version"] == SCHEMA_VERSION
    assert len(doc["claims"]) == 3 and doc["table"]["rows"]
    with pytest.raises(ConfigError):
        run_paper_examples("nope")


# ---------------------------------------------------------------- estimator


def test_estimator_api():
    est = ErgodicClassifier(alpha=0.5, n_max=32, lambda_count=4, trunc=512)
    assert est.get_params()["alpha"] == 0.5
    c = clone(est).set_params(alpha=0.25)
    assert c.alpha == 0.25 and est.alpha == 0.5
    assert est.fit(["builder:mz"]) is est
    pred = est.predict(["builder:mz", "coeffs:[0,0;0.5,0]"])
    assert pred.shape == (2, 5)
    assert pred[0, 0] == FAILS and pred[1, 0] == HOLDS
    assert pred[0, 4] == "not run"


def test_estimator_validation():
    with pytest.raises(ConfigError):
        ErgodicClassifier(alpha=-2).fit()
    with pytest.raises(ConfigError):
        ErgodicClassifier().fit(["zoo:nothing"])
