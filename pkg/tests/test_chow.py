import json
from fractions import Fraction

import pytest

from qfactor.chow import (KIND_CURVE, KIND_HYPERPLANE, KIND_POINT_NODE,
                          KIND_POINT_SMOOTH, BlowupModel, ChowError,
                          MissingRelationError, RelationTable, cubic_identity,
                          cubic_model, expand, load_golden, models_from_golden,
                          parse_chow_expression, run_golden_suite,
                          solve_relation_table, surface_checks, verify_identity)


def conic_model():
    return BlowupModel("conic-2a",
                       [("h", KIND_HYPERPLANE), ("e", KIND_CURVE)],
                       ["mu", "nu"])


def test_golden_suite_all_pass():
    report = run_golden_suite()
    assert report["all_passed"]
    assert report["system"]["redundant_constraints"] >= 1
    assert len(report["identities"]) >= 9
    for item in report["identities"]:
        assert item["ok"]
        if "negative_at_sample" in item:
            assert item["negative_at_sample"]


def test_case_2a_alone_pins_its_products():
    model = conic_model()
    solved = solve_relation_table(
        [("conic-2a", "(mu*h - nu*e)^2 * (h - e)", "4*mu^2 - 4*mu*nu")],
        {"conic-2a": model})
    table = solved.tables["conic-2a"]
    assert table.product(("h", "h", "h")) == 4
    assert table.product(("e", "e", "h")) == -2
    assert table.product(("e", "e", "e")) == -2
    # cross-check against the curve-geometry count: the self-intersection
    # degree equals minus (anticanonical degree + 2*genus - 2) = -2 here
    deg, genus = 2, 1
    assert table.product(("e", "e", "e")) == -(deg + 2 * genus - 2)


def test_node_blowup_cube_is_two():
    data = load_golden()
    models = models_from_golden(data)
    idents = [(i["model"], i["expr"], i["expected"]) for i in data["identities"]]
    solved = solve_relation_table(idents, models)
    assert solved.tables["conic-2b-node"].product(("e0", "e0", "e0")) == 2
    assert solved.tables["conic-2b-smooth"].product(("e0", "e0", "e0")) == 1
    assert solved.redundant


def test_expand_trivial_cube():
    model = conic_model()
    table = RelationTable(model, {("h", "h", "h"): Fraction(4),
                                  ("e", "e", "h"): Fraction(-2),
                                  ("e", "e", "e"): Fraction(-2),
                                  ("e", "h", "h"): Fraction(0)})
    out = expand(parse_chow_expression("(mu*h)^3", model), table)
    assert out == parse_chow_expression("4*mu^3", model)


def test_expand_is_linear():
    model = conic_model()
    table = RelationTable(model, {("h", "h", "h"): Fraction(4),
                                  ("e", "e", "h"): Fraction(-2),
                                  ("e", "e", "e"): Fraction(-2),
                                  ("e", "h", "h"): Fraction(0)})
    X = parse_chow_expression("(mu*h - nu*e)^2 * (h - e)", model)
    Y = parse_chow_expression("(mu*h)^2 * h", model)
    a, b = Fraction(3, 2), Fraction(-5)
    combo = X.scale(a) + Y.scale(b)
    assert expand(combo, table) == expand(X, table).scale(a) + expand(Y, table).scale(b)


def test_table_is_symmetric_in_the_triple():
    model = conic_model()
    table = RelationTable(model, {("e", "e", "h"): Fraction(-2)})
    assert table.product(("h", "e", "e")) == table.product(("e", "h", "e"))


def test_missing_relation_is_named():
    model = conic_model()
    table = RelationTable(model, {("h", "h", "h"): Fraction(4)})
    with pytest.raises(MissingRelationError) as exc:
        expand(parse_chow_expression("(mu*h - nu*e)^2 * (h - e)", model), table)
    assert "e" in str(exc.value)


def test_class_degree_must_be_three():
    model = conic_model()
    table = RelationTable(model, {("h", "h", "h"): Fraction(4)})
    with pytest.raises(ChowError):
        expand(parse_chow_expression("(mu*h)^2", model), table)


def test_inconsistent_identities_detected():
    model = conic_model()
    with pytest.raises(ChowError):
        solve_relation_table(
            [("conic-2a", "(mu*h - nu*e)^2 * (h - e)", "4*mu^2 - 4*mu*nu"),
             ("conic-2a", "(mu*h - nu*e)^2 * (h - e)", "4*mu^2 - 5*mu*nu")],
            {"conic-2a": model})


def test_underdetermined_system_reported():
    # one equation constraining two unknowns only in combination
    model = conic_model()
    with pytest.raises(ChowError) as exc:
        solve_relation_table(
            [("conic-2a", "(nu*e)^2 * (h - e)", "0")], {"conic-2a": model})
    assert "pin down" in str(exc.value)


def test_unused_triples_stay_absent_not_guessed():
    model = conic_model()
    solved = solve_relation_table(
        [("conic-2a", "(mu*h)^2 * h", "4*mu^2")], {"conic-2a": model})
    table = solved.tables["conic-2a"]
    assert table.product(("h", "h", "h")) == 4
    with pytest.raises(MissingRelationError):
        table.product(("e", "e", "e"))


def test_cubic_models_across_node_counts():
    # the displayed expansion holds for any number of nodes on the curve;
    # the solved self-intersection degree shifts with the count
    for k in range(0, 7):
        model = cubic_model(k)
        expr, expected = cubic_identity(k)
        solved = solve_relation_table([(model.tag, expr, expected)],
                                      {model.tag: model})
        table = solved.tables[model.tag]
        ok, diff = verify_identity(expr, table, expected)
        assert ok, diff.to_string(model.var_names)
        assert table.product(("e", "e", "e")) == k - 1
        assert table.product(("e", "e", "h")) == -3
        for i in range(1, k + 1):
            assert table.product((f"e{i}",) * 3) == 2


def test_verify_identity_reports_difference():
    model = conic_model()
    solved = solve_relation_table(
        [("conic-2a", "(mu*h - nu*e)^2 * (h - e)", "4*mu^2 - 4*mu*nu")],
        {"conic-2a": model})
    ok, diff = verify_identity("(mu*h - nu*e)^2 * (h - e)",
                               solved.tables["conic-2a"], "4*mu^2")
    assert not ok
    assert diff == parse_chow_expression("-4*mu*nu", model)


def test_negativity_spot_values():
    report = run_golden_suite()
    samples = {i["id"]: i.get("sample_value") for i in report["identities"]}
    assert samples["conic-2a"] == "-4/1"
    assert samples["conic-2b-smooth"] == "-8/1"
    assert samples["conic-2b-node"] == "-4/1"
    assert samples["two-lines-smooth"] == "-20/1"
    assert samples["two-lines-node"] == "-16/1"


def test_surface_pair_assertions():
    checks = surface_checks()
    assert [c["k"] for c in checks] == [0, 1, 2, 3, 4]
    assert all(c["ok"] for c in checks)
    assert checks[0]["ZpZ"] == "4/1" and checks[0]["Zp2"] == "-2/1"
    assert checks[4]["ZpZ"] == "2/1" and checks[4]["Zp2"] == "0/1"


def test_structural_zero_classification():
    model = BlowupModel(
        "m", [("h", KIND_HYPERPLANE), ("a", KIND_POINT_SMOOTH),
              ("e", KIND_CURVE), ("f", KIND_CURVE)],
        ["mu"], incidences=[("a", "e")])
    assert model.classify_triple(("h", "h", "a")) == ("zero", None)
    assert model.classify_triple(("h", "a", "a")) == ("zero", None)
    assert model.classify_triple(("h", "a", "e")) == ("zero", None)
    assert model.classify_triple(("a", "a", "e")) == ("zero", None)
    assert model.classify_triple(("e", "e", "f")) == ("zero", None)
    kind, key = model.classify_triple(("a", "e", "e"))
    assert kind == "unknown"          # incident point against curve square
    assert model.classify_triple(("a", "f", "f")) == ("zero", None)  # not incident
    assert model.classify_triple(("h", "e", "e"))[0] == "unknown"
    assert model.classify_triple(("h", "h", "h"))[0] == "unknown"
