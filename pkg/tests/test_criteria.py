import json

from qgs import families as F
from qgs.criteria import (
    HOLDS, INCONCLUSIVE, check_self_adjointness, check_semiboundedness, check_spectral_type,
    family_facts, summarize, verdicts_json,
)


def held(vs, claim):
    return [v for v in vs if v.claim == claim and v.status == HOLDS]


def test_example_tree_by_weighted_degree():
    vs = check_self_adjointness(F.example_tree(), 5)
    [v] = [v for v in held(vs, "SelfAdjoint") if v.rule == "bounded_weighted_degree"]
    assert v.evidence["sup_Deg"] < 4


def test_ladder_by_measure():
    vs = check_self_adjointness(F.ladder(), 6)
    [v] = [v for v in held(vs, "SelfAdjoint") if v.rule == "positive_min_measure"]
    assert v.evidence["inf_m"] >= 1
    assert not held(vs, "NotSelfAdjoint")


def test_geometric_line_not_self_adjoint():
    vs = check_self_adjointness(F.delta_line(F.geometric(0.5)), 8)
    [v] = held(vs, "NotSelfAdjoint")
    assert v.rule == "half_metric_incomplete" and v.evidence["total_length_finite"] is True
    assert not held(vs, "SelfAdjoint")


def test_ismagilov_line():
    vs = check_self_adjointness(F.delta_line(F.power(-0.5)), 8)
    assert "ismagilov" in [v.rule for v in held(vs, "SelfAdjoint")]
    # with a coupling unbounded below the metric rules cannot be carried over
    vs = check_self_adjointness(F.delta_line(F.power(-0.5), alpha=F.power(3.0, scale=-1.0)), 8)
    assert [v.rule for v in held(vs, "SelfAdjoint")] == ["ismagilov"]


def test_semibounded_examples():
    line = F.delta_line()
    assert check_semiboundedness(line).claim == "LowerSemibounded"
    assert check_semiboundedness(line).status == HOLDS
    v = check_semiboundedness(line, alpha=F.power(2.0, scale=-1.0))
    assert (v.claim, v.status) == ("NotLowerSemibounded", HOLDS)


def test_unknown_tail_is_inconclusive():
    odd = F.SeqRule("unknown", values=lambda k: (-1) ** k * k)
    assert check_semiboundedness(F.delta_line(), alpha=odd).status == INCONCLUSIVE


def test_spectral_type_rules():
    tree = F.binary_tree().with_alpha(F.power(2.0))
    ac = {v.claim: v for v in check_spectral_type(tree)}
    assert ac["AcSpectrumEmpty"].status == HOLDS

    line = F.delta_line()
    fin = F.SeqRule("constant", scale=0.0)
    same = {v.claim: v.status for v in check_spectral_type(line, alpha=fin)}
    assert same["SameEssentialSpectrum"] == same["SameAcSpectrum"] == HOLDS

    harm = {v.claim: v.status for v in check_spectral_type(line, alpha=F.harmonic())}
    assert harm["SameEssentialSpectrum"] == HOLDS
    assert harm["SameAcSpectrum"] == INCONCLUSIVE


def test_facts_are_symbolic():
    facts = family_facts(F.delta_line(F.geometric(0.5)))
    assert facts.total_length_finite is True and facts.inf_len_pos is False


def test_json_and_summary():
    vs = check_self_adjointness(F.ladder(), 4)
    doc = json.loads(verdicts_json(vs))
    assert {d["rule"] for d in doc} >= {"positive_min_measure"}
    assert summarize(vs)
