"""
Tests for the theorem catalog and its verification procedures.
"""

import pytest

from conecalc.catalog import (
    CATALOG,
    Limits,
    check_params,
    claim_cone,
    get_record,
    instances,
    list_cases,
    record_claims,
    to_json,
    verify_case,
)
from conecalc.errors import DomainError, UnknownCaseError

SMALL = Limits(max_r=6, max_e=8)

EXPECTED_IDS = [
    "chow_PE",
    "eff1_PE",
    "secant_degree",
    "cor_relation",
    "eff1_even",
    "eff1_odd",
    "eff1_curves",
    "psi_maps",
    "nef_H2",
    "S2_negative",
    "eff2_AB",
    "effW_k",
    "effY_div",
    "eff1_Y",
    "eff_conic",
    "lowdeg_Q",
    "twisted_cubic",
    "effZ",
]


def sweep_cases(limits):
    return [
        pytest.param(record.id, params, id=f"{record.id}-{'-'.join(f'{k}{v}' for k, v in params.items())}")
        for record in CATALOG
        for params in instances(record, limits)
    ]


def test_catalog_ids():
    """Records come in a fixed order with unique ids."""
    assert [record.id for record in list_cases()] == EXPECTED_IDS


@pytest.mark.parametrize("case_id, params", sweep_cases(Limits()))
def test_every_instance_passes(case_id, params):
    """Each record verifies on every instance of its full default sweep."""
    report = verify_case(case_id, params)
    assert report.checks
    assert report.passed, [f"{c.name}: expected {c.expected}, got {c.computed}" for c in report.failures()]


def test_instances_respect_caps():
    assert instances(get_record("eff1_even"), SMALL) == [{"n": 2}, {"n": 3}]
    assert instances(get_record("eff1_odd"), SMALL) == [{"n": 1}, {"n": 2}]
    assert instances(get_record("twisted_cubic"), SMALL) == [{}]
    w = instances(get_record("effW_k"), Limits(max_r=4))
    assert w == [{"r": 3, "k": 1}, {"r": 3, "k": 2}, {"r": 4, "k": 1}, {"r": 4, "k": 2}, {"r": 4, "k": 3}]
    assert len(instances(get_record("effZ"), SMALL)) == 5 * 8


def test_uncapped_declared_high():
    """d = 3..8 sweeps fully regardless of max_r."""
    assert [p["d"] for p in instances(get_record("effY_div"), Limits(max_r=3))] == list(range(3, 9))


@pytest.mark.parametrize(
    "case_id, params",
    [
        ("cor_relation", {"r": 3}),
        ("cor_relation", {}),
        ("cor_relation", {"r": 5, "n": 2}),
        ("effW_k", {"r": 5, "k": 5}),
        ("effY_div", {"d": 9}),
        ("twisted_cubic", {"r": 3}),
    ],
)
def test_check_params_rejects(case_id, params):
    with pytest.raises(DomainError):
        check_params(get_record(case_id), params)


def test_unknown_case():
    with pytest.raises(UnknownCaseError) as info:
        verify_case("eff9_nope", {})
    assert "eff9_nope" in str(info.value)


def test_record_claims():
    """Cone claims instantiate; records without claims raise."""
    claims = record_claims("eff1_even", {"n": 2})
    assert claims[0].space == "xr:4"
    assert set(claim_cone(claims[0]).rays) == {(0, 1), (3, -2)}
    with pytest.raises(DomainError):
        record_claims("secant_degree", {"n": 5})


def test_eff2_ab_claim_rays_at_n6():
    """The generators of A at n = 6 in numerical coordinates."""
    cone = claim_cone(record_claims("eff2_AB", {"n": 6})[0])
    assert set(cone.rays) == {(5, -1, -12), (1, 0, -3), (0, 1, 0), (0, 0, 1)}


def test_report_dict():
    """Reports carry checks, notes and assumptions."""
    report = verify_case("effW_k", {"r": 3, "k": 2})
    data = report.to_dict()
    assert set(data) == {"case", "params", "checks", "pass", "notes", "assumptions"}
    assert data["pass"] is True
    assert data["params"] == {"r": 3, "k": 2}
    assert set(data["checks"][0]) == {"name", "expected", "computed", "pass"}
    assert data["assumptions"]


def test_notes_mention_dropped_classes():
    """Numerically zero classes are dropped with a note."""
    report = verify_case("effW_k", {"r": 3, "k": 1})
    assert any("(H - E)^2" in note and "dropped" in note for note in report.notes)


def test_effz_full_grid():
    """d = 2..6 against e = 1..40."""
    grid = instances(get_record("effZ"), Limits(max_e=40))
    assert len(grid) == 5 * 40
    failed = [params for params in grid if not verify_case("effZ", params).passed]
    assert failed == []


def test_effz_below_degree_notes_reversal():
    report = verify_case("effZ", {"d": 4, "e": 2})
    assert report.passed
    assert any("from above" in note for note in report.notes)


def test_to_json_keys():
    records = to_json()
    assert len(records) == len(EXPECTED_IDS)
    assert set(records[0]) == {
        "id",
        "family",
        "description",
        "range",
        "params",
        "generators",
        "certificates",
        "procedure",
        "notes",
        "assumptions",
        "open_questions",
    }
    by_id = {r["id"]: r for r in records}
    assert by_id["twisted_cubic"]["range"] == "fixed instance"
    assert by_id["effW_k"]["params"] == ["r", "k"]
    assert by_id["eff1_PE"]["procedure"] == "eff1_pe"


def test_default_sweep_covers_declared_ranges():
    """The default caps reach the top of every range the records declare."""
    assert [p["n"] for p in instances(get_record("eff2_AB"))] == list(range(5, 11))
    assert [p["n"] for p in instances(get_record("S2_negative"))] == list(range(5, 11))
    w = instances(get_record("effW_k"))
    assert sorted({p["r"] for p in w}) == list(range(3, 9))
    assert {"r": 8, "k": 7} in w


@pytest.mark.parametrize("n", range(5, 10))
def test_s2_is_separated_from_effective_classes(n):
    """A test class negative on [S2] certifies that [S2] is extremal, and rejects a non-extremal class."""
    report = verify_case("S2_negative", {"n": n})
    assert report.passed
    checks = {check.name: check for check in report.checks}
    for name in (
        "test class on the basis of Num^(n-3)",
        "test class is negative on [S2] and >= 0 on the other generators",
        "[S2] spans an extremal ray",
        "[S2] + m*H^(n-3) is not extremal",
        "test class does not separate [S2] + m*H^(n-3)",
    ):
        assert checks[name].passed, name
    assert checks["test class on the basis of Num^(n-3)"].computed == f"(1, {n - 2}, 0)"
