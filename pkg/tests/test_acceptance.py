"""Acceptance table, one criterion per test, each at its stated tolerance.

Every criterion prints a single PASS/FAIL line (also repeated in the
terminal summary).  Checks whose literal statement does not hold for the
finite truncations built here are asserted in separate strict-xfail tests,
so the criterion line still reports FAIL for them and an unexpected pass
would break the run.
"""

import functools

import pytest

from fusionkit import suite

from conftest import ACCEPTANCE_LINES

# (criterion, check name) -> why the literal check fails at this truncation level
LITERAL_FAILURES = {
    (4, "all Klein four-subgroups in one F-class"):
        "at l=3 the two Klein-four classes only merge after inclusion into level 4; "
        "fusing them at level 3 breaks axiom (I) at S",
    (9, "check_sat1 with X = {v1} passes"):
        "clause (i) fails: two classes of elements of order 3 at l=2",
    (9, "exactly one class of elements of order 3"):
        "the two order-3 classes at l=2 merge only at l=3; fusing them at l=2 breaks axiom (I) at S",
    (11, "su2: level 2 -> 3 stable"):
        "at l=2 the Sylow is Q8 = W, Aut_S(W) = Inn(W) of order 4 against |Aut_F(W)| = 24, "
        "so the level-2 system is not saturated while level 3 is",
}


@functools.lru_cache(maxsize=None)
def result(cid):
    res = suite.run_criterion(cid)
    line = suite.summary_line(res)
    ACCEPTANCE_LINES[cid] = f"{line} [{res['seconds']:.1f} s]"
    print(line)
    return res


def checks_of(cid):
    return {c["name"]: c for c in result(cid)["checks"]}


def _assert_expected_checks(cid):
    res = result(cid)
    bad = [c for c in res["checks"] if not c["pass"] and (cid, c["name"]) not in LITERAL_FAILURES]
    assert not bad, bad


@pytest.mark.parametrize("cid", sorted(suite.CRITERIA))
def test_criterion(cid):
    _assert_expected_checks(cid)
    for c in result(cid).get("supplementary", []):
        assert c["pass"], c


@pytest.mark.parametrize("cid, name", sorted(LITERAL_FAILURES), ids=lambda x: str(x))
def test_literal_check(cid, name, request):
    request.applymarker(pytest.mark.xfail(strict=True, reason=LITERAL_FAILURES[(cid, name)]))
    assert checks_of(cid)[name]["pass"]


def test_criterion_1_timing_and_coverage():
    checks = result(1)["checks"]
    assert len(checks) == len(suite.POSITIVE_SUITE) == 8
    assert all(c["detail"]["seconds"] < 60 for c in checks)


def test_criterion_2_witness_values():
    c = checks_of(2)["negative control fails axiom (I)"]
    w = c["detail"]["witness"]
    assert (w["aut_F"], w["aut_S"]) == (16, 8)


def test_criterion_3_counts():
    for label, p in suite.ORACLES:
        c = next(c for c in result(3)["checks"] if c["name"].startswith(label))
        assert c["detail"]["mismatches"] == 0 and c["detail"]["pairs"] > 0


def test_criterion_5_certificate():
    c = checks_of(5)["F/<t1> is isomorphic to so3 one level down"]
    cert = c["detail"]["certificate"]
    assert cert["found"] and cert["images"]


def test_criterion_6_witness_subgroup():
    c = checks_of(6)["so3 F_S(S) candidate fails exactly at N2 with P = Q = V"]
    assert c["detail"]["failing"] == "N2"


def test_criterion_9_values():
    c = checks_of(9)
    assert c["centralizer of <v1>: |Aut(V)| = 6 and |Aut(T)| = 6"]["detail"]["values"] == [6, 6]
    assert c["exactly one class of elements of order 3"]["detail"]["sizes"] == [62, 108]
    assert c["total < 5 min"]["pass"]


def test_criterion_10_automizers():
    c = checks_of(10)
    assert c["Sym4 fixture passes (A1)-(II)"]["detail"]["aut_V"] == 24
    assert c["binary octahedral fixture passes (A1)-(II)"]["detail"]["aut_W"] == 48
    assert "A2" in c["corrupted fixture fails (A2)"]["detail"]["failing"]


def test_acceptance_lines_printed():
    for cid in suite.CRITERIA:
        result(cid)
    assert sorted(ACCEPTANCE_LINES) == sorted(suite.CRITERIA)
    for cid in (4, 9, 11):
        assert " FAIL" in ACCEPTANCE_LINES[cid]
    for cid in (1, 2, 3, 5, 6, 7, 8, 10):
        assert " PASS" in ACCEPTANCE_LINES[cid]
