import copy
import json
import re
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hnncert.certify import (
    CITED,
    COMPUTED,
    USER_ROUTE,
    audit_certificate,
    certify,
    choose_cover_degree,
    parse_certificate,
    render_certificate,
)
from hnncert.errors import UnknownFormat
from hnncert.textio import parse_presentation
from hnncert.zmaps import ZHomomorphism

BS12 = "t, a | t a t^-1 a^-2"
GENUS2 = "a, b, c, d | a b a^-1 b^-1 c d c^-1 d^-1"
TREFOIL = "x, y | x^2 y^-3"


def P(text):
    return parse_presentation(text)


def leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from leaves(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from leaves(v, path + (i,))
    else:
        yield path, obj


def corrupt(value):
    if isinstance(value, bool):
        return not value
    if value is None:
        return "0"
    try:
        return str(Fraction(value) + 1)
    except (ValueError, ZeroDivisionError):
        return value + "_x"


def set_path(obj, path, value):
    for k in path[:-1]:
        obj = obj[k]
    obj[path[-1]] = value


@pytest.fixture(scope="module")
def genus2_cert():
    return certify(P(GENUS2))


class TestExamples:
    def test_genus2(self, genus2_cert):
        c = genus2_cert
        assert c.verdict == "certified"
        assert [s.index for s in c.steps] == list(range(1, 11))
        assert c.steps[2].data["M"] == "3"
        assert c.steps[3].data["n_star"] == "2"
        assert [s.status for s in c.steps] == [COMPUTED] * 4 + [CITED] + [COMPUTED] * 2 + [CITED] * 3
        assert audit_certificate(c).verdict == "certified"

    def test_free(self):
        c = certify(P("t, a |"))
        assert c.verdict == "certified"
        assert c.steps[2].data["M"] == "0" and c.steps[3].data["n_star"] == "1"
        assert c.steps[7].status == COMPUTED and c.steps[7].data["C_trivial"] is True
        assert audit_certificate(c).ok

    def test_bs12_inconclusive(self):
        c = certify(P(BS12))
        assert c.verdict == "inconclusive"
        assert c.lower_bound == "0"
        assert len(c.steps) == 3
        assert audit_certificate(c).verdict == "inconclusive"

    def test_no_zmap(self):
        c = certify(P("a | a^2"))
        assert c.verdict == "inconclusive" and not c.steps
        assert audit_certificate(c).ok

    def test_bad_user_map_fails(self):
        c = certify(P(BS12), 1, USER_ROUTE, eps=ZHomomorphism((0, 1)))
        assert c.verdict == "failed" and c.steps[0].status == "FAILED"
        assert audit_certificate(c).verdict == "failed"

    def test_user_route_is_conditional(self):
        c = certify(P(TREFOIL), Fraction(1, 2), USER_ROUTE, user_note="hypothetical")
        assert c.conditional and c.verdict == "certified"
        assert c.reason == "conditional on user-supplied lower bound"
        assert c.to_dict()["conditional"] is True
        assert audit_certificate(c).ok


class TestDegree:
    def test_genus2_arithmetic(self):
        assert choose_cover_degree(3, 1, Fraction(2)) == 2

    @given(st.integers(0, 50), st.integers(0, 10), st.fractions(min_value=Fraction(1, 20), max_value=20))
    def test_covers_target(self, M, N, L):
        n = choose_cover_degree(M, N, L)
        assert n * L >= M + 1 and n >= N
        assert n == N or (n - 1) * L < M + 1

    @given(st.integers(0, 50), st.integers(0, 10), st.fractions(min_value=Fraction(1, 20), max_value=20),
           st.fractions(min_value=0, max_value=5))
    def test_monotone_in_L(self, M, N, L, extra):
        assert choose_cover_degree(M, N, L + extra) <= choose_cover_degree(M, N, L)

    def test_nonpositive(self):
        with pytest.raises(ValueError):
            choose_cover_degree(1, 1, Fraction(0))


def mutants(cert):
    base = cert.to_dict()
    for i, step in enumerate(base["steps"]):
        if step["status"] != COMPUTED:
            continue
        for path, value in leaves(step["data"]):
            doc = copy.deepcopy(base)
            set_path(doc["steps"][i]["data"], path, corrupt(value))
            yield step["index"], path, parse_certificate(json.dumps(doc))


@pytest.mark.parametrize("text, kwargs", [
    (GENUS2, {}),
    (TREFOIL, {"lower": Fraction(1, 2), "provenance": USER_ROUTE}),
])
def test_every_computed_datum_is_audited(text, kwargs):
    cert = certify(P(text), **kwargs)
    assert audit_certificate(cert).ok
    count = 0
    for idx, path, bad in mutants(cert):
        count += 1
        assert audit_certificate(bad).verdict == "failed", (idx, path)
    assert count > 20


def test_other_corruptions(genus2_cert):
    d = genus2_cert.to_dict()
    for mutate in (
        lambda d: d["steps"].pop(4),
        lambda d: d["steps"][8].update(status="COMPUTED"),
        lambda d: d["steps"][3].update(claim="n* = 1"),
        lambda d: d["lower_bound"].update(value="5"),
        lambda d: d["input"].update(digest="sha256:00"),
        lambda d: d.update(verdict="inconclusive"),
    ):
        doc = copy.deepcopy(d)
        mutate(doc)
        assert audit_certificate(parse_certificate(json.dumps(doc))).verdict != "certified"


class TestRender:
    def test_json_idempotent(self, genus2_cert):
        once = render_certificate(genus2_cert, "json")
        assert render_certificate(parse_certificate(once), "json") == once
        assert json.loads(once)["schema_version"] == "1"

    def test_text(self, genus2_cert):
        text = render_certificate(genus2_cert, "text")
        assert text.rstrip().endswith("CERTIFIED")
        numbered = [m.group(1) for m in map(re.compile(r"\s*(\d+)\. \[").match, text.splitlines()) if m]
        assert numbered == [str(i) for i in range(1, 11)]

    def test_inconclusive_json(self):
        doc = json.loads(render_certificate(certify(P(BS12)), "json"))
        assert doc["verdict"] == "inconclusive"

    def test_unknown_format(self, genus2_cert):
        with pytest.raises(UnknownFormat):
            render_certificate(genus2_cert, "yaml")

    def test_numbers_are_strings(self, genus2_cert):
        for _, v in leaves(genus2_cert.to_dict()):
            assert v is None or isinstance(v, (str, bool))
