import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nestcan.canalization import (
    NcDecomposition,
    PeelStep,
    Segment,
    WncCertificate,
    classify,
    format_certificate,
    format_nc,
    is_canalizing,
    nc_to_wnc,
    parse_certificate,
    parse_nc,
    recognize_nc,
    recognize_wnc,
    segments_of,
    validate_normal_form,
    verify_nc_decomposition,
    verify_wnc_certificate,
    weakly_canalizing_hyperplanes,
    wnc_normal_form,
)
from nestcan.funcspace import Hyperplane, MvFunction, MvfnParseError, ProductDomain, restrict
from nestcan.generators import GenSpec, int_range, random_nc, random_wnc

import oracles
from conftest import functions, table


def seg(k, lo, hi):
    return Segment.from_bounds(k, lo, hi)


def test_segments_of():
    assert [s.members for s in segments_of(2)] == [(0,), (1,)]
    assert [s.members for s in segments_of(3)] == [(0,), (0, 1), (2,), (1, 2)]
    assert len(segments_of(4)) == 6
    with pytest.raises(ValueError):
        segments_of(1)


@pytest.mark.parametrize("k", range(2, 8))
def test_segments_match_enumeration(k):
    assert sorted(s.members for s in segments_of(k)) == oracles.proper_segments(k)


def test_segment_must_be_proper():
    with pytest.raises(ValueError):
        Segment(3, "lower", 2)
    with pytest.raises(ValueError):
        Segment.from_bounds(4, 1, 2)


def test_is_canalizing(min3, XOR):
    c = MvFunction.constant(ProductDomain.full((2, 3)), 1)
    assert all(is_canalizing(c, Hyperplane(i + 1, a)) is None for i in range(2) for a in range(c.domain.shape[i]))
    assert is_canalizing(min3, Hyperplane(1, 0)) == 0
    assert all(is_canalizing(XOR, Hyperplane(i, a)) is None for i in (1, 2) for a in (0, 1))
    single = MvFunction(ProductDomain.full((1, 2)), (0, 1))
    with pytest.raises(ValueError):
        is_canalizing(single, Hyperplane(1, 0))


def test_weakly_canalizing_hyperplanes(AND, XOR):
    assert weakly_canalizing_hyperplanes(AND) == [(Hyperplane(1, 0), 0), (Hyperplane(2, 0), 0)]
    assert weakly_canalizing_hyperplanes(XOR) == []
    c = MvFunction.constant(ProductDomain.full((2, 2)), 4)
    assert weakly_canalizing_hyperplanes(c) == [
        (Hyperplane(i, a), 4) for i in (1, 2) for a in (0, 1)
    ]


def test_singleton_coordinates_are_never_peeled():
    f = MvFunction(ProductDomain.full((1, 2)), (3, 3))
    assert [h for h, _ in weakly_canalizing_hyperplanes(f)] == [Hyperplane(2, 0), Hyperplane(2, 1)]


def test_recognize_wnc_min(min3):
    cert = recognize_wnc(min3)
    assert cert.steps[:2] == (PeelStep(1, 0, 0), PeelStep(2, 0, 0))
    assert verify_wnc_certificate(min3, cert)
    assert recognize_wnc(min3, "exhaustive") is not None


def test_recognize_wnc_xor(XOR):
    assert recognize_wnc(XOR) is None
    assert recognize_wnc(XOR, "exhaustive") is None


@pytest.mark.parametrize("vals", list(itertools.product(range(3), repeat=3)))
def test_every_unary_z3_function_is_wnc(vals):
    f = table((3,), vals)
    cert = recognize_wnc(f)
    assert cert is not None and verify_wnc_certificate(f, cert)


def test_verify_wnc_certificate(min3, XOR):
    cert = recognize_wnc(min3)
    swapped = WncCertificate((cert.steps[1], cert.steps[0]) + cert.steps[2:], cert.final_value)
    assert verify_wnc_certificate(min3, swapped)
    assert not verify_wnc_certificate(XOR, WncCertificate((PeelStep(1, 0, 0),), 0))
    wrong_final = WncCertificate(cert.steps, cert.final_value + 1)
    assert not verify_wnc_certificate(min3, wrong_final)
    assert not verify_wnc_certificate(min3, WncCertificate(cert.steps[:-1], cert.final_value))
    # peeling a singleton coordinate is not allowed
    f = MvFunction(ProductDomain.full((1, 2)), (0, 1))
    assert not verify_wnc_certificate(f, WncCertificate((PeelStep(1, 0, 0),), 1))


def test_normal_form_examples(AND):
    ident = table((2,), [0, 1])
    nf = wnc_normal_form(ident, recognize_wnc(ident))
    assert (nf.coords, nf.values, nf.outputs) == ((1, 1), (0, 1), (0, 1))
    five = table((2,), [5, 5])
    nf = wnc_normal_form(five, recognize_wnc(five))
    assert (nf.coords, nf.values, nf.outputs) == ((1, 1), (0, 1), (5, 5))
    nf = wnc_normal_form(AND, recognize_wnc(AND))
    assert nf.K == 4
    assert all(nf.value_at(p) == v for p, v in AND.items())


def test_normal_form_rejects_bad_certificate(XOR):
    with pytest.raises(ValueError):
        wnc_normal_form(XOR, WncCertificate((), 0))


def test_validate_normal_form_detects_tampering(min3):
    nf = wnc_normal_form(min3, recognize_wnc(min3))
    assert validate_normal_form(min3, nf)
    bad = type(nf)(nf.coords, nf.values, (nf.outputs[0] + 1,) + nf.outputs[1:])
    assert not validate_normal_form(min3, bad)


def test_recognize_nc_f1_cro(f1_cro):
    dec = recognize_nc(f1_cro)
    assert dec is not None and verify_nc_decomposition(f1_cro, dec)
    # scan order picks CI first, then the lower segment {0,1} of Cro
    assert dec.order == (1, 2)
    paper = NcDecomposition((1, 2), (seg(2, 1, 1), seg(3, 2, 2)), (0, 1, 2))
    assert verify_nc_decomposition(f1_cro, paper)


def test_recognize_nc_f2_cro(f2_cro):
    dec = recognize_nc(f2_cro)
    assert dec is not None and verify_nc_decomposition(f2_cro, dec)
    alt = NcDecomposition((2, 1), (seg(3, 2, 2), seg(2, 1, 1)), (1, 0, 2))
    assert verify_nc_decomposition(f2_cro, alt)


def test_examples_not_nc(min3, max3):
    assert recognize_nc(table((3,), [0, 1, 0])) is None
    assert recognize_nc(min3) is None
    assert recognize_nc(max3) is None


def test_f_ci_is_wnc_but_not_nc(f_ci):
    # CI is irrelevant to f_CI, which rules out any NC schema
    assert recognize_wnc(f_ci) is not None
    assert recognize_nc(f_ci) is None


def test_recognize_nc_strict():
    f = table((2, 2), [0, 0, 0, Fraction(1, 2)])
    assert recognize_nc(f) is not None
    assert recognize_nc(f, strict=True) is None


def test_recognize_nc_restricted_domain_rejected(AND):
    assert recognize_nc(restrict(table((3, 2), [0, 0, 0, 1, 0, 1]), Hyperplane(1, 2))) is None


def test_verify_nc_decomposition(f1_cro, AND):
    good = NcDecomposition((1, 2), (seg(2, 1, 1), seg(3, 2, 2)), (0, 1, 2))
    assert verify_nc_decomposition(f1_cro, good)
    assert not verify_nc_decomposition(f1_cro, NcDecomposition(good.order, good.segments, (0, 1, 1)))
    assert verify_nc_decomposition(AND, NcDecomposition((1, 2), (seg(2, 0, 0), seg(2, 0, 0)), (0, 0, 1)))
    assert not verify_nc_decomposition(AND, NcDecomposition((1, 1), (seg(2, 0, 0), seg(2, 0, 0)), (0, 0, 1)))


def test_nc_to_wnc_examples(AND, f1_cro):
    ident = table((2,), [0, 1])
    cert = nc_to_wnc(ident, NcDecomposition((1,), (seg(2, 0, 0),), (0, 1)))
    assert cert == WncCertificate((PeelStep(1, 0, 0),), 1)
    cert = nc_to_wnc(AND, NcDecomposition((1, 2), (seg(2, 0, 0), seg(2, 0, 0)), (0, 0, 1)))
    assert cert == WncCertificate((PeelStep(1, 0, 0), PeelStep(2, 0, 0)), 1)
    dec = NcDecomposition((1, 2), (seg(2, 1, 1), seg(3, 2, 2)), (0, 1, 2))
    cert = nc_to_wnc(f1_cro, dec)
    assert len(cert.steps) == 3 and verify_wnc_certificate(f1_cro, cert)
    with pytest.raises(ValueError):
        nc_to_wnc(AND, NcDecomposition((1, 2), (seg(2, 1, 1), seg(2, 0, 0)), (0, 0, 1)))


def test_constants_weakly_but_not_canalizing():
    for ks in [(2,), (3, 2), (1, 4), (2, 2, 2)]:
        c = MvFunction.constant(ProductDomain.full(ks), 2)
        cls = classify(c)
        assert cls.wnc and cls.weakly_canalizing
        assert not cls.canalizing and not cls.nc


def test_degenerate_domains():
    single = MvFunction(ProductDomain.full((1, 1)), (3,))
    assert recognize_wnc(single) == WncCertificate((), 3)
    assert recognize_nc(single) is None
    nullary = MvFunction(ProductDomain.full(()), (4,))
    assert recognize_wnc(nullary) == WncCertificate((), 4)
    assert recognize_nc(nullary) is None


# -- properties against the brute-force oracles -------------------------------

small = functions(max_n=3, max_k=3, values=st.integers(0, 2))


@given(small)
def test_wnc_matches_oracle(f):
    expected = oracles.is_wnc(oracles.as_dict(f), f.domain.arity)
    for mode in ("greedy", "exhaustive"):
        cert = recognize_wnc(f, mode)
        assert (cert is not None) == expected
        if cert is not None:
            assert verify_wnc_certificate(f, cert)


@given(functions(max_n=3, max_k=3, values=st.integers(0, 1), min_k=2))
def test_nc_matches_oracle(f):
    dec = recognize_nc(f)
    assert (dec is not None) == oracles.is_nc(oracles.as_dict(f), f.domain.ranges)
    if dec is not None:
        assert verify_nc_decomposition(f, dec)
        assert verify_wnc_certificate(f, nc_to_wnc(f, dec))


@given(small)
def test_canalizing_matches_oracle(f):
    assert classify(f).canalizing == oracles.is_canalizing_anywhere(oracles.as_dict(f), f.domain.arity)


@given(small)
def test_normal_form_reproduces_every_wnc_function(f):
    cert = recognize_wnc(f)
    if cert is not None:
        nf = wnc_normal_form(f, cert)
        assert nf.K == sum(f.domain.shape)
        assert validate_normal_form(f, nf)


@given(st.integers(0, 2**32), st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_greedy_equals_exhaustive_on_small_domains(seed, ks):
    # domains of at most 81 points, fed both random WNC functions and perturbed ones
    spec = GenSpec(tuple(ks), int_range(2), "wnc", seed)
    if spec.domain.size > 81:
        return
    f, _ = random_wnc(spec)
    vals = list(f.values)
    vals[seed % len(vals)] = Fraction((seed // 7) % 3)
    for g in (f, MvFunction(f.domain, tuple(vals))):
        assert (recognize_wnc(g, "greedy") is None) == (recognize_wnc(g, "exhaustive") is None)


@given(st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_peel_order_freedom(seed, rnd):
    f, cert = random_wnc(GenSpec((3, 2, 3), int_range(2), "wnc", seed))
    steps = list(cert.steps)
    rnd.shuffle(steps)
    shuffled = WncCertificate(tuple(steps), cert.final_value)
    # a permutation is accepted exactly when each step still replays; checked by re-verification
    replay = dict(oracles.as_dict(f))
    active = [set(vs) for vs in f.domain.values]
    ok = True
    for s in steps:
        i = s.coord - 1
        on = [p for p in replay if p[i] == s.value]
        if len(active[i]) < 2 or any(replay[p] != s.constant for p in on):
            ok = False
            break
        for p in on:
            del replay[p]
        active[i].discard(s.value)
    ok = ok and list(replay.values()) == [cert.final_value]
    assert verify_wnc_certificate(f, shuffled) == ok


def test_certificate_text_roundtrip(min3):
    cert = recognize_wnc(min3)
    text = format_certificate(cert)
    assert text.splitlines()[0] == "peel 1 0 0" and text.splitlines()[-1] == "value 2"
    assert parse_certificate(text) == cert
    with pytest.raises(MvfnParseError):
        parse_certificate("peel 1 0\nvalue 1\n")
    with pytest.raises(MvfnParseError):
        parse_certificate("peel 1 0 0\n")


def test_nc_text_roundtrip(f1_cro):
    dec = NcDecomposition((1, 2), (seg(2, 1, 1), seg(3, 2, 2)), (0, 1, 2))
    text = format_nc(dec)
    assert text == "nc sigma=1,2 A_1=[1..1] A_2=[2..2] c=0,1,2\n"
    assert parse_nc(text, f1_cro.domain) == dec
    with pytest.raises(MvfnParseError):
        parse_nc("nc sigma=1,2 A_1=[1..1] c=0,1,2", f1_cro.domain)
    with pytest.raises(MvfnParseError):
        parse_nc("nc sigma=1,2 A_1=[1..1] A_2=[1..1] c=0,1,2", f1_cro.domain)


@given(st.integers(0, 2**32), st.lists(st.integers(2, 4), min_size=1, max_size=3))
def test_random_nc_pipeline(seed, ks):
    f, dec = random_nc(GenSpec(tuple(ks), int_range(2), "nc", seed))
    assert verify_nc_decomposition(f, dec)
    found = recognize_nc(f)
    assert found is not None and verify_nc_decomposition(f, found)
    assert verify_wnc_certificate(f, nc_to_wnc(f, dec))
    assert recognize_wnc(f) is not None
