import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_ideal

from ohk.corpus import corpus_homs, corpus_models
from ohk.errors import PreconditionError
from ohk.exactlin import QQ, Subspace, kernel_basis
from ohk.ideals import (
    bib_span, classify, coequalizer, cokernel, factor_through, is_coideal, is_t_ideal, quotient_model,
    saturate_t_ideal,
)
from ohk.model import check_hom, check_model


def diff(m, a, b):
    i, j = m.carrier.index(a), m.carrier.index(b)
    return tuple((k == i) - (k == j) for k in range(m.dim))


def test_z4_mod_g2_saturates_to_dim_2():
    m = corpus_models()["Z4"]
    i = Subspace.span(QQ, 4, [diff(m, "e", "g2")])
    sat = saturate_t_ideal(m, i)
    assert sat.dim == 2
    q = quotient_model(m, sat)
    assert q.model.labels == ("g2", "g3")
    assert check_model(q.model).ok
    assert q.projection.verified


def test_non_coideal_refused():
    m = corpus_models()["Z3"]
    bad = Subspace.span(QQ, 3, [(1, 0, 0)])
    ok, wit = is_coideal(m, bad)
    assert not ok and wit["fails"] == "counit"
    with pytest.raises(PreconditionError):
        saturate_t_ideal(m, bad)


def test_coideal_but_not_ideal():
    m = corpus_models()["S3"]
    s = Subspace.span(QQ, 6, [diff(m, "e", "s")])
    w = classify(m, s)
    assert w.is_coideal and not w.is_t_ideal and w.witness is not None


def test_t_ideal_witness_names_op():
    m = corpus_models()["Z3"]
    s = Subspace.span(QQ, 3, [diff(m, "e", "g")])
    ok, wit = is_t_ideal(m, s)
    assert not ok and wit["op"] == "mul"


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["Z4", "Z6", "S3", "trivZ3", "braceZ6"]), st.data())
def test_saturation_is_least_closed(name, data):
    m = corpus_models()[name]
    labs = m.labels
    pairs = data.draw(st.lists(st.tuples(st.sampled_from(labs), st.sampled_from(labs)), min_size=1, max_size=2))
    gens = Subspace.span(QQ, m.dim, [diff(m, a, b) for a, b in pairs])
    sat = saturate_t_ideal(m, gens)
    assert gens <= sat
    assert is_t_ideal(m, sat)[0] and is_coideal(m, sat)[0]
    assert sat == brute_ideal(m, gens)
    # idempotent
    assert saturate_t_ideal(m, sat) == sat


def test_bib_equals_saturation_in_s3():
    m = corpus_models()["S3"]
    i = Subspace.span(QQ, 6, [diff(m, "e", "s")])
    assert bib_span(m, i) == saturate_t_ideal(m, i)


@pytest.mark.parametrize("name", sorted(corpus_homs()))
def test_cokernel_kills_image(name):
    h = corpus_homs()[name]
    q = cokernel(h)
    assert check_model(q.model).ok
    assert all(not any(q.projection.matrix.apply(v)) for v in q.generators.basis)
    assert q.model.dim == h.target.dim - q.ideal.dim


def test_cokernel_of_z3_in_s3_is_z2():
    q = cokernel(corpus_homs()["incZ3"])
    assert q.model.dim == 2


def test_coequalizer_of_equal_maps_is_identity():
    h = corpus_homs()["idS3"]
    q = coequalizer(h, h)
    assert q.model.dim == 6


def test_quotient_factorization():
    # z4z2 kills e − g2, so it factors through K[Z4]/⟨e − g2⟩ by an injective hom
    z4 = corpus_models()["Z4"]
    z4z2 = corpus_homs()["z4z2"]
    q = quotient_model(z4, saturate_t_ideal(z4, Subspace.span(QQ, 4, [diff(z4, "e", "g2")])))
    bar = factor_through(q, z4z2)
    assert check_hom(bar).ok
    assert bar.matrix @ q.projection.matrix == z4z2.matrix
    assert bar.is_injective()


def test_coequalizer_of_distinct_maps():
    from ohk.corpus import hom_from_map
    m = corpus_models()
    z2, s3 = m["Z2"], m["S3"]
    f = hom_from_map(z2, s3, {"e": "e", "g": "s"}, "f")
    g = hom_from_map(z2, s3, {"e": "e", "g": "rs"}, "g")
    q = coequalizer(f, g)
    assert q.projection.matrix @ f.matrix == q.projection.matrix @ g.matrix
    # s ~ rs forces r ~ e, leaving the sign quotient
    assert q.model.dim == 2


def test_factor_through_refuses_non_factoring_map():
    m = corpus_models()
    z4 = m["Z4"]
    q = quotient_model(z4, saturate_t_ideal(z4, Subspace.span(QQ, 4, [diff(z4, "e", "g")])))
    with pytest.raises(PreconditionError):
        factor_through(q, corpus_homs()["z4z2"])
    assert kernel_basis(q.projection.matrix).dim == 3
