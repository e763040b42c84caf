import pytest

from oracles import brute_hopf_kernel

from ohk.cat import (
    check_diagram, factorize, hopf_kernel, image_of_kernel_check, is_normal, newman_check, proto_terms_for,
    ssfl_reconstruct, sub_model, verify_proto_terms,
)
from ohk.corpus import corpus_homs, corpus_models, hom_from_map, s3_diagram
from ohk.errors import PreconditionError
from ohk.exactlin import QQ, Subspace
from ohk.model import check_hom, check_model


def span_of(m, labels):
    return Subspace.span(QQ, m.dim, [tuple(1 if l == lab else 0 for l in m.labels) for lab in labels])


@pytest.mark.parametrize("name", sorted(corpus_homs()))
def test_hopf_kernel_matches_dense_solve(name):
    h = corpus_homs()[name]
    kd = hopf_kernel(h)
    assert kd.hopf_kernel == brute_hopf_kernel(h)
    assert kd.certificate.ok


@pytest.mark.parametrize("name", sorted(corpus_homs()))
def test_newman(name):
    assert newman_check(corpus_homs()[name]).ok


def test_z4_to_z2_kernel_dims():
    rep = newman_check(corpus_homs()["z4z2"])
    assert (rep.dims["hopf"], rep.dims["linear"]) == (2, 2)


def test_sign_kernel_is_a3():
    m = corpus_models()["S3"]
    assert hopf_kernel(corpus_homs()["sign"]).hopf_kernel == span_of(m, ["e", "r", "r2"])


@pytest.mark.parametrize("name", sorted(corpus_homs()))
def test_factorize(name):
    h = corpus_homs()[name]
    fz = factorize(h)
    assert fz.report.ok
    assert fz.middle.dim == h.matrix.rank()
    assert check_model(fz.middle).ok


def test_sub_model_of_kernel():
    h = corpus_homs()["sign"]
    sub, inc = sub_model(h.source, hopf_kernel(h).hopf_kernel, "A3")
    assert sub.dim == 3 and check_model(sub).ok and check_hom(inc).ok


def test_sub_model_refuses_non_subcoalgebra():
    m = corpus_models()["S3"]
    s = Subspace.span(QQ, 6, [(1, 1, 0, 0, 0, 0)])
    with pytest.raises(PreconditionError):
        sub_model(m, s)


def test_normality():
    m = corpus_models()["S3"]
    assert is_normal(m, span_of(m, ["e", "r", "r2"]))[0]
    ok, rep = is_normal(m, span_of(m, ["e", "s"]))
    assert not ok and rep.failures()[0].witness == {"saturated": 5, "product": 3}


def test_image_of_normal_kernel():
    m = corpus_models()["S3"]
    rep = image_of_kernel_check(m, span_of(m, ["e", "r", "r2"]), corpus_homs()["sign"])
    assert rep.ok and rep.dims["image"] == 1


@pytest.mark.parametrize("name", sorted(corpus_models()))
def test_proto_terms_everywhere(name):
    m = corpus_models()[name]
    if m.theory.omega_group is None:
        pytest.skip("no group")
    rep = verify_proto_terms(m, proto_terms_for(m.theory))
    assert rep.ok
    if m.dim ** 4 <= 4096:
        assert rep.get("beta: explicit composite = id⊗ε").ok


@pytest.mark.parametrize("conj", [False, True])
def test_ssfl(conj):
    d = s3_diagram(conj)
    assert check_diagram(d).ok
    gp, rep = ssfl_reconstruct(d, proto_terms_for(d.B.theory))
    assert rep.ok
    assert gp.matrix == d.g.matrix.inverse()


def test_ssfl_rejects_broken_diagram():
    d = s3_diagram()
    # still a section of p', but g∘s = s'∘h fails
    d.s2 = hom_from_map(d.C2, d.B2, {"e": "e", "g": "rs"}, "s2")
    assert not check_diagram(d).ok
    with pytest.raises(PreconditionError):
        ssfl_reconstruct(d, proto_terms_for(d.B.theory))
