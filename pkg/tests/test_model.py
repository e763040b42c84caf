import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_linearize

from ohk.adjunction import lift
from ohk.corpus import corpus_homs, corpus_models, mutated_models
from ohk.errors import NotPointedError, ShapeError, TheoryError
from ohk.exactlin import QQ, Matrix
from ohk.groups import cyclic
from ohk.model import ModelHom, TCoalgebraModel, check_hom, check_model, identity_hom, linearize, zero_morphism
from ohk.theory import App, Var, builtin, iter_subterms

x, y, z = Var(0), Var(1), Var(2)


def terms(ops, nvars, depth):
    leaves = st.sampled_from([Var(i) for i in range(nvars)] + [App(o, ()) for o, a in ops if a == 0])
    if depth == 0:
        return leaves

    def node(sub):
        return st.one_of(*[st.tuples(*[sub] * a).map(lambda args, o=o: App(o, tuple(args))) for o, a in ops if a])
    return st.recursive(leaves, node, max_leaves=depth + 2)


GRP_OPS = [("mul", 2), ("one", 0), ("inv", 1)]


@pytest.mark.parametrize("name", sorted(corpus_models()))
def test_corpus_models_pass(name):
    rep = check_model(corpus_models()[name])
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("name", sorted(mutated_models()))
def test_mutants_fail_with_witness(name):
    rep = check_model(mutated_models()[name])
    assert not rep.ok
    assert all(c.witness is not None for c in rep.failures())


def test_z2_bad_antipode_pinpoints_g():
    rep = check_model(mutated_models()["Z2badS"])
    assert rep.failures()[0].name.startswith("op inv") or rep.failures()[0].witness["at"] == "g"


@pytest.mark.parametrize("name", ["Z3", "S3", "Prim", "trivZ3"])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_sparse_linearize_matches_dense(name, data):
    m = corpus_models()[name]
    ops = [(o.name, o.arity) for o in m.theory.ops]
    t = data.draw(terms(ops, 2, 3))
    assert linearize(m, t, 2).matrix == dense_linearize(m, t, 2)


def test_linearized_variable_is_projection():
    m = corpus_models()["Z2"]
    l = linearize(m, y, 2).matrix
    # e_i ⊗ e_j ↦ ε(e_i) e_j
    for i, j in itertools.product(range(2), repeat=2):
        col = l.column(i * 2 + j)
        assert col == tuple(1 if k == j else 0 for k in range(2))


def test_grouplike_inputs_evaluate_like_the_group():
    s = cyclic(4)
    m = lift(s)
    t = App("mul", (x, App("inv", (y,))))
    l = linearize(m, t, 2).matrix
    for a, b in itertools.product(range(4), repeat=2):
        want = s.elements.index(s.evaluate(t, [s.elements[a], s.elements[b]]))
        assert l.column(a * 4 + b) == tuple(1 if k == want else 0 for k in range(4))


def test_op_shape_checked():
    m = corpus_models()["Z2"]
    ops = m.op_matrices
    ops["mul"] = Matrix.identity(QQ, 2)
    with pytest.raises(ShapeError):
        TCoalgebraModel(m.theory, m.carrier, ops)


def test_unpointed_theory():
    mon = builtin("Mon")
    m = lift(cyclic(2, mon))
    assert check_model(m).ok
    with pytest.raises(NotPointedError):
        zero_morphism(m, m)


@pytest.mark.parametrize("name", sorted(corpus_homs()))
def test_corpus_homs_pass(name):
    assert check_hom(corpus_homs()[name]).ok


def test_bad_hom_caught():
    m = corpus_models()
    z4, z2 = m["Z4"], m["Z2"]
    # g ↦ e, g2 ↦ g is not multiplicative
    mat = Matrix.from_columns(QQ, [(1, 0), (1, 0), (0, 1), (1, 0)], 2)
    rep = check_hom(ModelHom(z4, z2, mat, "bad"))
    assert not rep.ok and rep.get("op mul").witness is not None


def test_non_coalgebra_map_caught():
    z2 = corpus_models()["Z2"]
    # e ↦ e + g has counit 2
    mat = Matrix(QQ, [[1, 0], [1, 1]])
    rep = check_hom(ModelHom(z2, z2, mat))
    assert rep.get("counit").witness == "e"
    assert not rep.get("comultiplication").ok


def test_theory_mismatch():
    m = corpus_models()
    with pytest.raises(TheoryError):
        check_hom(ModelHom(m["Z2"], m["trivZ3"], Matrix.zeros(QQ, 3, 2)))


def test_identity_and_zero_are_homs():
    s3 = corpus_models()["S3"]
    assert check_hom(identity_hom(s3)).ok
    assert check_hom(zero_morphism(s3, corpus_models()["Z2"])).ok


def test_subterms_visited():
    t = App("mul", (x, App("inv", (y,))))
    assert len(list(iter_subterms(t))) == 4
