import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ohk.adjunction import (
    SetModel, check_set_model, equalizer_preservation_check, grouplike_model, hom_bijection_check, lift,
)
from ohk.corpus import corpus_models, corpus_setmodels
from ohk.errors import ShapeError
from ohk.exactlin import GF
from ohk.groups import all_set_homs, cyclic, s3
from ohk.model import check_model
from ohk.theory import builtin


def test_set_model_tables_must_be_total():
    with pytest.raises(Exception):
        SetModel(builtin("Grp"), ("e",), {"mul": {}, "one": {(): "e"}, "inv": {("e",): "e"}})


def test_non_group_set_model_fails_with_env():
    g = cyclic(3)
    tables = dict(g.tables)
    tables["inv"] = {(a,): a for a in g.elements}
    rep = check_set_model(SetModel(g.theory, g.elements, tables, "bad"))
    assert not rep.ok
    assert isinstance(rep.failures()[0].witness, list)


@pytest.mark.parametrize("name", sorted(corpus_setmodels()))
def test_lift_then_grouplikes_gives_back_the_set(name):
    s = corpus_setmodels()[name]
    assert check_set_model(s).ok
    m = lift(s)
    assert check_model(m).ok
    g = grouplike_model(m)
    assert sorted(g.elements) == sorted(s.elements)
    assert g.tables == s.tables


def test_lift_over_f3():
    assert check_model(lift(s3(), GF(3))).ok


def _pairs():
    sm = corpus_setmodels()
    for a, b in itertools.product(sorted(sm), repeat=2):
        x, y = sm[a], sm[b]
        if x.theory.ops == y.theory.ops and x.size <= 6 and y.size <= 6:
            yield a, b


@pytest.mark.parametrize("a,b", list(_pairs()))
def test_hom_bijection(a, b):
    x, y = corpus_setmodels()[a], corpus_setmodels()[b]
    rep = hom_bijection_check(x, lift(y))
    assert rep.ok
    # independent count: brute force over all maps X -> Y
    assert rep.dims["set_homs"] == len(all_set_homs(x, y))


def test_known_counts():
    sm = corpus_setmodels()
    assert hom_bijection_check(sm["S3"], lift(sm["S3"])).dims["set_homs"] == 10
    assert hom_bijection_check(sm["Z4"], lift(sm["Z2"])).dims["set_homs"] == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_equalizer_preserved(n, k, data):
    f = data.draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    g = data.draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    rep = equalizer_preservation_check(f, g, k)
    assert rep.ok
    assert rep.dims["equalizer"] == sum(a == b for a, b in zip(f, g))


def test_equalizer_over_f2():
    rng = random.Random(3)
    f = [rng.randrange(3) for _ in range(5)]
    assert equalizer_preservation_check(f, f, 3, GF(2)).dims["linear"] == 5


def test_equalizer_shape_errors():
    with pytest.raises(ShapeError):
        equalizer_preservation_check([0], [0, 1], 2)
    with pytest.raises(ShapeError):
        equalizer_preservation_check([2], [0], 2)


def test_primitive_f2_has_single_grouplike_model():
    g = grouplike_model(corpus_models()["Prim"])
    assert g.size == 1
