import pytest

from ohk.errors import ParseError, TheoryError
from ohk.theory import (
    BUILTIN_NAMES, BUILTIN_TEXT, App, TheoryMorphism, Var, builtin, check_morphism, format_equation,
    parse_theory, print_theory, validate_omega_group,
)


def test_builtins_parse_and_round_trip():
    for name in BUILTIN_NAMES:
        t = builtin(name)
        again = parse_theory(print_theory(t))
        assert again.ops == t.ops
        assert [format_equation(e) for e in again.eqs] == [format_equation(e) for e in t.eqs]


def test_grp_has_seven_equations():
    # chains a = b = c expand to every pair
    assert len(builtin("Grp").eqs) == 7


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_theory("theory X\nop mul : 2\neq mul(x) = x\n")
    assert e.value.line == 3
    with pytest.raises(ParseError):
        parse_theory("theory X\nop mul : 2\neq foo(x) = x\n")


def test_terms_use_declared_arities():
    t = builtin("Grp")
    t.check_term(App("mul", (Var(0), App("inv", (Var(1),)))), 2)
    with pytest.raises(TheoryError):
        t.check_term(App("mul", (Var(0),)), 1)


def test_omega_group_conditions():
    # mul(1, 1) = 1 and inv(1) = 1 follow from the unit and inverse laws at x = 1
    assert validate_omega_group(builtin("Grp")) == {"mul": "derivable", "inv": "derivable"}
    skb = validate_omega_group(builtin("SKB"))
    assert skb["mul"] == "present" and skb["minv"] == "present"
    with pytest.raises(TheoryError):
        validate_omega_group(builtin("Mon"))


def test_grp_to_ab_morphism():
    r = TheoryMorphism.make(builtin("Grp"), builtin("Ab"))
    rep = check_morphism(r)
    assert rep.surjective
    assert [format_equation(e) for e in rep.extra] == ["mul(x, y) = mul(y, x)"]
    assert rep.identified == []


def test_skb_to_radrng_extra_axioms():
    rep = check_morphism(TheoryMorphism.make(builtin("SKB"), builtin("RadRng")))
    assert len(rep.extra) == 2


def test_morphism_arity_clash():
    with pytest.raises(TheoryError):
        check_morphism(TheoryMorphism.make(builtin("Grp"), builtin("Grp"), {"mul": "inv", "one": "one", "inv": "inv"}))


def test_builtin_text_names_match():
    assert set(BUILTIN_TEXT) == {"Mon", "Grp", "Ab", "DiGrp", "SKB", "RadRng"}
