"""The demo term language: syntax round-trips and the rewrite passes."""

import random

import pytest

from reflectix.errors import FuelExhausted, ParseError
from reflectix.exprlang import (
    Add,
    Cst,
    Expr,
    Let,
    Neg,
    Sub,
    Var,
    abstract_constants,
    const_fold,
    constants,
    free_vars,
    height,
    parse_expr,
    print_expr,
    simplify,
    simplify_more,
)
from reflectix.uniplate import family

from conftest import gen_expr


def test_print_forms():
    e = Let("x", Cst(1), Add(Var("x"), Sub(Cst(2), Neg(Cst(3)))))
    assert (
        print_expr(e)
        == "(let x (cst 1) (add (var x) (sub (cst 2) (neg (cst 3)))))"
    )


def test_parse_inverts_print_on_samples():
    rng = random.Random(21)
    for _ in range(150):
        e = gen_expr(rng, 5)
        assert parse_expr(print_expr(e)) == e


def test_parse_tolerates_whitespace():
    assert parse_expr("  ( add ( cst 1 )\n\t( cst 2 ) )  ") == Add(
        Cst(1), Cst(2)
    )


def test_parse_negative_constant():
    assert parse_expr("(cst -5)") == Cst(-5)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("(add (cst 1)\n(bogus))", 2, 7),
        ("(cst x)", 1, 6),
        ("(add (cst 1))", 1, 13),
        ("(cst 1) x", 1, 9),
        ("", 1, 1),
        ("(", 1, 2),
        ("(let 1 (cst 1) (cst 2))", 1, 6),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as e:
        parse_expr(text)
    assert (e.value.line, e.value.column) == (line, column)


def test_simplify_cancels_double_negation():
    assert simplify(Neg(Neg(Var("x")))) == Var("x")
    assert simplify(Neg(Neg(Neg(Var("x"))))) == Neg(Var("x"))
    assert simplify(Add(Neg(Neg(Cst(1))), Cst(2))) == Add(Cst(1), Cst(2))
    # no redex: unchanged
    e = Sub(Neg(Cst(1)), Var("y"))
    assert simplify(e) == e


def test_const_fold_evaluates_ground_operations():
    assert const_fold(Add(Cst(1), Cst(2))) == Cst(3)
    assert const_fold(Sub(Cst(5), Cst(3))) == Cst(2)
    assert const_fold(Neg(Cst(4))) == Cst(-4)
    assert const_fold(Add(Var("x"), Sub(Cst(5), Cst(3)))) == Add(
        Var("x"), Cst(2)
    )
    # bottom-up, so folding cascades in one pass
    assert const_fold(Add(Add(Cst(1), Cst(2)), Cst(3))) == Cst(6)


def test_simplify_more_normal_form():
    e = Sub(Cst(1), Sub(Cst(2), Neg(Neg(Cst(3)))))
    out = simplify_more(e)
    for sub in family(Expr, out):
        assert not isinstance(sub, Sub)
        assert not (isinstance(sub, Neg) and isinstance(sub.expr, Neg))
    assert out == Add(Cst(1), Neg(Add(Cst(2), Neg(Cst(3)))))


def test_simplify_more_fuel():
    e = Sub(Cst(1), Sub(Cst(2), Cst(3)))
    with pytest.raises(FuelExhausted):
        simplify_more(e, fuel=1)
    assert simplify_more(e, fuel=2) == Add(Cst(1), Neg(Add(Cst(2), Neg(Cst(3)))))


def test_abstract_constants_numbers_bottom_up_left_to_right():
    e = Add(Cst(5), Neg(Cst(7)))
    out, n = abstract_constants(e)
    assert out == Add(Var("x0"), Neg(Var("x1")))
    assert n == 2
    assert abstract_constants(Var("y")) == (Var("y"), 0)


def test_free_vars_scoping():
    assert free_vars(Var("a")) == ["a"]
    assert free_vars(Let("x", Cst(1), Add(Var("x"), Var("z")))) == ["z"]
    # the binder scopes over the definition too
    assert free_vars(Let("x", Var("x"), Var("y"))) == ["y"]
    # duplicates are kept, in traversal order
    assert free_vars(Add(Var("a"), Add(Var("b"), Var("a")))) == [
        "a",
        "b",
        "a",
    ]
    # shadowing inside does not leak out
    assert free_vars(Add(Var("x"), Let("x", Cst(0), Var("x")))) == ["x"]


def test_constants_in_preorder():
    assert constants(Add(Cst(1), Sub(Cst(2), Cst(3)))) == [1, 2, 3]
    assert constants(Var("v")) == []


def test_height():
    assert height(Cst(1)) == 1
    assert height(Add(Cst(1), Neg(Cst(2)))) == 3
    assert height(Let("x", Cst(1), Add(Var("x"), Cst(2)))) == 3
