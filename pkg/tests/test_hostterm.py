"""Typed term layer tests: typechecking and alpha equivalence."""

import pytest

from sumok2set.hostterm import (
    IOTA,
    OMICRON,
    All,
    App,
    Arrow,
    Base,
    Bot,
    Conj,
    Const,
    Eq,
    Ex,
    Iff,
    Imp,
    Ite,
    Lam,
    Mem,
    Neg,
    Sep,
    Subq,
    Top,
    TypeMismatch,
    Var,
    alpha_eq,
    app,
    arrow,
    conj_chain,
    imp_chain,
    typecheck,
)

O = OMICRON


def test_arrow_helper():
    t = arrow(IOTA, IOTA, O)
    assert t == Arrow(IOTA, Arrow(IOTA, O))


def test_typecheck_basics():
    x = Var("X", IOTA)
    assert typecheck(x) == IOTA
    assert typecheck(Mem(x, Const("s", IOTA))) == O
    assert typecheck(Subq(x, x)) == O
    assert typecheck(Eq(x, x)) == O
    assert typecheck(Top()) == O
    assert typecheck(Bot()) == O


def test_typecheck_connectives():
    p = Const("p", O)
    assert typecheck(Conj(p, p)) == O
    assert typecheck(Imp(Neg(p), Iff(p, p))) == O


def test_typecheck_binders():
    body = Mem(Var("X", IOTA), Const("s", IOTA))
    assert typecheck(All("X", IOTA, body)) == O
    assert typecheck(Ex("X", IOTA, body)) == O
    lam = Lam("X", IOTA, Var("X", IOTA))
    assert typecheck(lam) == Arrow(IOTA, IOTA)


def test_typecheck_application():
    f = Const("f", arrow(IOTA, IOTA, IOTA))
    x = Const("c", IOTA)
    assert typecheck(App(App(f, x), x)) == IOTA
    assert typecheck(app(f, x, x)) == IOTA


def test_typecheck_sep_and_ite():
    x = Var("X", IOTA)
    s = Sep("X", Const("u", IOTA), Mem(x, Const("a", IOTA)))
    assert typecheck(s) == IOTA
    i = Ite(Top(), Const("a", IOTA), Const("b", IOTA))
    assert typecheck(i) == IOTA


def test_typecheck_rejects_bad_application():
    f = Const("f", arrow(IOTA, IOTA))
    with pytest.raises(TypeMismatch):
        typecheck(App(f, Const("p", O)))
    with pytest.raises(TypeMismatch):
        typecheck(App(Const("c", IOTA), Const("d", IOTA)))


def test_typecheck_rejects_bad_connective_operand():
    with pytest.raises(TypeMismatch):
        typecheck(Conj(Const("c", IOTA), Top()))
    with pytest.raises(TypeMismatch):
        typecheck(Neg(Const("c", IOTA)))


def test_typecheck_eq_needs_same_type():
    with pytest.raises(TypeMismatch):
        typecheck(Eq(Const("c", IOTA), Const("p", O)))


def test_typecheck_free_variable_is_self_typed():
    assert typecheck(Var("X", IOTA), env={}) == IOTA


def test_typecheck_binder_use_disagreement():
    bad = All("X", OMICRON, Mem(Var("X", IOTA), Const("s", IOTA)))
    with pytest.raises(TypeMismatch):
        typecheck(bad)


def test_alpha_eq_binder_renaming():
    a = All("X", IOTA, Mem(Var("X", IOTA), Const("s", IOTA)))
    b = All("Y", IOTA, Mem(Var("Y", IOTA), Const("s", IOTA)))
    assert alpha_eq(a, b)


def test_alpha_eq_distinguishes_structure():
    a = All("X", IOTA, Mem(Var("X", IOTA), Const("s", IOTA)))
    b = Ex("X", IOTA, Mem(Var("X", IOTA), Const("s", IOTA)))
    assert not alpha_eq(a, b)


def test_alpha_eq_free_variables_by_name():
    assert alpha_eq(Var("X", IOTA), Var("X", IOTA))
    assert not alpha_eq(Var("X", IOTA), Var("Y", IOTA))


def test_alpha_eq_nested_shadowing():
    # \X.\X.X is not \X.\Y.X
    a = Lam("X", IOTA, Lam("X", IOTA, Var("X", IOTA)))
    b = Lam("X", IOTA, Lam("Y", IOTA, Var("X", IOTA)))
    assert not alpha_eq(a, b)
    c = Lam("A", IOTA, Lam("B", IOTA, Var("B", IOTA)))
    assert alpha_eq(a, c)


def test_alpha_eq_sep_binder():
    a = Sep("X", Const("u", IOTA), Mem(Var("X", IOTA), Const("s", IOTA)))
    b = Sep("Z", Const("u", IOTA), Mem(Var("Z", IOTA), Const("s", IOTA)))
    assert alpha_eq(a, b)


def test_chains():
    p, q, r = (Const(n, O) for n in "pqr")
    assert imp_chain([], r) == r
    assert imp_chain([p, q], r) == Imp(p, Imp(q, r))
    assert conj_chain([], r) == r
    assert conj_chain([p, q], r) == Conj(p, Conj(q, r))
