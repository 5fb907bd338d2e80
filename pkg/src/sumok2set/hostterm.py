"""Simply typed term language over sets (iota) and propositions (omicron).

Terms are immutable dataclasses with structural equality.  Membership,
subset, separation, and if-then-else are primitive constructors here; the
TH0 printer later rewrites them into applied constants.
"""

from __future__ import annotations

from dataclasses import dataclass


class HostType:
    pass


@dataclass(frozen=True)
class Base(HostType):
    tag: str  # "i" or "o"

    def __repr__(self) -> str:
        return "$" + self.tag


@dataclass(frozen=True)
class Arrow(HostType):
    dom: HostType
    cod: HostType

    def __repr__(self) -> str:
        return f"({self.dom!r} > {self.cod!r})"


IOTA = Base("i")
OMICRON = Base("o")


def arrow(*tys: HostType) -> HostType:
    """Right-associated function type over the given components."""
    if not tys:
        raise ValueError("arrow needs at least one type")
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


@dataclass(frozen=True)
class Var:
    name: str
    ty: HostType


@dataclass(frozen=True)
class Const:
    name: str
    ty: HostType


@dataclass(frozen=True)
class App:
    fn: object
    arg: object


@dataclass(frozen=True)
class Lam:
    name: str
    ty: HostType
    body: object


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Neg:
    body: object


@dataclass(frozen=True)
class Imp:
    ante: object
    cons: object


@dataclass(frozen=True)
class Conj:
    left: object
    right: object


@dataclass(frozen=True)
class Disj:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class All:
    name: str
    ty: HostType
    body: object


@dataclass(frozen=True)
class Ex:
    name: str
    ty: HostType
    body: object


@dataclass(frozen=True)
class Mem:
    elem: object
    container: object


@dataclass(frozen=True)
class Subq:
    sub: object
    sup: object


@dataclass(frozen=True)
class Sep:
    name: str  # bound variable, always at iota
    bound: object  # the set being separated
    body: object  # predicate over the bound variable


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    other: object


class TypeMismatch(Exception):
    def __init__(self, message: str, term=None):
        super().__init__(message)
        self.term = term


def app(fn, *args):
    out = fn
    for a in args:
        out = App(out, a)
    return out


def imp_chain(antecedents, body):
    out = body
    for g in reversed(list(antecedents)):
        out = Imp(g, out)
    return out


def conj_chain(conjuncts, body):
    out = body
    for g in reversed(list(conjuncts)):
        out = Conj(g, out)
    return out


def typecheck(term, env: dict | None = None) -> HostType:
    """Infer the type of a term; raise TypeMismatch when ill-typed."""
    env = env or {}

    def expect(t, want, ctx):
        got = check(t, ctx)
        if got != want:
            raise TypeMismatch(f"expected {want!r}, found {got!r}", t)
        return got

    def check(t, ctx) -> HostType:
        if isinstance(t, Var):
            bound = ctx.get(t.name)
            if bound is not None and bound != t.ty:
                raise TypeMismatch(f"variable {t.name} bound at {bound!r}, used at {t.ty!r}", t)
            return t.ty
        if isinstance(t, Const):
            return t.ty
        if isinstance(t, App):
            fn_ty = check(t.fn, ctx)
            if not isinstance(fn_ty, Arrow):
                raise TypeMismatch(f"applied non-function of type {fn_ty!r}", t)
            expect(t.arg, fn_ty.dom, ctx)
            return fn_ty.cod
        if isinstance(t, Lam):
            return Arrow(t.ty, check(t.body, {**ctx, t.name: t.ty}))
        if isinstance(t, (Bot, Top)):
            return OMICRON
        if isinstance(t, Neg):
            expect(t.body, OMICRON, ctx)
            return OMICRON
        if isinstance(t, (Imp, Conj, Disj, Iff)):
            a, b = _sides(t)
            expect(a, OMICRON, ctx)
            expect(b, OMICRON, ctx)
            return OMICRON
        if isinstance(t, Eq):
            lt = check(t.left, ctx)
            rt = check(t.right, ctx)
            if lt != rt:
                raise TypeMismatch(f"equation between {lt!r} and {rt!r}", t)
            return OMICRON
        if isinstance(t, (All, Ex)):
            expect(t.body, OMICRON, {**ctx, t.name: t.ty})
            return OMICRON
        if isinstance(t, Mem):
            expect(t.elem, IOTA, ctx)
            expect(t.container, IOTA, ctx)
            return OMICRON
        if isinstance(t, Subq):
            expect(t.sub, IOTA, ctx)
            expect(t.sup, IOTA, ctx)
            return OMICRON
        if isinstance(t, Sep):
            expect(t.bound, IOTA, ctx)
            expect(t.body, OMICRON, {**ctx, t.name: IOTA})
            return IOTA
        if isinstance(t, Ite):
            expect(t.cond, OMICRON, ctx)
            expect(t.then, IOTA, ctx)
            expect(t.other, IOTA, ctx)
            return IOTA
        raise TypeMismatch(f"unknown term {t!r}", t)

    return check(term, env)


def _sides(t):
    if isinstance(t, Imp):
        return t.ante, t.cons
    if isinstance(t, (Conj, Disj, Iff)):
        return t.left, t.right
    raise TypeError


def _binder_parts(t):
    if isinstance(t, Lam):
        return t.name, t.ty, (t.body,)
    if isinstance(t, All):
        return t.name, t.ty, (t.body,)
    if isinstance(t, Ex):
        return t.name, t.ty, (t.body,)
    if isinstance(t, Sep):
        return t.name, IOTA, (t.bound, t.body)
    return None


def alpha_eq(a, b) -> bool:
    """Structural equality modulo bound-variable names."""

    def go(x, y, ex, ey, depth):
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            dx = ex.get(x.name)
            dy = ey.get(y.name)
            if dx is None and dy is None:
                return x == y
            return dx == dy and x.ty == y.ty
        if isinstance(x, Const):
            return x == y
        if isinstance(x, (Bot, Top)):
            return True
        bx = _binder_parts(x)
        if bx is not None:
            by = _binder_parts(y)
            nx, tx, subx = bx
            ny, ty, suby = by
            if tx != ty or len(subx) != len(suby):
                return False
            # Sep's bound set is outside the binder scope
            if isinstance(x, Sep):
                if not go(subx[0], suby[0], ex, ey, depth):
                    return False
                subx, suby = subx[1:], suby[1:]
            ex2 = {**ex, nx: depth}
            ey2 = {**ey, ny: depth}
            return all(go(p, q, ex2, ey2, depth + 1) for p, q in zip(subx, suby))
        fx = [getattr(x, f.name) for f in x.__dataclass_fields__.values()]
        fy = [getattr(y, f.name) for f in y.__dataclass_fields__.values()]
        for p, q in zip(fx, fy):
            if isinstance(p, (str, HostType)):
                if p != q:
                    return False
            elif not go(p, q, ex, ey, depth):
                return False
        return True

    return go(a, b, {}, {}, 0)


def const_names(term):
    """Every Const name in the term, in first-occurrence order."""
    seen: dict = {}

    def go(t):
        if isinstance(t, Const):
            seen.setdefault(t.name, None)
        elif isinstance(t, (Var, Bot, Top)):
            pass
        else:
            for f in t.__dataclass_fields__.values():
                v = getattr(t, f.name)
                if not isinstance(v, (str, HostType)):
                    go(v)

    go(term)
    return list(seen)


def constructor_uses(term) -> set:
    """Which primitive constructors appear: subset of {in, subq, ite, sep}."""
    used: set = set()

    def go(t):
        if isinstance(t, Mem):
            used.add("in")
        elif isinstance(t, Subq):
            used.add("subq")
        elif isinstance(t, Ite):
            used.add("ite")
        elif isinstance(t, Sep):
            used.add("sep")
        if isinstance(t, (Var, Const, Bot, Top)):
            return
        for f in t.__dataclass_fields__.values():
            v = getattr(t, f.name)
            if not isinstance(v, (str, HostType)):
                go(v)

    go(term)
    return used
