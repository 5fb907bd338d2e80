"""Abstract syntax for the supported SUO-KIF fragment and its lowering.

The fragment is first-order logic plus row variables (at most one per
argument spine), variable-arity relation application, class-formation terms
(KappaFn), and signed decimal rationals.  Modal and temporal forms are
detected by head symbol and skipped rather than translated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sexpr
from .sexpr import (
    ATOM_CONSTANT,
    ATOM_NUMERAL,
    ATOM_ROWVAR,
    ATOM_STRING,
    ATOM_VARIABLE,
    Atom,
    KifSyntaxError,
    SList,
    Span,
)

# ---------------------------------------------------------------------------
# Terms

REAL = "real"
NEGREAL = "negreal"
NONNEGREAL = "nonnegreal"

ARITH_ADD = "+"
ARITH_SUB = "-"
ARITH_MULT = "*"
ARITH_DIV = "/"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Rat:
    """Signed decimal rational, normalized so the scale is minimal.

    The denoted value is num / 10**scale; scale 0 means an integer.
    """

    num: int
    scale: int


@dataclass(frozen=True)
class Builtin:
    which: str  # REAL | NEGREAL | NONNEGREAL


@dataclass(frozen=True)
class TermSpine:
    items: tuple


@dataclass(frozen=True)
class RowSpine:
    prefix: tuple
    row: str
    suffix: tuple


@dataclass(frozen=True)
class Apply:
    head: object  # Var or Const
    spine: object  # TermSpine or RowSpine


@dataclass(frozen=True)
class Kappa:
    var: str
    body: object


@dataclass(frozen=True)
class Arith:
    op: str
    left: object
    right: object


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class Impl:
    ante: object
    cons: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


@dataclass(frozen=True)
class ForallVars:
    names: tuple
    body: object


@dataclass(frozen=True)
class ExistsVars:
    names: tuple
    body: object


@dataclass(frozen=True)
class ForallRow:
    name: str
    body: object


@dataclass(frozen=True)
class ExistsRow:
    name: str
    body: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Instance:
    member: object
    cls: object


@dataclass(frozen=True)
class Subclass:
    sub: object
    sup: object


@dataclass(frozen=True)
class Le:
    left: object
    right: object


@dataclass(frozen=True)
class Lt:
    left: object
    right: object


@dataclass(frozen=True)
class RelAtom:
    head: object  # Const or Var
    spine: object


# ---------------------------------------------------------------------------
# Lowering results and errors


@dataclass(frozen=True)
class Assertion:
    formula: object
    span: Span


@dataclass(frozen=True)
class Query:
    formula: object
    span: Span


@dataclass(frozen=True)
class Skipped:
    reason: str
    span: Span


class LowerError(KifSyntaxError):
    pass


class TwoRowVarsInSpine(LowerError):
    pass


class MalformedBinder(LowerError):
    pass


class UnknownSyntax(LowerError):
    pass


class BadNumeral(LowerError):
    pass


DEFAULT_SKIP_HEADS = ("modalAttribute", "holdsDuring")

_BUILTIN_NAMES = {
    "RealNumber": REAL,
    "NegativeRealNumber": NEGREAL,
    "NonnegativeRealNumber": NONNEGREAL,
}

_ARITH_NAMES = {
    "AdditionFn": ARITH_ADD,
    "SubtractionFn": ARITH_SUB,
    "MultiplicationFn": ARITH_MULT,
    "DivisionFn": ARITH_DIV,
}


def parse_numeral(lexeme: str, span: Span | None = None) -> Rat:
    """Parse a signed decimal numeral into a normalized Rat.

    Trailing zeros of the fractional part are stripped so that the scale is
    minimal: "3.50" denotes the same Rat as "3.5".
    """
    span = span or Span("<numeral>", 1, 1)
    text = lexeme
    sign = 1
    if text.startswith("+"):
        text = text[1:]
    elif text.startswith("-"):
        sign = -1
        text = text[1:]
    if "." in text:
        whole, frac = text.split(".", 1)
    else:
        whole, frac = text, ""
    if not whole.isdigit() or (frac and not frac.isdigit()) or ("." in frac):
        raise BadNumeral(f"malformed numeral {lexeme!r}", span)
    num = sign * int(whole + frac) if (whole + frac) else 0
    scale = len(frac)
    while scale > 0 and num % 10 == 0:
        num //= 10
        scale -= 1
    if num == 0:
        scale = 0
    return Rat(num, scale)


def _contains_skip_head(sx, skip_heads) -> str | None:
    if isinstance(sx, SList) and sx.items:
        head = sx.items[0]
        if isinstance(head, Atom) and head.kind == ATOM_CONSTANT and head.lexeme in skip_heads:
            return head.lexeme
        for item in sx.items:
            found = _contains_skip_head(item, skip_heads)
            if found is not None:
                return found
    return None


def _lower_term(sx):
    if isinstance(sx, Atom):
        if sx.kind == ATOM_VARIABLE:
            return Var(sx.lexeme)
        if sx.kind == ATOM_ROWVAR:
            raise UnknownSyntax("row variable used as a term", sx.span)
        if sx.kind == ATOM_NUMERAL:
            return parse_numeral(sx.lexeme, sx.span)
        if sx.kind == ATOM_STRING:
            raise UnknownSyntax("string literals are outside the fragment", sx.span)
        if sx.lexeme in _BUILTIN_NAMES:
            return Builtin(_BUILTIN_NAMES[sx.lexeme])
        return Const(sx.lexeme)
    if not isinstance(sx, SList) or not sx.items:
        raise UnknownSyntax("empty application", sx.span)
    head = sx.items[0]
    if isinstance(head, SList):
        raise UnknownSyntax("compound head is outside the fragment", head.span)
    if head.kind == ATOM_CONSTANT and head.lexeme == "KappaFn":
        if len(sx.items) != 3 or not (
            isinstance(sx.items[1], Atom) and sx.items[1].kind == ATOM_VARIABLE
        ):
            raise MalformedBinder("KappaFn expects a variable and a body", sx.span)
        return Kappa(sx.items[1].lexeme, _lower_formula(sx.items[2]))
    if head.kind == ATOM_CONSTANT and head.lexeme in _ARITH_NAMES:
        if len(sx.items) != 3:
            raise UnknownSyntax(
                f"{head.lexeme} expects exactly two arguments", sx.span
            )
        return Arith(
            _ARITH_NAMES[head.lexeme],
            _lower_term(sx.items[1]),
            _lower_term(sx.items[2]),
        )
    if head.kind == ATOM_VARIABLE:
        return Apply(Var(head.lexeme), _lower_spine(sx.items[1:], sx.span))
    if head.kind == ATOM_CONSTANT:
        return Apply(Const(head.lexeme), _lower_spine(sx.items[1:], sx.span))
    raise UnknownSyntax("bad application head", head.span)


def _row_free_in_term(term) -> bool:
    if isinstance(term, Apply):
        spine = term.spine
        if isinstance(spine, RowSpine):
            return True
        return any(_row_free_in_term(t) for t in spine.items)
    if isinstance(term, Arith):
        return _row_free_in_term(term.left) or _row_free_in_term(term.right)
    return False


def _lower_spine(items, span: Span):
    row = None
    prefix: list = []
    suffix: list = []
    for sx in items:
        if isinstance(sx, Atom) and sx.kind == ATOM_ROWVAR:
            if row is not None:
                raise TwoRowVarsInSpine("more than one row variable in a spine", sx.span)
            row = sx.lexeme
            continue
        term = _lower_term(sx)
        (suffix if row is not None else prefix).append(term)
    if row is None:
        return TermSpine(tuple(prefix))
    for term in prefix + suffix:
        if _row_free_in_term(term):
            raise TwoRowVarsInSpine(
                "row variable nested inside a row-variable spine", span
            )
    return RowSpine(tuple(prefix), row, tuple(suffix))


def _lower_binders(sx, body_sx):
    if not isinstance(sx, SList) or not sx.items:
        raise MalformedBinder("binder list must be a non-empty list", sx.span)
    binders = []
    for item in sx.items:
        if isinstance(item, Atom) and item.kind == ATOM_VARIABLE:
            binders.append((item.lexeme, False))
        elif isinstance(item, Atom) and item.kind == ATOM_ROWVAR:
            binders.append((item.lexeme, True))
        else:
            raise MalformedBinder("binder list may contain only variables", sx.span)
    if isinstance(body_sx, Atom):
        raise MalformedBinder("quantifier body is not a formula", body_sx.span)
    return binders, _lower_formula(body_sx)


def _wrap_binders(binders, body, universal: bool):
    # consecutive ordinary variables share one quantifier node; each row
    # variable gets its own node, preserving source order
    out = body
    run: list = []

    def flush():
        nonlocal out
        if run:
            out = (ForallVars if universal else ExistsVars)(tuple(run), out)
            run.clear()

    for name, is_row in reversed(binders):
        if is_row:
            flush()
            out = (ForallRow if universal else ExistsRow)(name, out)
        else:
            run.insert(0, name)
    flush()
    return out


def _lower_formula(sx):
    if isinstance(sx, Atom):
        raise UnknownSyntax("expected a formula", sx.span)
    if not sx.items:
        raise UnknownSyntax("empty form", sx.span)
    head = sx.items[0]
    if isinstance(head, SList):
        raise UnknownSyntax("compound head is outside the fragment", head.span)
    name = head.lexeme if head.kind == ATOM_CONSTANT else None
    args = sx.items[1:]
    if name in ("forall", "exists"):
        if len(args) != 2:
            raise MalformedBinder(f"{name} expects a binder list and a body", sx.span)
        binders, body = _lower_binders(args[0], args[1])
        return _wrap_binders(binders, body, universal=(name == "forall"))
    if name in ("and", "or"):
        if not args:
            raise UnknownSyntax(f"({name}) with no operands", sx.span)
        items = tuple(_lower_formula(a) for a in args)
        if len(items) == 1:
            return items[0]
        return (And if name == "and" else Or)(items)
    if name == "not":
        if len(args) != 1:
            raise UnknownSyntax("not expects one operand", sx.span)
        return Not(_lower_formula(args[0]))
    if name == "=>":
        if len(args) != 2:
            raise UnknownSyntax("=> expects two operands", sx.span)
        return Impl(_lower_formula(args[0]), _lower_formula(args[1]))
    if name == "<=>":
        if len(args) != 2:
            raise UnknownSyntax("<=> expects two operands", sx.span)
        return Iff(_lower_formula(args[0]), _lower_formula(args[1]))
    if name in ("equal", "instance", "subclass", "lessThan", "lessThanOrEqualTo"):
        if len(args) != 2:
            raise UnknownSyntax(f"{name} expects two arguments", sx.span)
        left, right = _lower_term(args[0]), _lower_term(args[1])
        ctor = {
            "equal": Eq,
            "instance": Instance,
            "subclass": Subclass,
            "lessThan": Lt,
            "lessThanOrEqualTo": Le,
        }[name]
        return ctor(left, right)
    if head.kind == ATOM_VARIABLE:
        return RelAtom(Var(head.lexeme), _lower_spine(args, sx.span))
    if head.kind == ATOM_CONSTANT:
        return RelAtom(Const(head.lexeme), _lower_spine(args, sx.span))
    raise UnknownSyntax("bad formula head", head.span)


def lower(form, skip_heads=DEFAULT_SKIP_HEADS):
    """Lower one top-level s-expression to Assertion, Query, or Skipped."""
    span = form.span
    reason = _contains_skip_head(form, tuple(skip_heads))
    if reason is not None:
        return Skipped(f"modal head {reason!r}", span)
    if (
        isinstance(form, SList)
        and form.items
        and isinstance(form.items[0], Atom)
        and form.items[0].kind == ATOM_CONSTANT
        and form.items[0].lexeme == "query"
    ):
        if len(form.items) != 2:
            raise UnknownSyntax("query expects one formula", span)
        return Query(_lower_formula(form.items[1]), span)
    return Assertion(_lower_formula(form), span)


# ---------------------------------------------------------------------------
# Free variables and rendering


def formula_free_vars(formula):
    """Free variables of a formula in first-occurrence order.

    Returns a list of (name, is_row) pairs.
    """
    seen: dict = {}

    def term(t, bound, rows):
        if isinstance(t, Var):
            if t.name not in bound:
                seen.setdefault((t.name, False), None)
        elif isinstance(t, Apply):
            if isinstance(t.head, Var) and t.head.name not in bound:
                seen.setdefault((t.head.name, False), None)
            spine(t.spine, bound, rows)
        elif isinstance(t, Kappa):
            walk(t.body, bound | {t.var}, rows)
        elif isinstance(t, Arith):
            term(t.left, bound, rows)
            term(t.right, bound, rows)

    def spine(s, bound, rows):
        if isinstance(s, TermSpine):
            for t in s.items:
                term(t, bound, rows)
        else:
            for t in s.prefix:
                term(t, bound, rows)
            if s.row not in rows:
                seen.setdefault((s.row, True), None)
            for t in s.suffix:
                term(t, bound, rows)

    def walk(f, bound, rows):
        if isinstance(f, (Bot, Top)):
            return
        if isinstance(f, Not):
            walk(f.body, bound, rows)
        elif isinstance(f, Impl):
            walk(f.ante, bound, rows)
            walk(f.cons, bound, rows)
        elif isinstance(f, Iff):
            walk(f.left, bound, rows)
            walk(f.right, bound, rows)
        elif isinstance(f, (And, Or)):
            for item in f.items:
                walk(item, bound, rows)
        elif isinstance(f, (ForallVars, ExistsVars)):
            walk(f.body, bound | set(f.names), rows)
        elif isinstance(f, (ForallRow, ExistsRow)):
            walk(f.body, bound, rows | {f.name})
        elif isinstance(f, (Eq, Instance, Subclass, Le, Lt)):
            a, b = _formula_sides(f)
            term(a, bound, rows)
            term(b, bound, rows)
        elif isinstance(f, RelAtom):
            if isinstance(f.head, Var) and f.head.name not in bound:
                seen.setdefault((f.head.name, False), None)
            spine(f.spine, bound, rows)
        else:
            raise TypeError(f"not a formula: {f!r}")

    walk(formula, frozenset(), frozenset())
    return list(seen.keys())


def _formula_sides(f):
    if isinstance(f, Eq):
        return f.left, f.right
    if isinstance(f, Instance):
        return f.member, f.cls
    if isinstance(f, Subclass):
        return f.sub, f.sup
    return f.left, f.right


_BUILTIN_SURFACE = {REAL: "RealNumber", NEGREAL: "NegativeRealNumber", NONNEGREAL: "NonnegativeRealNumber"}
_ARITH_SURFACE = {ARITH_ADD: "AdditionFn", ARITH_SUB: "SubtractionFn", ARITH_MULT: "MultiplicationFn", ARITH_DIV: "DivisionFn"}


def rat_lexeme(r: Rat) -> str:
    sign = "-" if r.num < 0 else ""
    digits = str(abs(r.num))
    if r.scale == 0:
        return sign + digits
    digits = digits.rjust(r.scale + 1, "0")
    return f"{sign}{digits[:-r.scale]}.{digits[-r.scale:]}"


def term_to_kif(t) -> str:
    if isinstance(t, Var):
        return "?" + t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Rat):
        return rat_lexeme(t)
    if isinstance(t, Builtin):
        return _BUILTIN_SURFACE[t.which]
    if isinstance(t, Apply):
        return "(" + " ".join([term_to_kif(t.head)] + _spine_to_kif(t.spine)) + ")"
    if isinstance(t, Kappa):
        return f"(KappaFn ?{t.var} {to_kif(t.body)})"
    if isinstance(t, Arith):
        return f"({_ARITH_SURFACE[t.op]} {term_to_kif(t.left)} {term_to_kif(t.right)})"
    raise TypeError(f"not a term: {t!r}")


def _spine_to_kif(s) -> list:
    if isinstance(s, TermSpine):
        return [term_to_kif(t) for t in s.items]
    parts = [term_to_kif(t) for t in s.prefix]
    parts.append("@" + s.row)
    parts.extend(term_to_kif(t) for t in s.suffix)
    return parts


def to_kif(f) -> str:
    """Render a formula back to SUO-KIF concrete syntax."""
    if isinstance(f, Bot):
        return "(or)"  # no surface form; placeholder never produced by lower()
    if isinstance(f, Top):
        return "(and)"
    if isinstance(f, Not):
        return f"(not {to_kif(f.body)})"
    if isinstance(f, Impl):
        return f"(=> {to_kif(f.ante)} {to_kif(f.cons)})"
    if isinstance(f, Iff):
        return f"(<=> {to_kif(f.left)} {to_kif(f.right)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_kif(i) for i in f.items) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_kif(i) for i in f.items) + ")"
    if isinstance(f, ForallVars):
        return "(forall (" + " ".join("?" + n for n in f.names) + ") " + to_kif(f.body) + ")"
    if isinstance(f, ExistsVars):
        return "(exists (" + " ".join("?" + n for n in f.names) + ") " + to_kif(f.body) + ")"
    if isinstance(f, ForallRow):
        return f"(forall (@{f.name}) {to_kif(f.body)})"
    if isinstance(f, ExistsRow):
        return f"(exists (@{f.name}) {to_kif(f.body)})"
    if isinstance(f, Eq):
        return f"(equal {term_to_kif(f.left)} {term_to_kif(f.right)})"
    if isinstance(f, Instance):
        return f"(instance {term_to_kif(f.member)} {term_to_kif(f.cls)})"
    if isinstance(f, Subclass):
        return f"(subclass {term_to_kif(f.sub)} {term_to_kif(f.sup)})"
    if isinstance(f, Lt):
        return f"(lessThan {term_to_kif(f.left)} {term_to_kif(f.right)})"
    if isinstance(f, Le):
        return f"(lessThanOrEqualTo {term_to_kif(f.left)} {term_to_kif(f.right)})"
    if isinstance(f, RelAtom):
        return "(" + " ".join([term_to_kif(f.head)] + _spine_to_kif(f.spine)) + ")"
    raise TypeError(f"not a formula: {f!r}")
