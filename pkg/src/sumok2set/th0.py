"""Typed higher-order problem files: flattening, rendering, re-parsing.

The set primitives of the internal term language are structural nodes; here
they are flattened to applied constants so the output is plain typed lambda
calculus.  Separation subterms cannot be applied constants directly, so each
one is hoisted to a fresh constant parameterized over its free variables,
with a defining equivalence emitted as a definition-role premise.

Rendering is canonical: compound subterms are always parenthesized, binders
take one variable each, and long records wrap greedily at 100 columns with a
four space continuation indent.  Parsing the rendered text and rendering
again reproduces it byte for byte.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .catalog import CATALOG, cc
from .hostterm import (
    All,
    App,
    Arrow,
    Base,
    Bot,
    Conj,
    Const,
    Disj,
    Eq,
    Ex,
    IOTA,
    Iff,
    Imp,
    Ite,
    Lam,
    Mem,
    Neg,
    OMICRON,
    Sep,
    Subq,
    Top,
    TypeMismatch,
    Var,
    app,
    arrow,
    typecheck,
)

WIDTH = 100
INDENT = "    "


class Th0Error(Exception):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Flattening


def _free_vars(term, bound=frozenset()):
    """Free variables in first-occurrence order as (name, ty) pairs."""
    out: dict = {}

    def walk(t, bound):
        if isinstance(t, Var):
            if t.name not in bound:
                out.setdefault((t.name, t.ty), None)
        elif isinstance(t, App):
            walk(t.fn, bound)
            walk(t.arg, bound)
        elif isinstance(t, (Lam, All, Ex)):
            walk(t.body, bound | {t.name})
        elif isinstance(t, Neg):
            walk(t.body, bound)
        elif isinstance(t, (Imp, Conj, Disj, Iff, Eq)):
            a, b = _two(t)
            walk(a, bound)
            walk(b, bound)
        elif isinstance(t, Mem):
            walk(t.elem, bound)
            walk(t.container, bound)
        elif isinstance(t, Subq):
            walk(t.sub, bound)
            walk(t.sup, bound)
        elif isinstance(t, Sep):
            walk(t.bound, bound)
            walk(t.body, bound | {t.name})
        elif isinstance(t, Ite):
            walk(t.cond, bound)
            walk(t.then, bound)
            walk(t.other, bound)

    walk(term, bound)
    return list(out)


def _two(t):
    if isinstance(t, Imp):
        return t.ante, t.cons
    return t.left, t.right


def _rename_free(term, mapping):
    """Substitute variables by name; mapping values are terms."""

    def walk(t, shadow):
        if isinstance(t, Var):
            if t.name in shadow:
                return t
            return mapping.get(t.name, t)
        if isinstance(t, App):
            return App(walk(t.fn, shadow), walk(t.arg, shadow))
        if isinstance(t, Lam):
            return Lam(t.name, t.ty, walk(t.body, shadow | {t.name}))
        if isinstance(t, All):
            return All(t.name, t.ty, walk(t.body, shadow | {t.name}))
        if isinstance(t, Ex):
            return Ex(t.name, t.ty, walk(t.body, shadow | {t.name}))
        if isinstance(t, Neg):
            return Neg(walk(t.body, shadow))
        if isinstance(t, Imp):
            return Imp(walk(t.ante, shadow), walk(t.cons, shadow))
        if isinstance(t, Conj):
            return Conj(walk(t.left, shadow), walk(t.right, shadow))
        if isinstance(t, Disj):
            return Disj(walk(t.left, shadow), walk(t.right, shadow))
        if isinstance(t, Iff):
            return Iff(walk(t.left, shadow), walk(t.right, shadow))
        if isinstance(t, Eq):
            return Eq(walk(t.left, shadow), walk(t.right, shadow))
        if isinstance(t, Mem):
            return Mem(walk(t.elem, shadow), walk(t.container, shadow))
        if isinstance(t, Subq):
            return Subq(walk(t.sub, shadow), walk(t.sup, shadow))
        if isinstance(t, Sep):
            return Sep(t.name, walk(t.bound, shadow), walk(t.body, shadow | {t.name}))
        if isinstance(t, Ite):
            return Ite(walk(t.cond, shadow), walk(t.then, shadow), walk(t.other, shadow))
        return t

    return walk(term, frozenset())


class _SepHoister:
    """Replace separation nodes by applied fresh constants with definitions."""

    def __init__(self):
        self.defs: list = []  # (const_name, definition term), hoist order
        self._by_key: dict = {}

    def flatten(self, term):
        t = term
        if isinstance(t, (Var, Const, Bot, Top)):
            return t
        if isinstance(t, App):
            return App(self.flatten(t.fn), self.flatten(t.arg))
        if isinstance(t, Lam):
            return Lam(t.name, t.ty, self.flatten(t.body))
        if isinstance(t, All):
            return All(t.name, t.ty, self.flatten(t.body))
        if isinstance(t, Ex):
            return Ex(t.name, t.ty, self.flatten(t.body))
        if isinstance(t, Neg):
            return Neg(self.flatten(t.body))
        if isinstance(t, Imp):
            return Imp(self.flatten(t.ante), self.flatten(t.cons))
        if isinstance(t, Conj):
            return Conj(self.flatten(t.left), self.flatten(t.right))
        if isinstance(t, Disj):
            return Disj(self.flatten(t.left), self.flatten(t.right))
        if isinstance(t, Iff):
            return Iff(self.flatten(t.left), self.flatten(t.right))
        if isinstance(t, Eq):
            return Eq(self.flatten(t.left), self.flatten(t.right))
        if isinstance(t, Mem):
            return app(cc("in"), self.flatten(t.elem), self.flatten(t.container))
        if isinstance(t, Subq):
            return app(cc("subq"), self.flatten(t.sub), self.flatten(t.sup))
        if isinstance(t, Ite):
            return app(
                cc("ite"), self.flatten(t.cond), self.flatten(t.then), self.flatten(t.other)
            )
        if isinstance(t, Sep):
            return self._hoist(t)
        raise TypeError(f"cannot flatten {t!r}")

    def _hoist(self, t: Sep):
        bound_flat = self.flatten(t.bound)
        body_flat = self.flatten(t.body)
        params = _free_vars(Sep(t.name, bound_flat, body_flat))
        key = self._key(t.name, bound_flat, body_flat, params)
        found = self._by_key.get(key)
        if found is None:
            name = "sep_" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:12]
            const = Const(name, arrow(*[ty for _, ty in params], IOTA))
            self.defs.append((name, self._definition(const, t, bound_flat, body_flat, params)))
            self._by_key[key] = const
            found = const
        return app(found, *[Var(n, ty) for n, ty in params])

    def _key(self, xname, bound_flat, body_flat, params) -> str:
        mapping = {n: Var(f"P{i}", ty) for i, (n, ty) in enumerate(params)}
        elem = "SEPX"
        while any(elem == n for n, _ in params):
            elem += "_"
        member = Var(elem, IOTA)
        shape = Conj(
            app(cc("in"), member, _rename_free(bound_flat, mapping)),
            _rename_free(
                _rename_free(body_flat, {xname: member}),
                mapping,
            ),
        )
        closed = Lam(elem, IOTA, shape)
        for i in range(len(params) - 1, -1, -1):
            closed = Lam(f"P{i}", params[i][1], closed)
        return render_term(closed)

    def _definition(self, const, t: Sep, bound_flat, body_flat, params):
        elem = t.name
        while any(elem == n for n, _ in params):
            elem += "_elem"
        member = Var(elem, IOTA)
        applied = app(const, *[Var(n, ty) for n, ty in params])
        body = _rename_free(body_flat, {t.name: member})
        out = Iff(
            app(cc("in"), member, applied),
            Conj(app(cc("in"), member, bound_flat), body),
        )
        out = All(elem, IOTA, out)
        for n, ty in reversed(params):
            out = All(n, ty, out)
        return out


# ---------------------------------------------------------------------------
# Rendering


def render_type(ty, atomic: bool = False) -> str:
    if isinstance(ty, Base):
        return "$" + ty.tag
    inner = f"{render_type(ty.dom, atomic=True)} > {render_type(ty.cod)}"
    return f"({inner})" if atomic else inner


_THF_VAR_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")


def _thf_var(name: str) -> str:
    if _THF_VAR_RE.match(name):
        return name
    escaped = "".join(ch if (ch.isascii() and ch.isalnum()) else "_%02x" % ord(ch) for ch in name)
    return "V_" + escaped


def render_term(t) -> str:
    """Canonical fully parenthesized rendering of a flat term."""
    if isinstance(t, Var):
        return _thf_var(t.name)
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Bot):
        return "$false"
    if isinstance(t, Top):
        return "$true"
    return "(" + _render_inner(t) + ")"


def _render_inner(t) -> str:
    if isinstance(t, App):
        parts = []
        spine = t
        while isinstance(spine, App):
            parts.append(spine.arg)
            spine = spine.fn
        parts.append(spine)
        parts.reverse()
        return " @ ".join(render_term(p) for p in parts)
    if isinstance(t, Lam):
        return f"^[{_thf_var(t.name)} : {render_type(t.ty)}]: {render_term(t.body)}"
    if isinstance(t, All):
        return f"![{_thf_var(t.name)} : {render_type(t.ty)}]: {render_term(t.body)}"
    if isinstance(t, Ex):
        return f"?[{_thf_var(t.name)} : {render_type(t.ty)}]: {render_term(t.body)}"
    if isinstance(t, Neg):
        return "~ " + render_term(t.body)
    if isinstance(t, Imp):
        return f"{render_term(t.ante)} => {render_term(t.cons)}"
    if isinstance(t, Conj):
        return f"{render_term(t.left)} & {render_term(t.right)}"
    if isinstance(t, Disj):
        return f"{render_term(t.left)} | {render_term(t.right)}"
    if isinstance(t, Iff):
        return f"{render_term(t.left)} <=> {render_term(t.right)}"
    if isinstance(t, Eq):
        return f"{render_term(t.left)} = {render_term(t.right)}"
    raise TypeError(f"cannot render {t!r}")


def _wrap(text: str) -> str:
    if len(text) <= WIDTH:
        return text
    words = text.split(" ")
    lines = []
    cur = words[0]
    for w in words[1:]:
        if len(cur) + 1 + len(w) <= WIDTH:
            cur += " " + w
        else:
            lines.append(cur)
            cur = INDENT + w
    lines.append(cur)
    return "\n".join(lines)


def render_record(name: str, role: str, content: str) -> str:
    return _wrap(f"thf({name}, {role}, {content}).")


# ---------------------------------------------------------------------------
# Documents


@dataclass
class Th0Doc:
    comments: list = field(default_factory=list)
    decls: list = field(default_factory=list)  # (const name, type)
    premises: list = field(default_factory=list)  # (name, role, flat term)
    conjecture: object = None  # flat term, record named conj


def _collect_consts(terms) -> list:
    """Declared constants: catalog members in catalog order, then first use."""
    seen: dict = {}

    def walk(t):
        if isinstance(t, Const):
            prev = seen.get(t.name)
            if prev is not None and prev != t.ty:
                raise Th0Error(f"constant {t.name} used at two types")
            seen[t.name] = t.ty
        elif isinstance(t, App):
            walk(t.fn)
            walk(t.arg)
        elif isinstance(t, (Lam, All, Ex, Neg)):
            walk(t.body)
        elif isinstance(t, (Imp, Conj, Disj, Iff, Eq)):
            a, b = _two(t)
            walk(a)
            walk(b)

    for term in terms:
        walk(term)
    catalog_part = sorted(
        (n for n in seen if n in CATALOG), key=CATALOG.order_index
    )
    rest = [n for n in seen if n not in CATALOG]
    return [(n, seen[n]) for n in catalog_part + rest]


def build_doc(problem, reproducible: bool = False, explain: bool = False) -> Th0Doc:
    """Flatten a translated problem into a renderable document."""
    import datetime

    hoister = _SepHoister()
    premises = [(name, role, hoister.flatten(term)) for name, role, term in problem.premises]
    conjecture = hoister.flatten(problem.conjecture)
    sep_premises = [("def_" + name, "definition", term) for name, term in hoister.defs]

    all_premises = sep_premises + premises
    decls = _collect_consts([t for _, _, t in all_premises] + [conjecture])

    comments = ["higher-order set theory translation"]
    if not reproducible:
        comments.append("generated " + datetime.date.today().isoformat())
    comments.extend(problem.comments)
    if explain:
        if problem.explanations:
            comments.append("guard derivations:")
            comments.extend(problem.explanations)
        else:
            comments.append("guard derivations: none")
    return Th0Doc(
        comments=comments,
        decls=decls,
        premises=all_premises,
        conjecture=conjecture,
    )


def render_doc(doc: Th0Doc) -> str:
    lines = ["% " + c if c else "%" for c in doc.comments]
    for name, ty in doc.decls:
        lines.append(render_record(f"ty_{name}", "type", f"{name} : {render_type(ty)}"))
    for name, role, term in doc.premises:
        lines.append(render_record(name, role, render_term(term)))
    lines.append(render_record("conj", "conjecture", render_term(doc.conjecture)))
    return "\n".join(lines) + "\n"


def problem_text(problem, reproducible: bool = False, explain: bool = False) -> str:
    return render_doc(build_doc(problem, reproducible=reproducible, explain=explain))


# ---------------------------------------------------------------------------
# Re-parsing and checking

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>%[^\n]*)
      | (?P<iff><=>)
      | (?P<imp>=>)
      | (?P<word>[A-Za-z0-9_$]+)
      | (?P<punct>[()\[\]:,.@&|~!?^=>])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize_thf(text: str):
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise Th0Error(f"bad character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            pass
        elif kind == "comment":
            toks.append(_Tok("comment", lexeme, line, col))
        elif kind in ("iff", "imp"):
            toks.append(_Tok(lexeme, lexeme, line, col))
        elif kind == "word":
            toks.append(_Tok("word", lexeme, line, col))
        else:
            toks.append(_Tok(lexeme, lexeme, line, col))
        for ch in lexeme:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = [t for t in toks if t.kind != "comment"]
        self.comments = [t.text[1:].lstrip(" ") if t.text != "%" else "" for t in toks if t.kind == "comment"]
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise Th0Error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok.kind != kind:
            raise Th0Error(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def expect_word(self, text=None):
        tok = self.expect("word")
        if text is not None and tok.text != text:
            raise Th0Error(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    # types -----------------------------------------------------------------

    def parse_type(self):
        left = self.parse_type_atom()
        tok = self.peek()
        if tok is not None and tok.kind == ">":
            self.next()
            return Arrow(left, self.parse_type())
        return left

    def parse_type_atom(self):
        tok = self.next()
        if tok.kind == "(":
            ty = self.parse_type()
            self.expect(")")
            return ty
        if tok.kind == "word" and tok.text == "$i":
            return IOTA
        if tok.kind == "word" and tok.text == "$o":
            return OMICRON
        raise Th0Error(f"expected a type, found {tok.text!r}", tok.line, tok.col)

    # terms -----------------------------------------------------------------

    _BINOPS = {"&": Conj, "|": Disj, "=>": Imp, "<=>": Iff, "=": Eq}

    def parse_formula(self, env, decls):
        first = self.parse_app(env, decls)
        tok = self.peek()
        if tok is None or tok.kind not in self._BINOPS:
            return first
        op = tok.kind
        items = [first]
        while self.peek() is not None and self.peek().kind in self._BINOPS:
            t = self.next()
            if t.kind != op:
                raise Th0Error(
                    f"mixed operators {op!r} and {t.kind!r} need parentheses", t.line, t.col
                )
            items.append(self.parse_app(env, decls))
        if op in ("=>", "<=>", "=") and len(items) != 2:
            raise Th0Error(f"operator {op!r} is binary", tok.line, tok.col)
        ctor = self._BINOPS[op]
        out = items[-1]
        for item in reversed(items[:-1]):
            out = ctor(item, out)
        return out

    def parse_app(self, env, decls):
        out = self.parse_unit(env, decls)
        while self.peek() is not None and self.peek().kind == "@":
            self.next()
            out = App(out, self.parse_unit(env, decls))
        return out

    def parse_unit(self, env, decls):
        tok = self.next()
        if tok.kind == "(":
            inner = self.parse_formula(env, decls)
            self.expect(")")
            return inner
        if tok.kind == "~":
            return Neg(self.parse_unit(env, decls))
        if tok.kind in ("!", "?", "^"):
            self.expect("[")
            name_tok = self.expect_word()
            self.expect(":")
            ty = self.parse_type()
            self.expect("]")
            self.expect(":")
            body = self.parse_unit(env | {name_tok.text: ty}, decls)
            ctor = {"!": All, "?": Ex, "^": Lam}[tok.kind]
            return ctor(name_tok.text, ty, body)
        if tok.kind == "word":
            if tok.text == "$true":
                return Top()
            if tok.text == "$false":
                return Bot()
            if tok.text in env:
                return Var(tok.text, env[tok.text])
            if tok.text in decls:
                return Const(tok.text, decls[tok.text])
            raise Th0Error(f"undeclared symbol {tok.text!r}", tok.line, tok.col)
        raise Th0Error(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse_doc(text: str) -> Th0Doc:
    """Parse rendered problem text back into a document."""
    parser = _Parser(_tokenize_thf(text))
    doc = Th0Doc(comments=parser.comments)
    decls: dict = {}
    while parser.peek() is not None:
        start = parser.expect_word("thf")
        parser.expect("(")
        name = parser.expect_word().text
        parser.expect(",")
        role = parser.expect_word().text
        parser.expect(",")
        if role == "type":
            const_tok = parser.expect_word()
            parser.expect(":")
            ty = parser.parse_type()
            if not name.startswith("ty_") or name[3:] != const_tok.text:
                raise Th0Error(
                    f"type record {name} must declare a matching constant",
                    const_tok.line,
                    const_tok.col,
                )
            if const_tok.text in decls:
                raise Th0Error(f"duplicate declaration of {const_tok.text}", const_tok.line, const_tok.col)
            decls[const_tok.text] = ty
            doc.decls.append((const_tok.text, ty))
        elif role in ("axiom", "definition", "conjecture"):
            term = parser.parse_formula({}, decls)
            if role == "conjecture":
                if name != "conj" or doc.conjecture is not None:
                    raise Th0Error("exactly one conjecture named conj is expected", start.line, start.col)
                doc.conjecture = term
            else:
                doc.premises.append((name, role, term))
        else:
            raise Th0Error(f"unknown role {role!r}", start.line, start.col)
        parser.expect(")")
        parser.expect(".")
    if doc.conjecture is None:
        raise Th0Error("missing conjecture")
    return doc


def check_text(text: str) -> list:
    """Diagnostics for rendered problem text; empty means well formed.

    Checks grammar, declarations before use, type correctness of every
    formula at the boolean type, and byte idempotence of the rendering.
    """
    diags: list = []
    try:
        doc = parse_doc(text)
    except Th0Error as err:
        where = f" at {err.line}:{err.col}" if err.line else ""
        return [f"parse error{where}: {err}"]
    env = {}
    for name, role, term in list(doc.premises) + [("conj", "conjecture", doc.conjecture)]:
        try:
            ty = typecheck(term, env)
            if ty != OMICRON:
                diags.append(f"{name}: formula has type {render_type(ty)}, not $o")
        except TypeMismatch as err:
            diags.append(f"{name}: ill-typed: {err}")
    rendered = render_doc(doc)
    if rendered != text:
        diags.append("text is not in canonical form (render of parse differs)")
    return diags
