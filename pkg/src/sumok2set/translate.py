"""Translation from the lowered KIF fragment into the set-theoretic host terms.

Every source constant becomes an individual of the host domain.  Relation
application goes through ap over the list encoding of the argument spine, so
fixed and variable arity share one shape; truth of an applied relation is
membership of the empty set in the resulting set.  Quantified variables pick
up membership guards derived from declared argument domains: implications
under universals, conjunctions under existentials and class formation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import guards as guardmod
from . import signature as sigmod
from . import sumo
from .catalog import CATALOG, cc, encode_rational, mk_list, ord_of
from .guards import MEMBER, MemClass
from .hostterm import (
    All,
    App,
    Arrow,
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
    Sep,
    Subq,
    Top,
    Var,
    app,
    conj_chain,
    imp_chain,
)
from .sexpr import Span, parse_forms

LIST = Arrow(IOTA, IOTA)


class TranslateError(Exception):
    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.span = span


class MangleCollision(TranslateError):
    pass


class UnknownPremiseName(TranslateError):
    pass


# Source classes with a set-theoretic counterpart of their own.
SPECIAL_CLASSES = {
    "Entity": "entity",
    "SetOrClass": "set_or_class",
    "Abstract": "abstract_class",
    "RealNumber": "real",
    "NegativeRealNumber": "negreal",
    "NonnegativeRealNumber": "nonnegreal",
}

_ARITH_CONST = {
    sumo.ARITH_ADD: "arith_add",
    sumo.ARITH_SUB: "arith_sub",
    sumo.ARITH_MULT: "arith_mult",
    sumo.ARITH_DIV: "arith_div",
}

_BUILTIN_CONST = {
    sumo.REAL: "real",
    sumo.NEGREAL: "negreal",
    sumo.NONNEGREAL: "nonnegreal",
}


def mangle(name: str) -> str:
    """Stable injective mapping of source names into identifier characters.

    Anything outside ASCII letters and digits becomes an underscore followed
    by the two-digit hex code of the character, so distinct source names
    never collide.
    """
    out = ["s_"]
    for ch in name:
        if ch.isascii() and ch.isalnum():
            out.append(ch)
        else:
            out.append("_%02x" % ord(ch))
    return "".join(out)


def _all_var_names(formula) -> set:
    """Every variable name occurring in the formula, bound or free."""
    names: set = set()

    def term(t):
        if isinstance(t, sumo.Var):
            names.add(t.name)
        elif isinstance(t, sumo.Apply):
            term(t.head)
            spine(t.spine)
        elif isinstance(t, sumo.Kappa):
            names.add(t.var)
            walk(t.body)
        elif isinstance(t, sumo.Arith):
            term(t.left)
            term(t.right)

    def spine(s):
        if isinstance(s, sumo.TermSpine):
            for t in s.items:
                term(t)
        else:
            names.add(s.row)
            for t in s.prefix + s.suffix:
                term(t)

    def walk(f):
        if isinstance(f, sumo.Not):
            walk(f.body)
        elif isinstance(f, sumo.Impl):
            walk(f.ante)
            walk(f.cons)
        elif isinstance(f, sumo.Iff):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (sumo.And, sumo.Or)):
            for item in f.items:
                walk(item)
        elif isinstance(f, (sumo.ForallVars, sumo.ExistsVars)):
            names.update(f.names)
            walk(f.body)
        elif isinstance(f, (sumo.ForallRow, sumo.ExistsRow)):
            names.add(f.name)
            walk(f.body)
        elif isinstance(f, (sumo.Eq, sumo.Instance, sumo.Subclass, sumo.Le, sumo.Lt)):
            a, b = sumo._formula_sides(f)
            term(a)
            term(b)
        elif isinstance(f, sumo.RelAtom):
            term(f.head)
            spine(f.spine)

    walk(formula)
    return names


class Translator:
    """Holds the signature and naming state for one translation run."""

    def __init__(self, sig, expand_known_rows: bool = False, collect_explanations: bool = False):
        self.sig = sig
        self.expand_known_rows = expand_known_rows
        self.collect_explanations = collect_explanations
        self.minted: dict = {}  # host name -> source name, insertion ordered
        self.explanations: list = []
        self._avoid: set = set()

    # -- naming ------------------------------------------------------------

    def resolve(self, name: str):
        if name == "Class":
            return App(cc("power"), cc("univ"))
        if name in SPECIAL_CLASSES:
            return cc(SPECIAL_CLASSES[name])
        host = mangle(name)
        prev = self.minted.get(host)
        if prev is not None and prev != name:
            raise MangleCollision(f"{name!r} and {prev!r} both mangle to {host!r}")
        self.minted[host] = name
        return Const(host, IOTA)

    def _fresh(self, base: str) -> str:
        name = base
        k = 0
        while name in self._avoid:
            name = f"{base}{k}"
            k += 1
        self._avoid.add(name)
        return name

    # -- terms -------------------------------------------------------------

    def term(self, t):
        if isinstance(t, sumo.Var):
            return Var(t.name, IOTA)
        if isinstance(t, sumo.Const):
            return self.resolve(t.name)
        if isinstance(t, sumo.Rat):
            return encode_rational(t.num, t.scale)
        if isinstance(t, sumo.Builtin):
            return cc(_BUILTIN_CONST[t.which])
        if isinstance(t, sumo.Apply):
            return self.apply_term(t.head, t.spine)
        if isinstance(t, sumo.Kappa):
            return self.kappa(t)
        if isinstance(t, sumo.Arith):
            args = mk_list([self.term(t.left), self.term(t.right)])
            return app(cc("ap"), cc(_ARITH_CONST[t.op]), App(cc("listset"), args))
        raise TranslateError(f"not a term: {t!r}")

    def apply_term(self, head, spine):
        h = Var(head.name, IOTA) if isinstance(head, sumo.Var) else self.resolve(head.name)
        return app(cc("ap"), h, App(cc("listset"), self.spine_list(spine)))

    def spine_list(self, spine):
        if isinstance(spine, sumo.TermSpine):
            return mk_list([self.term(t) for t in spine.items])
        base = Var(spine.row, LIST)
        if spine.suffix:
            base = self._append(base, [self.term(t) for t in spine.suffix])
        out = base
        for t in reversed(spine.prefix):
            out = app(cc("cons"), self.term(t), out)
        return out

    def _append(self, rho, items):
        # extend the list function past len rho; position len rho + j holds
        # the tagged j-th extra item
        n = self._fresh("NIDX")
        ix = Var(n, IOTA)
        offset = app(cc("ord_sub"), ix, App(cc("len"), rho))
        chain = cc("emptyset")
        for j in range(len(items) - 1, -1, -1):
            chain = Ite(Eq(offset, ord_of(j)), App(cc("tag"), items[j]), chain)
        return Lam(n, IOTA, Ite(Mem(ix, App(cc("len"), rho)), App(rho, ix), chain))

    def kappa(self, t: sumo.Kappa):
        x = Var(t.var, IOTA)
        occ = guardmod.guards_for(
            t.body, {t.var}, self.sig, self.resolve, self.expand_known_rows
        )
        entity_guard = MemClass(cc("entity"), MEMBER, origin="class-formation")
        extra = [g for _, g in occ[t.var] if g != entity_guard]
        terms = [entity_guard.to_term(x)] + [g.to_term(x) for g in extra]
        if self.collect_explanations:
            self.explanations.append(f"  {t.var}: member of entity [class-formation]")
            self.explanations.extend(guardmod.explain({t.var: occ[t.var]}))
        return Sep(t.var, cc("univ"), conj_chain(terms, self.formula(t.body)))

    # -- formulas ----------------------------------------------------------

    def _guard_terms(self, body, binders, label: str):
        """Guard terms for the binder group, interleaved in source order.

        binders is an ordered list of (name, is_row) pairs.
        """
        occ = guardmod.guards_for(
            body,
            {n for n, _ in binders},
            self.sig,
            self.resolve,
            self.expand_known_rows,
        )
        subjects = {n: Var(n, LIST if is_row else IOTA) for n, is_row in binders}
        if self.collect_explanations:
            lines = guardmod.explain(occ)
            if lines:
                shown = ", ".join(("@" if r else "?") + n for n, r in binders)
                self.explanations.append(f"{label} {shown}:")
                self.explanations.extend(lines)
        return guardmod.merge_guard_chain(occ, subjects)

    def formula(self, f):
        if isinstance(f, sumo.Bot):
            return Bot()
        if isinstance(f, sumo.Top):
            return Top()
        if isinstance(f, sumo.Not):
            return Neg(self.formula(f.body))
        if isinstance(f, sumo.Impl):
            return Imp(self.formula(f.ante), self.formula(f.cons))
        if isinstance(f, sumo.Iff):
            return Iff(self.formula(f.left), self.formula(f.right))
        if isinstance(f, sumo.And):
            items = [self.formula(i) for i in f.items]
            return conj_chain(items[:-1], items[-1])
        if isinstance(f, sumo.Or):
            items = [self.formula(i) for i in f.items]
            out = items[-1]
            for g in reversed(items[:-1]):
                out = Disj(g, out)
            return out
        if isinstance(f, sumo.ForallVars):
            binders = [(n, False) for n in f.names]
            gts = self._guard_terms(f.body, binders, "forall")
            out = imp_chain(gts, self.formula(f.body))
            for n in reversed(f.names):
                out = All(n, IOTA, out)
            return out
        if isinstance(f, sumo.ExistsVars):
            binders = [(n, False) for n in f.names]
            gts = self._guard_terms(f.body, binders, "exists")
            out = conj_chain(gts, self.formula(f.body))
            for n in reversed(f.names):
                out = Ex(n, IOTA, out)
            return out
        if isinstance(f, sumo.ForallRow):
            gts = self._guard_terms(f.body, [(f.name, True)], "forall")
            return All(f.name, LIST, imp_chain(gts, self.formula(f.body)))
        if isinstance(f, sumo.ExistsRow):
            gts = self._guard_terms(f.body, [(f.name, True)], "exists")
            return Ex(f.name, LIST, conj_chain(gts, self.formula(f.body)))
        if isinstance(f, sumo.Eq):
            return Eq(self.term(f.left), self.term(f.right))
        if isinstance(f, sumo.Instance):
            return Mem(self.term(f.member), self.term(f.cls))
        if isinstance(f, sumo.Subclass):
            return Subq(self.term(f.sub), self.term(f.sup))
        if isinstance(f, sumo.Lt):
            return self._arith_atom("arith_lt", f.left, f.right)
        if isinstance(f, sumo.Le):
            return self._arith_atom("arith_leq", f.left, f.right)
        if isinstance(f, sumo.RelAtom):
            return App(cc("istrue"), self.apply_term(f.head, f.spine))
        raise TranslateError(f"not a formula: {f!r}")

    def _arith_atom(self, op_name, left, right):
        args = mk_list([self.term(left), self.term(right)])
        return App(cc("istrue"), app(cc("ap"), cc(op_name), App(cc("listset"), args)))

    # -- closing -----------------------------------------------------------

    def close_assertion(self, f):
        """Universally close free variables, guarded by implication."""
        self._avoid = _all_var_names(f)
        frees = sumo.formula_free_vars(f)
        body = self.formula(f)
        if frees:
            gts = self._guard_terms(f, frees, "assertion free")
            body = imp_chain(gts, body)
            for name, is_row in reversed(frees):
                body = All(name, LIST if is_row else IOTA, body)
        return body

    def close_query(self, f):
        """Existentially close free variables, guards conjoined."""
        self._avoid = _all_var_names(f)
        frees = sumo.formula_free_vars(f)
        body = self.formula(f)
        if frees:
            gts = self._guard_terms(f, frees, "query free")
            body = conj_chain(gts, body)
            for name, is_row in reversed(frees):
                body = Ex(name, LIST if is_row else IOTA, body)
        return body

    def take_explanations(self) -> list:
        out, self.explanations = self.explanations, []
        return out

    # -- relation facts ----------------------------------------------------

    def relation_facts(self, name: str) -> list:
        """(premise_name, term) facts pinning arity and argument domains."""
        info = self.sig.info(name)
        if info is None or not info.arg_domain:
            return []
        rel = self.resolve(name)
        base = mangle(name)
        facts = [
            (f"rel_{base}_arity", Eq(App(cc("arity"), rel), ord_of(info.min_arity))),
            (
                f"rel_{base}_vararity",
                App(cc("vararity"), rel) if info.var_arity else Neg(App(cc("vararity"), rel)),
            ),
        ]
        slots = info.min_arity + (1 if info.var_arity else 0)
        for j in range(slots):
            slot = min(j + 1, info.min_arity)
            cls, mode = info.arg_domain[slot]
            dom = self.resolve(cls)
            if mode == sigmod.MODE_SUBCLASS:
                dom = App(cc("power"), dom)
            facts.append(
                (f"rel_{base}_domseq{j}", Eq(app(cc("domseq"), rel, ord_of(j)), dom))
            )
        return facts


# ---------------------------------------------------------------------------
# File-level driving


@dataclass
class Unit:
    name: str
    term: object
    span: Span
    kind: str = "kb"  # kb | local | conjecture


@dataclass
class SkipNote:
    file: str
    index: int
    reason: str
    span: Span


@dataclass
class Problem:
    premises: list  # (name, role, term)
    conjecture: object  # host term
    comments: list = field(default_factory=list)
    explanations: list = field(default_factory=list)


def _stem(path: str) -> str:
    import os

    base = os.path.basename(path)
    if base.endswith(".kif"):
        base = base[: -len(".kif")]
    return "".join(ch if (ch.isascii() and ch.isalnum()) else "_" for ch in base)


def load_lowered(path: str, skip_heads=sumo.DEFAULT_SKIP_HEADS) -> list:
    """Parse and lower every form in the file, in source order."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return [sumo.lower(form, skip_heads) for form in parse_forms(text, path)]


def collect_signature(paths, skip_heads=sumo.DEFAULT_SKIP_HEADS, keep_first_on_conflict=True):
    """Signature from the assertions of all files, variadic closure applied."""
    assertions = []
    for path in paths:
        for item in load_lowered(path, skip_heads):
            if isinstance(item, sumo.Assertion):
                assertions.append(item)
    sig = sigmod.collect(assertions, keep_first_on_conflict=keep_first_on_conflict)
    return sigmod.close_vararity(sig)


def translate_file(tr: Translator, path: str, kind: str = "kb", skip_heads=sumo.DEFAULT_SKIP_HEADS):
    """Translate one file into premise units plus an optional query.

    Returns (units, query_term, skips).  Premise names key on the file stem
    and the source position of the form, so they stay stable when neighbors
    are edited.
    """
    stem = _stem(path)
    prefix = "kb_" + stem + "_" if kind == "kb" else "local_"
    units: list = []
    skips: list = []
    query_term = None
    for index, item in enumerate(load_lowered(path, skip_heads)):
        if isinstance(item, sumo.Skipped):
            skips.append(SkipNote(path, index, item.reason, item.span))
        elif isinstance(item, sumo.Query):
            if query_term is not None:
                raise TranslateError("more than one query form", item.span)
            query_term = tr.close_query(item.formula)
        else:
            term = tr.close_assertion(item.formula)
            units.append(Unit(f"{prefix}{index}", term, item.span, kind))
    return units, query_term, skips


def _needed_catalog_names(terms) -> set:
    from .hostterm import const_names, constructor_uses

    needed: set = set()
    for term in terms:
        for name in const_names(term):
            if name in CATALOG:
                needed.add(name)
        uses = constructor_uses(term)
        for ctor in ("in", "subq", "ite"):
            if ctor in uses:
                needed.add(ctor)
        if "sep" in uses:
            needed.add("in")
    return needed


def build_problem(
    tr: Translator,
    kb_units: list,
    local_units: list,
    conjecture,
    comments: list | None = None,
) -> Problem:
    """Assemble background, relation facts, and translated premises.

    Relation facts are emitted for every source relation mentioned so far
    that has declared argument domains, in first-mention order.
    """
    fact_premises = []
    for host_name, src_name in list(tr.minted.items()):
        for fact_name, term in tr.relation_facts(src_name):
            fact_premises.append((fact_name, "axiom", term))

    main = [(u.name, "axiom", u.term) for u in kb_units + local_units]
    all_terms = [t for _, _, t in fact_premises] + [t for _, _, t in main] + [conjecture]
    background = CATALOG.background(_needed_catalog_names(all_terms))

    premises = list(background) + fact_premises + main
    return Problem(
        premises=premises,
        conjecture=conjecture,
        comments=list(comments or []),
        explanations=tr.take_explanations(),
    )


def select_premises(problem: Problem, names: list) -> Problem:
    """Restrict to the named premises, preserving order; unknown names fail."""
    known = {name for name, _, _ in problem.premises}
    missing = [n for n in names if n not in known]
    if missing:
        raise UnknownPremiseName(f"unknown premise name(s): {', '.join(missing)}")
    keep = set(names)
    return Problem(
        premises=[p for p in problem.premises if p[0] in keep],
        conjecture=problem.conjecture,
        comments=problem.comments,
        explanations=problem.explanations,
    )


def translate_query_job(
    kb_paths: list,
    query_path: str,
    skip_heads=sumo.DEFAULT_SKIP_HEADS,
    expand_known_rows: bool = False,
    collect_explanations: bool = False,
    selection: list | None = None,
):
    """End-to-end: signature pass, KB translation, query problem assembly.

    Returns (problem, skips, translator).
    """
    sig = collect_signature(list(kb_paths) + [query_path], skip_heads)
    tr = Translator(sig, expand_known_rows, collect_explanations)
    kb_units: list = []
    skips: list = []
    for path in kb_paths:
        units, query, file_skips = translate_file(tr, path, "kb", skip_heads)
        if query is not None:
            raise TranslateError(f"query form inside knowledge base file {path}")
        kb_units.extend(units)
        skips.extend(file_skips)
    local_units, conjecture, q_skips = translate_file(tr, query_path, "local", skip_heads)
    skips.extend(q_skips)
    if conjecture is None:
        raise TranslateError(f"no query form in {query_path}")
    comments = [
        f"skipped {s.file}:{s.span.line}: {s.reason}" for s in skips
    ]
    problem = build_problem(tr, kb_units, local_units, conjecture, comments)
    if selection is not None:
        problem = select_premises(problem, selection)
    return problem, skips, tr
