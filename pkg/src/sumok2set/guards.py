"""Type-guard inference for quantified variables.

Each use of a variable as an argument of an applied relation contributes a
membership guard, keyed by the argument position.  Uses as the first
argument of instance contribute membership in the entity universe.  Row
variables pick up whole-spine domain conditions phrased with dom_of.  Guard
occurrences carry a global position so closing code can interleave guards
for several variables in source order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import signature as sigmod
from . import sumo
from .catalog import cc, ord_of
from .hostterm import App, Eq, IOTA, Ite, Lam, Mem, Subq, Var, app

MEMBER = "member"
SUBSET = "subset"


@dataclass(frozen=True)
class MemDomseqm:
    relation: object  # host term for the applied relation
    index: int  # 0-based argument position
    origin: str = field(default="use", compare=False)

    def to_term(self, subject):
        return Mem(subject, app(cc("domseqm"), self.relation, ord_of(self.index)))

    def describe(self) -> str:
        return f"in domseqm of {_describe(self.relation)} at {self.index}"


@dataclass(frozen=True)
class MemClass:
    cls: object
    mode: str  # MEMBER or SUBSET
    origin: str = field(default="use", compare=False)

    def to_term(self, subject):
        if self.mode == SUBSET:
            return Subq(subject, self.cls)
        return Mem(subject, self.cls)

    def describe(self) -> str:
        rel = "subset of" if self.mode == SUBSET else "member of"
        suffix = f" [{self.origin}]" if self.origin != "use" else ""
        return f"{rel} {_describe(self.cls)}{suffix}"


@dataclass(frozen=True)
class RowDomOf:
    relation: object

    def to_term(self, subject):
        r = self.relation
        return app(
            cc("dom_of"),
            App(cc("vararity"), r),
            App(cc("arity"), r),
            App(cc("domseq"), r),
            subject,
        )

    def describe(self) -> str:
        return f"spine in dom_of of {_describe(self.relation)}"


@dataclass(frozen=True)
class RowDomOfKnown:
    var_arity: bool
    min_arity: int
    domains: tuple  # host class terms, 0-based, template included when variadic

    def to_term(self, subject):
        chain = cc("emptyset")
        ix = Var("I", IOTA)
        for j in range(len(self.domains) - 1, -1, -1):
            chain = Ite(Eq(ix, ord_of(j)), self.domains[j], chain)
        dlam = Lam("I", IOTA, chain)
        head = cc("dom_of_varar") if self.var_arity else cc("dom_of_fixedar")
        return app(head, ord_of(self.min_arity), dlam, subject)

    def describe(self) -> str:
        kind = "variadic" if self.var_arity else "fixed"
        return f"spine in expanded {kind} domain of arity {self.min_arity}"


def _describe(term) -> str:
    from .hostterm import Const

    if isinstance(term, Const):
        return term.name
    if isinstance(term, Var):
        return "?" + term.name
    return repr(term)


def _hvar(name: str) -> Var:
    return Var(name, IOTA)


def guards_for(formula, scope, sig, resolve, expand_known_rows: bool = False) -> dict:
    """Map each scoped variable name to its ordered (position, guard) list.

    Guards are deduplicated structurally per variable, first occurrence
    winning; the position counter is global so callers can interleave the
    chains of several variables in source order.
    """
    occ: dict = {name: [] for name in scope}
    counter = [0]

    def add(name, shadowed, guard):
        if guard is None or name not in occ or name in shadowed:
            return
        pos = counter[0]
        counter[0] += 1
        if any(g == guard for _, g in occ[name]):
            return
        occ[name].append((pos, guard))

    def positional_guard(head, j):
        if isinstance(head, sumo.Var):
            return MemDomseqm(_hvar(head.name), j)
        if isinstance(head, sumo.Const):
            info = sig.info(head.name)
            if info is None or not info.arg_domain:
                return None
            slot = j + 1 if j + 1 <= info.min_arity else info.min_arity
            cls, mode = info.arg_domain[slot]
            if mode == sigmod.MODE_SUBCLASS:
                return MemClass(resolve(cls), SUBSET)
            return MemDomseqm(resolve(head.name), j)
        return None

    def row_guard(head):
        if isinstance(head, sumo.Var):
            return RowDomOf(_hvar(head.name))
        if isinstance(head, sumo.Const):
            info = sig.info(head.name)
            if expand_known_rows and info is not None and info.arg_domain:
                domains = []
                for idx in range(1, info.min_arity + 1):
                    cls, mode = info.arg_domain[idx]
                    host = resolve(cls)
                    if mode == sigmod.MODE_SUBCLASS:
                        host = App(cc("power"), host)
                    domains.append(host)
                if info.var_arity and domains:
                    domains.append(domains[-1])
                return RowDomOfKnown(info.var_arity, info.min_arity, tuple(domains))
            return RowDomOf(resolve(head.name))
        return None

    def walk_spine(head, spine, shadowed):
        if isinstance(spine, sumo.TermSpine):
            for j, item in enumerate(spine.items):
                if isinstance(item, sumo.Var):
                    add(item.name, shadowed, positional_guard(head, j))
                walk_term(item, shadowed)
            return
        for j, item in enumerate(spine.prefix):
            if isinstance(item, sumo.Var):
                add(item.name, shadowed, positional_guard(head, j))
            walk_term(item, shadowed)
        add(spine.row, shadowed, row_guard(head))
        for item in spine.suffix:
            # indices after a row variable are not statically known
            walk_term(item, shadowed)

    def walk_term(t, shadowed):
        if isinstance(t, sumo.Apply):
            walk_spine(t.head, t.spine, shadowed)
        elif isinstance(t, sumo.Kappa):
            walk_formula(t.body, shadowed | {t.var})
        elif isinstance(t, sumo.Arith):
            walk_term(t.left, shadowed)
            walk_term(t.right, shadowed)

    def range_heuristic(a, b, shadowed):
        if not (isinstance(a, sumo.Var) and isinstance(b, sumo.Apply)):
            return
        if not isinstance(b.head, sumo.Const):
            return
        info = sig.info(b.head.name)
        if info is None or info.range is None:
            return
        cls, mode = info.range
        guard_mode = SUBSET if mode == sigmod.MODE_SUBCLASS else MEMBER
        add(a.name, shadowed, MemClass(resolve(cls), guard_mode, origin="range-heuristic"))

    def walk_formula(f, shadowed):
        if isinstance(f, (sumo.Bot, sumo.Top)):
            return
        if isinstance(f, sumo.Not):
            walk_formula(f.body, shadowed)
        elif isinstance(f, sumo.Impl):
            walk_formula(f.ante, shadowed)
            walk_formula(f.cons, shadowed)
        elif isinstance(f, sumo.Iff):
            walk_formula(f.left, shadowed)
            walk_formula(f.right, shadowed)
        elif isinstance(f, (sumo.And, sumo.Or)):
            for item in f.items:
                walk_formula(item, shadowed)
        elif isinstance(f, (sumo.ForallVars, sumo.ExistsVars)):
            walk_formula(f.body, shadowed | set(f.names))
        elif isinstance(f, (sumo.ForallRow, sumo.ExistsRow)):
            walk_formula(f.body, shadowed | {f.name})
        elif isinstance(f, sumo.Instance):
            if isinstance(f.member, sumo.Var):
                add(
                    f.member.name,
                    shadowed,
                    MemClass(cc("entity"), MEMBER, origin="instance-arg"),
                )
            walk_term(f.member, shadowed)
            walk_term(f.cls, shadowed)
        elif isinstance(f, sumo.Eq):
            range_heuristic(f.left, f.right, shadowed)
            range_heuristic(f.right, f.left, shadowed)
            walk_term(f.left, shadowed)
            walk_term(f.right, shadowed)
        elif isinstance(f, sumo.Subclass):
            walk_term(f.sub, shadowed)
            walk_term(f.sup, shadowed)
        elif isinstance(f, (sumo.Le, sumo.Lt)):
            walk_term(f.left, shadowed)
            walk_term(f.right, shadowed)
        elif isinstance(f, sumo.RelAtom):
            walk_spine(f.head, f.spine, shadowed)
        else:
            raise TypeError(f"not a formula: {f!r}")

    walk_formula(formula, frozenset())
    return occ


def merge_guard_chain(occ: dict, subjects: dict) -> list:
    """Interleave guards of several variables by global source position.

    subjects maps variable name to its host term; the result is the guard
    terms in ascending position order.
    """
    flat = []
    for name, entries in occ.items():
        for pos, guard in entries:
            flat.append((pos, name, guard))
    flat.sort(key=lambda t: t[0])
    return [guard.to_term(subjects[name]) for _, name, guard in flat]


def explain(occ: dict) -> list:
    """Human-readable guard derivation lines, one per guard occurrence."""
    flat = []
    for name, entries in occ.items():
        for pos, guard in entries:
            flat.append((pos, name, guard))
    flat.sort(key=lambda t: t[0])
    return [f"  {name}: {guard.describe()}" for _, name, guard in flat]
