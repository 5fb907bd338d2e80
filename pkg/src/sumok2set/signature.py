"""Relation signature analysis over lowered assertions.

Collects ground typing declarations (domain, domainSubclass, range,
rangeSubclass, subrelation, instance, subclass), finalizes per-constant
records, and closes the variable-arity judgement under the class
hierarchy by fixpoint iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sumo
from .sexpr import Span

MODE_INSTANCE = "instance"
MODE_SUBCLASS = "subclass"


class SignatureError(Exception):
    def __init__(self, message: str, span: Span | None = None):
        if span is not None:
            message = f"{span}: {message}"
        super().__init__(message)
        self.span = span


class ConflictingDomain(SignatureError):
    pass


class NonGroundDeclaration(SignatureError):
    pass


@dataclass
class ConstInfo:
    name: str
    min_arity: int = 0
    var_arity: bool = False
    arg_domain: dict = field(default_factory=dict)  # 1-based index -> (class, mode)
    range: tuple | None = None  # (class, mode)
    subrelation_of: list = field(default_factory=list)
    instance_of: list = field(default_factory=list)
    inherited_slots: set = field(default_factory=set)
    inherited_range: bool = False
    filled_slots: set = field(default_factory=set)

    def has_domains(self) -> bool:
        return bool(self.arg_domain)


@dataclass
class AnalysisReport:
    declarations: int = 0
    conflicts: int = 0
    iterations: int = 0


@dataclass
class Signature:
    consts: dict = field(default_factory=dict)  # name -> ConstInfo
    subclass_edges: dict = field(default_factory=dict)  # class -> [superclass]
    report: AnalysisReport = field(default_factory=AnalysisReport)

    def info(self, name: str) -> ConstInfo | None:
        return self.consts.get(name)

    def _ensure(self, name: str) -> ConstInfo:
        if name not in self.consts:
            self.consts[name] = ConstInfo(name)
        return self.consts[name]


_BUILTIN_CLASS_NAMES = {
    sumo.REAL: "RealNumber",
    sumo.NEGREAL: "NegativeRealNumber",
    sumo.NONNEGREAL: "NonnegativeRealNumber",
}


def _ground_const(term, what: str, span) -> str:
    if isinstance(term, sumo.Builtin):
        return _BUILTIN_CLASS_NAMES[term.which]
    if not isinstance(term, sumo.Const):
        raise NonGroundDeclaration(f"{what} declaration is not ground", span)
    return term.name


def _decl_index(term, span) -> int:
    if not isinstance(term, sumo.Rat) or term.scale != 0 or term.num < 1:
        raise NonGroundDeclaration("argument index must be a positive integer", span)
    return term.num


def _record_domain(sig, items, mode, span, keep_first, report):
    if len(items) != 3:
        raise NonGroundDeclaration("domain declaration expects three arguments", span)
    rel = _ground_const(items[0], "domain", span)
    idx = _decl_index(items[1], span)
    cls = _ground_const(items[2], "domain", span)
    info = sig._ensure(rel)
    old = info.arg_domain.get(idx)
    if old is not None and old != (cls, mode):
        report.conflicts += 1
        if not keep_first:
            raise ConflictingDomain(
                f"conflicting domain for {rel} at {idx}: {old[0]} vs {cls}", span
            )
        return
    info.arg_domain[idx] = (cls, mode)
    info.min_arity = max(info.min_arity, idx)
    report.declarations += 1


def _record_range(sig, items, mode, span, keep_first, report):
    if len(items) != 2:
        raise NonGroundDeclaration("range declaration expects two arguments", span)
    rel = _ground_const(items[0], "range", span)
    cls = _ground_const(items[1], "range", span)
    info = sig._ensure(rel)
    if info.range is not None and info.range != (cls, mode):
        report.conflicts += 1
        if not keep_first:
            raise ConflictingDomain(
                f"conflicting range for {rel}: {info.range[0]} vs {cls}", span
            )
        return
    info.range = (cls, mode)
    report.declarations += 1


def collect(assertions, keep_first_on_conflict: bool = False) -> Signature:
    """Fold declaration facts out of lowered assertions into a Signature.

    Only ground top-level facts count as declarations; anything else is left
    for the translator.  Quantified or variable-containing domain/range/
    subrelation forms raise NonGroundDeclaration.
    """
    sig = Signature()
    report = sig.report
    for a in assertions:
        f = a.formula if isinstance(a, sumo.Assertion) else a
        span = a.span if isinstance(a, sumo.Assertion) else None
        if isinstance(f, sumo.RelAtom) and isinstance(f.head, sumo.Const):
            head = f.head.name
            if not isinstance(f.spine, sumo.TermSpine):
                continue
            items = f.spine.items
            if head == "domain":
                _record_domain(sig, items, MODE_INSTANCE, span, keep_first_on_conflict, report)
            elif head == "domainSubclass":
                _record_domain(sig, items, MODE_SUBCLASS, span, keep_first_on_conflict, report)
            elif head == "range":
                _record_range(sig, items, MODE_INSTANCE, span, keep_first_on_conflict, report)
            elif head == "rangeSubclass":
                _record_range(sig, items, MODE_SUBCLASS, span, keep_first_on_conflict, report)
            elif head == "subrelation":
                if len(items) != 2:
                    raise NonGroundDeclaration("subrelation expects two arguments", span)
                sub = _ground_const(items[0], "subrelation", span)
                sup = _ground_const(items[1], "subrelation", span)
                info = sig._ensure(sub)
                if sup not in info.subrelation_of:
                    info.subrelation_of.append(sup)
                sig._ensure(sup)
                report.declarations += 1
        elif isinstance(f, sumo.Instance):
            if isinstance(f.member, sumo.Const) and isinstance(f.cls, sumo.Const):
                info = sig._ensure(f.member.name)
                if f.cls.name not in info.instance_of:
                    info.instance_of.append(f.cls.name)
                report.declarations += 1
        elif isinstance(f, sumo.Subclass):
            if isinstance(f.sub, sumo.Const) and isinstance(f.sup, sumo.Const):
                sig.subclass_edges.setdefault(f.sub.name, [])
                if f.sup.name not in sig.subclass_edges[f.sub.name]:
                    sig.subclass_edges[f.sub.name].append(f.sup.name)
                report.declarations += 1
    _inherit_subrelations(sig)
    _fill_gaps(sig)
    return sig


def _inherit_subrelations(sig: Signature) -> None:
    # relations with no declarations of their own take the supers' slots;
    # iterate so chains propagate regardless of declaration order
    changed = True
    while changed:
        changed = False
        for name in sorted(sig.consts):
            info = sig.consts[name]
            if info.has_domains() and info.range is not None:
                continue
            for sup_name in info.subrelation_of:
                sup = sig.consts.get(sup_name)
                if sup is None:
                    continue
                if not info.has_domains() and sup.has_domains():
                    info.arg_domain = dict(sup.arg_domain)
                    info.min_arity = max(info.min_arity, sup.min_arity)
                    info.inherited_slots = set(info.arg_domain)
                    changed = True
                if info.range is None and sup.range is not None:
                    info.range = sup.range
                    info.inherited_range = True
                    changed = True


def _fill_gaps(sig: Signature) -> None:
    # a partially declared relation keeps contiguous slots 1..min_arity;
    # undeclared slots inside the span default to Entity membership
    for info in sig.consts.values():
        for idx in range(1, info.min_arity + 1):
            if idx not in info.arg_domain:
                info.arg_domain[idx] = ("Entity", MODE_INSTANCE)
                info.filled_slots.add(idx)


VARIABLE_ARITY_CLASS = "VariableArityRelation"


def close_vararity(sig: Signature) -> Signature:
    """Mark constants as variable-arity under the class hierarchy, to fixpoint.

    A constant is variable-arity when it is an instance of a class that reaches
    VariableArityRelation through subclass edges.  The sweep is monotone and
    idempotent; the iteration count lands in the report.
    """
    var_classes = {VARIABLE_ARITY_CLASS}
    iterations = 0
    while True:
        iterations += 1
        changed = False
        for cls in sorted(sig.subclass_edges):
            if cls in var_classes:
                continue
            if any(sup in var_classes for sup in sig.subclass_edges[cls]):
                var_classes.add(cls)
                changed = True
        for name in sorted(sig.consts):
            info = sig.consts[name]
            if info.var_arity:
                continue
            if any(cls in var_classes for cls in info.instance_of):
                info.var_arity = True
                changed = True
        if not changed:
            break
    sig.report.iterations = iterations
    return sig


def dump(sig: Signature) -> str:
    """Deterministic one-constant-per-line debug dump."""
    lines = []
    for name in sorted(sig.consts):
        info = sig.consts[name]
        doms = []
        for idx in sorted(info.arg_domain):
            cls, mode = info.arg_domain[idx]
            note = ""
            if idx in info.inherited_slots:
                note = ",inherited"
            elif idx in info.filled_slots:
                note = ",filled"
            doms.append(f"dom{idx}={cls}({mode}{note})")
        rng = "-"
        if info.range is not None:
            rng = f"{info.range[0]}({info.range[1]}{',inherited' if info.inherited_range else ''})"
        lines.append(
            f"{name} minArity={info.min_arity} varArity={str(info.var_arity).lower()} "
            + " ".join(doms)
            + (" " if doms else "")
            + f"range={rng}"
            + (f" subrelationOf={','.join(info.subrelation_of)}" if info.subrelation_of else "")
            + (f" instanceOf={','.join(info.instance_of)}" if info.instance_of else "")
        )
    return "\n".join(lines) + ("\n" if lines else "")
