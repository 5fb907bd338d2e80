"""Brute-force checking of identities over hereditarily finite sets.

Terms of the host language are evaluated in the universe of hereditarily
finite sets: individuals are HfSet values, list encodings are finite-support
functions defaulting to the empty set, booleans are Python booleans, and
higher types are closures.  Ordinal arithmetic recurses on the von Neumann
structure of its arguments rather than converting to machine integers, so a
comparison against int arithmetic is a genuinely independent check.

Quantifiers are handled when bounded: forall over a membership guard whose
bound evaluates, forall over booleans, and the matching exists shapes.
Candidate identities are read from lemma files whose syntax mirrors the
rendered problem syntax, quantified over small generator universes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .catalog import CATALOG
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
    OMICRON,
    Sep,
    Subq,
    Top,
    Var,
)
from . import th0

DEFAULT_FUEL = 10**6
DEFAULT_HORIZON = 32


class OracleError(Exception):
    pass


class OutOfFuel(OracleError):
    pass


class Unsupported(OracleError):
    pass


class UninterpretedConstant(OracleError):
    pass


# ---------------------------------------------------------------------------
# Values


class HfSet:
    """Canonical hereditarily finite set."""

    __slots__ = ("elems", "_key", "_hash")

    def __init__(self, elems=()):
        self.elems = frozenset(elems)
        self._key = None
        self._hash = None

    def key(self) -> str:
        if self._key is None:
            self._key = "{" + ",".join(sorted(e.key() for e in self.elems)) + "}"
        return self._key

    def __eq__(self, other):
        return isinstance(other, HfSet) and self.elems == other.elems

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.elems)
        return self._hash

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(sorted(self.elems, key=HfSet.key))

    def __contains__(self, item):
        return item in self.elems

    def __repr__(self):
        return self.key()


EMPTY = HfSet()


def hfset(*elems) -> HfSet:
    return HfSet(elems)


def nat(n: int) -> HfSet:
    out = EMPTY
    for _ in range(n):
        out = HfSet(out.elems | {out})
    return out


def is_nat(x: HfSet):
    """The integer n when x is the von Neumann numeral n, else None."""
    n = 0
    probe = EMPTY
    while probe != x:
        if probe not in x.elems:
            return None
        probe = HfSet(probe.elems | {probe})
        n += 1
        if n > len(x.elems):
            return None
    return n


def pred(x: HfSet) -> HfSet:
    """Predecessor of a nonzero von Neumann numeral: its maximal element."""
    for e in x.elems:
        if HfSet(e.elems | {e}) == x:
            return e
    raise OracleError(f"not a successor numeral: {x!r}")


def pair(a: HfSet, b: HfSet) -> HfSet:
    return hfset(hfset(a), hfset(a, b))


@dataclass(frozen=True)
class HfFn:
    """Finite-support function on HF sets, empty set off the support."""

    table: tuple  # ((arg, val), ...) sorted by arg key, no EMPTY values

    def __call__(self, x: HfSet) -> HfSet:
        for k, v in self.table:
            if k == x:
                return v
        return EMPTY


def hffn(mapping) -> HfFn:
    items = [(k, v) for k, v in mapping.items() if v != EMPTY]
    items.sort(key=lambda kv: kv[0].key())
    return HfFn(tuple(items))


def mk_hflist(entries) -> HfFn:
    return hffn({nat(i): hfset(e) for i, e in enumerate(entries)})


class _Omega:
    """Stand-in for the set of natural numbers; only membership is decided."""

    def __repr__(self):
        return "omega"


OMEGA = _Omega()


# ---------------------------------------------------------------------------
# Native constant meanings


def _ord_add(a, b):
    if b == EMPTY:
        return a
    s = _ord_add(a, pred(b))
    return HfSet(s.elems | {s})


def _ord_mult(a, b):
    if b == EMPTY:
        return EMPTY
    return _ord_add(_ord_mult(a, pred(b)), a)


def _ord_exp(a, b):
    if b == EMPTY:
        return nat(1)
    return _ord_mult(_ord_exp(a, pred(b)), a)


def _ord_sub(a, b):
    if b == EMPTY:
        return a
    if a == EMPTY:
        return EMPTY
    return _ord_sub(pred(a), pred(b))


def _powerset(x: HfSet) -> HfSet:
    elems = list(x.elems)
    subsets = []
    for r in range(len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            subsets.append(HfSet(combo))
    return HfSet(subsets)


def _mem(a, b) -> bool:
    if isinstance(b, _Omega):
        return isinstance(a, HfSet) and is_nat(a) is not None
    if not isinstance(b, HfSet):
        raise Unsupported(f"membership in non-set {b!r}")
    return a in b


def _subq(a, b) -> bool:
    if isinstance(a, _Omega):
        raise Unsupported("omega on the left of subset")
    if isinstance(b, _Omega):
        return all(is_nat(e) is not None for e in a.elems)
    return a.elems <= b.elems


class Evaluator:
    def __init__(self, interp=None, horizon: int = DEFAULT_HORIZON, fuel: int = DEFAULT_FUEL):
        self.horizon = horizon
        self.fuel = fuel
        self.interp = dict(self._native())
        if interp:
            self.interp.update(interp)
        self._defn_cache: dict = {}

    # -- constant table ----------------------------------------------------

    def _native(self):
        def untag(x):
            if isinstance(x, HfSet) and len(x) == 1:
                return next(iter(x))
            return EMPTY

        def cons(x):
            def with_list(l):
                fn = self.to_list_fn(l)
                table = {nat(0): hfset(x)}
                for k, v in fn.table:
                    table[HfSet(k.elems | {k})] = v
                return hffn(table)

            return with_list

        def len_of(l):
            fn = self.to_list_fn(l)
            return HfSet(k for k, _ in fn.table if is_nat(k) is not None)

        def listset(l):
            fn = self.to_list_fn(l)
            return HfSet(pair(k, v) for k, v in fn.table)

        return {
            "emptyset": EMPTY,
            "in": lambda a: lambda b: _mem(a, b),
            "subq": lambda a: lambda b: _subq(a, b),
            "power": _powerset,
            "ite": lambda c: lambda t: lambda e: t if c else e,
            "ordsucc": lambda x: HfSet(x.elems | {x}),
            "omega": OMEGA,
            "nat_p": lambda x: isinstance(x, HfSet) and is_nat(x) is not None,
            **{f"ord{k}": nat(k) for k in range(11)},
            "ord_add": lambda a: lambda b: self._spend(_ord_add)(a, b),
            "ord_mult": lambda a: lambda b: self._spend(_ord_mult)(a, b),
            "ord_exp": lambda a: lambda b: self._spend(_ord_exp)(a, b),
            "ord_sub": lambda a: lambda b: self._spend(_ord_sub)(a, b),
            "tag": lambda x: hfset(x),
            "untag": untag,
            "nil": HfFn(()),
            "cons": cons,
            "len": len_of,
            "listset": listset,
            "istrue": lambda x: _mem(EMPTY, x),
            "boolset": lambda p: nat(1) if p else nat(0),
        }

    def _spend(self, fn):
        def inner(*args):
            self.use_fuel(4)
            return fn(*args)

        return inner

    def use_fuel(self, n: int = 1):
        self.fuel -= n
        if self.fuel < 0:
            raise OutOfFuel("evaluation fuel exhausted")

    def to_list_fn(self, value) -> HfFn:
        if isinstance(value, HfFn):
            return value
        if callable(value):
            table = {}
            for i in range(self.horizon + 1):
                self.use_fuel()
                table[nat(i)] = value(nat(i))
            return hffn(table)
        raise Unsupported(f"not a list value: {value!r}")

    # -- evaluation --------------------------------------------------------

    def const_value(self, name: str):
        if name in self.interp:
            return self.interp[name]
        if name in self._defn_cache:
            return self._defn_cache[name]
        defn = CATALOG.defn_of(name) if name in CATALOG else None
        if defn is None:
            raise UninterpretedConstant(name)
        value = self.eval(defn, {})
        self._defn_cache[name] = value
        return value

    def eval(self, t, env):
        self.use_fuel()
        if isinstance(t, Var):
            if t.name not in env:
                raise Unsupported(f"unbound variable {t.name}")
            return env[t.name]
        if isinstance(t, Const):
            return self.const_value(t.name)
        if isinstance(t, App):
            fn = self.eval(t.fn, env)
            arg = self.eval(t.arg, env)
            return self.apply(fn, arg)
        if isinstance(t, Lam):
            return lambda v, _t=t, _env=env: self.eval(_t.body, {**_env, _t.name: v})
        if isinstance(t, Bot):
            return False
        if isinstance(t, Top):
            return True
        if isinstance(t, Neg):
            return not self.eval(t.body, env)
        if isinstance(t, Imp):
            return (not self.eval(t.ante, env)) or self.eval(t.cons, env)
        if isinstance(t, Conj):
            return self.eval(t.left, env) and self.eval(t.right, env)
        if isinstance(t, Disj):
            return self.eval(t.left, env) or self.eval(t.right, env)
        if isinstance(t, Iff):
            return self.eval(t.left, env) == self.eval(t.right, env)
        if isinstance(t, Eq):
            return self.values_equal(self.eval(t.left, env), self.eval(t.right, env))
        if isinstance(t, Mem):
            return _mem(self.eval(t.elem, env), self.eval(t.container, env))
        if isinstance(t, Subq):
            return _subq(self.eval(t.sub, env), self.eval(t.sup, env))
        if isinstance(t, Ite):
            if self.eval(t.cond, env):
                return self.eval(t.then, env)
            return self.eval(t.other, env)
        if isinstance(t, Sep):
            bound = self.eval(t.bound, env)
            kept = []
            for item in self.members(bound):
                self.use_fuel()
                if self.eval(t.body, {**env, t.name: item}):
                    kept.append(item)
            return HfSet(kept)
        if isinstance(t, All):
            return self.quantify(t, env, universal=True)
        if isinstance(t, Ex):
            return self.quantify(t, env, universal=False)
        raise Unsupported(f"cannot evaluate {t!r}")

    def apply(self, fn, arg):
        if isinstance(fn, HfFn):
            return fn(arg)
        if callable(fn):
            return fn(arg)
        raise Unsupported(f"applied non-function {fn!r}")

    def members(self, value):
        if isinstance(value, _Omega):
            return [nat(i) for i in range(self.horizon + 1)]
        if isinstance(value, HfSet):
            return list(value)
        raise Unsupported(f"iterating non-set {value!r}")

    def quantify(self, t, env, universal: bool):
        if t.ty == OMICRON:
            domain = [False, True]
            body = t.body
        elif t.ty == IOTA:
            body, domain = self._bounded_domain(t, env, universal)
        else:
            raise Unsupported("quantification at function type")
        for value in domain:
            self.use_fuel()
            result = self.eval(body, {**env, t.name: value})
            if universal and not result:
                return False
            if not universal and result:
                return True
        return universal

    def _bounded_domain(self, t, env, universal: bool):
        # forall X. X in S => phi, and exists X. X in S & phi, with S closed
        body = t.body
        if universal and isinstance(body, Imp):
            guard, rest = body.ante, body.cons
        elif not universal and isinstance(body, Conj):
            guard, rest = body.left, body.right
        else:
            raise Unsupported("individual quantifier without a membership bound")
        guard = self._as_mem(guard)
        if (
            guard is not None
            and isinstance(guard[0], Var)
            and guard[0].name == t.name
            and not self._mentions(guard[1], t.name)
        ):
            bound = self.eval(guard[1], env)
            return rest, self.members(bound)
        raise Unsupported("individual quantifier without a membership bound")

    @staticmethod
    def _as_mem(t):
        if isinstance(t, Mem):
            return t.elem, t.container
        if (
            isinstance(t, App)
            and isinstance(t.fn, App)
            and isinstance(t.fn.fn, Const)
            and t.fn.fn.name == "in"
        ):
            return t.fn.arg, t.arg
        return None

    @staticmethod
    def _mentions(t, name: str) -> bool:
        if isinstance(t, Var):
            return t.name == name
        if isinstance(t, App):
            return Evaluator._mentions(t.fn, name) or Evaluator._mentions(t.arg, name)
        if isinstance(t, (Lam, All, Ex)):
            return t.name != name and Evaluator._mentions(t.body, name)
        if isinstance(t, (Imp, Conj, Disj, Iff, Eq)):
            a, b = th0._two(t)
            return Evaluator._mentions(a, name) or Evaluator._mentions(b, name)
        if isinstance(t, Neg):
            return Evaluator._mentions(t.body, name)
        if isinstance(t, Mem):
            return Evaluator._mentions(t.elem, name) or Evaluator._mentions(t.container, name)
        if isinstance(t, Subq):
            return Evaluator._mentions(t.sub, name) or Evaluator._mentions(t.sup, name)
        if isinstance(t, Sep):
            if Evaluator._mentions(t.bound, name):
                return True
            return t.name != name and Evaluator._mentions(t.body, name)
        if isinstance(t, Ite):
            return any(
                Evaluator._mentions(s, name) for s in (t.cond, t.then, t.other)
            )
        return False

    def values_equal(self, a, b) -> bool:
        if isinstance(a, HfSet) and isinstance(b, HfSet):
            return a == b
        if isinstance(a, bool) and isinstance(b, bool):
            return a == b
        if isinstance(a, (HfFn,)) or callable(a) or isinstance(b, (HfFn,)) or callable(b):
            fa = self.to_list_fn(a)
            fb = self.to_list_fn(b)
            return fa == fb
        raise Unsupported(f"cannot compare {a!r} and {b!r}")


# ---------------------------------------------------------------------------
# Generator universes


def sets_of_rank(max_rank: int) -> list:
    """All HF sets of rank at most max_rank, by canonical key."""
    universe = [EMPTY]
    for _ in range(max_rank):
        elems = list(universe)
        universe = []
        for r in range(len(elems) + 1):
            for combo in itertools.combinations(elems, r):
                universe.append(HfSet(combo))
        universe.sort(key=HfSet.key)
    return universe


def hf_lists(max_len: int, entry_rank: int) -> list:
    entries = sets_of_rank(entry_rank)
    out = []
    for n in range(max_len + 1):
        for combo in itertools.product(entries, repeat=n):
            out.append(mk_hflist(combo))
    return out


GENERATOR_SORTS = ("set", "list", "nat", "bool")


def generators(sort: str, set_rank: int = 3, list_len: int = 4, list_entry_rank: int = 2, nat_bound: int = 4):
    if sort == "set":
        return sets_of_rank(set_rank)
    if sort == "list":
        return hf_lists(list_len, list_entry_rank)
    if sort == "nat":
        return [nat(i) for i in range(nat_bound)]
    if sort == "bool":
        return [False, True]
    raise Unsupported(f"unknown generator sort {sort!r}")


_SORT_TYPES = {
    "set": IOTA,
    "nat": IOTA,
    "list": Arrow(IOTA, IOTA),
    "bool": OMICRON,
}


# ---------------------------------------------------------------------------
# Stubs for the abstract signature functions


def _stub_fixed_arity():
    return {
        "vararity": lambda r: False,
        "arity": lambda r: nat(2),
        "domseq": lambda r: lambda i: hfset(i),
    }


STUBS = {"fixed_arity": _stub_fixed_arity}


# ---------------------------------------------------------------------------
# Lemma files


@dataclass
class Claim:
    index: int  # 1-based position among claims
    line: int
    text: str
    binders: list  # (name, sort)
    body: object
    stub: str | None


@dataclass
class ClaimResult:
    claim: Claim
    ok: bool
    checked: int
    counterexample: str | None = None
    error: str | None = None


class LemmaSyntaxError(OracleError):
    pass


def parse_lemmas(text: str, file: str = "<lemmas>") -> list:
    """Claims from a lemma file: one formula per line, # comments, pragmas.

    A line "!stub NAME" switches the signature stub installed for all later
    claims; binder sorts are set, list, nat, and bool.
    """
    claims = []
    stub = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!stub"):
            name = line[len("!stub") :].strip()
            if name == "none":
                stub = None
            elif name in STUBS:
                stub = name
            else:
                raise LemmaSyntaxError(f"{file}:{lineno}: unknown stub {name!r}")
            continue
        try:
            binders, body = _parse_claim(line)
        except th0.Th0Error as err:
            raise LemmaSyntaxError(f"{file}:{lineno}: {err}") from err
        claims.append(Claim(len(claims) + 1, lineno, line, binders, body, stub))
    return claims


def _parse_claim(line: str):
    toks = th0._tokenize_thf(line)
    parser = th0._Parser(toks)
    binders = []
    tok = parser.peek()
    if tok is not None and tok.kind == "!":
        parser.next()
        parser.expect("[")
        while True:
            name = parser.expect_word().text
            parser.expect(":")
            sort = parser.expect_word().text
            if sort not in _SORT_TYPES:
                raise th0.Th0Error(f"unknown sort {sort!r}")
            binders.append((name, sort))
            nxt = parser.next()
            if nxt.kind == "]":
                break
            if nxt.kind != ",":
                raise th0.Th0Error(f"expected , or ] in binder list, found {nxt.text!r}")
        parser.expect(":")
    env = {name: _SORT_TYPES[sort] for name, sort in binders}
    decls = {name: CATALOG.type_of(name) for name in CATALOG.order}
    body = parser.parse_formula(env, decls)
    if parser.peek() is not None:
        tok = parser.peek()
        raise th0.Th0Error(f"trailing input {tok.text!r}", tok.line, tok.col)
    return binders, body


def check_claim(
    claim: Claim,
    horizon: int = DEFAULT_HORIZON,
    fuel: int = DEFAULT_FUEL,
    **generator_bounds,
) -> ClaimResult:
    """Evaluate the claim over all generator assignments for its sorts."""
    interp = STUBS[claim.stub]() if claim.stub else None
    ev = Evaluator(interp=interp, horizon=horizon, fuel=fuel)
    domains = [generators(sort, **generator_bounds) for _, sort in claim.binders]
    names = [name for name, _ in claim.binders]
    checked = 0
    try:
        for values in itertools.product(*domains):
            env = dict(zip(names, values))
            checked += 1
            if not ev.eval(claim.body, env):
                return ClaimResult(
                    claim,
                    ok=False,
                    checked=checked,
                    counterexample=_describe_env(names, values),
                )
    except OracleError as err:
        return ClaimResult(claim, ok=False, checked=checked, error=str(err))
    return ClaimResult(claim, ok=True, checked=checked)


def _describe_env(names, values) -> str:
    parts = []
    for name, value in zip(names, values):
        parts.append(f"{name} = {describe_value(value)}")
    return ", ".join(parts)


def describe_value(value) -> str:
    if isinstance(value, HfSet):
        return value.key()
    if isinstance(value, HfFn):
        n = is_nat(HfSet(k for k, _ in value.table))
        if n is not None:
            entries = []
            for i in range(n):
                v = value(nat(i))
                inner = next(iter(v)) if len(v) == 1 else v
                entries.append(inner.key() if isinstance(inner, HfSet) else repr(inner))
            return "[" + ", ".join(entries) + "]"
        return "fn" + repr(sorted((k.key(), v.key()) for k, v in value.table))
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value)


def run_lemma_file(path: str, horizon: int = DEFAULT_HORIZON, fuel: int = DEFAULT_FUEL, **bounds) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    claims = parse_lemmas(text, path)
    return [check_claim(c, horizon=horizon, fuel=fuel, **bounds) for c in claims]


def format_results(results) -> str:
    lines = []
    for r in results:
        if r.error:
            status = f"ERROR {r.error}"
        elif r.ok:
            status = f"ok ({r.checked} assignments)"
        else:
            status = f"FAIL at {r.counterexample}"
        lines.append(f"claim {r.claim.index} (line {r.claim.line}): {status}")
    bad = sum(1 for r in results if not r.ok)
    lines.append(
        f"{len(results) - bad}/{len(results)} claims hold" if results else "no claims"
    )
    return "\n".join(lines)
