"""Lambda calculus with records, record merge, primitives and a builtin Y.

Classes are fixed points of functions from (class, state) to a record of
methods, and mixins are functions from classes to classes.  ``self`` stands
for ``(class state)`` and ``super`` for ``(argClass state)``.

Reduction is normal order.  ``Y f`` is only unfolded when its result is
demanded: applied to an argument, selected from, or merged onto.  Without
that restriction normal order would unfold the class under the record
fields forever.

Type checking is bidirectional over the fragment that class and mixin bodies
use.  Goals are split into single-spine pieces and each piece is checked
separately; terms outside the fragment raise ``OutsideFragment`` rather than
failing as a mismatch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from . import types_tt as tt
from .types_tt import Arrow, Constant, Intersection, RecordEmpty, RecordField


# terms ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Abstraction:
    binder: str
    body: Term


@dataclass(frozen=True, slots=True)
class Application:
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Selection:
    term: Term
    label: str


@dataclass(frozen=True, slots=True)
class RecordLit:
    entries: tuple[tuple[str, Term], ...] = ()

    def __post_init__(self) -> None:
        labels = [l for l, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in record literal: {labels}")

    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.entries)

    def get(self, label: str) -> Optional[Term]:
        for l, v in self.entries:
            if l == label:
                return v
        return None


@dataclass(frozen=True, slots=True)
class MergeTerm:
    left: Term
    right: RecordLit

    def __post_init__(self) -> None:
        if not isinstance(self.right, RecordLit):
            raise ValueError("the right operand of a merge must be a record literal")


@dataclass(frozen=True, slots=True)
class PrimInt:
    value: int


@dataclass(frozen=True, slots=True)
class PrimBool:
    value: bool


@dataclass(frozen=True, slots=True)
class PrimString:
    value: str


@dataclass(frozen=True, slots=True)
class PrimOp:
    name: str

    def __post_init__(self) -> None:
        if self.name not in ("plus", "eq"):
            raise ValueError(f"unknown primitive {self.name}")


@dataclass(frozen=True, slots=True)
class Fix:
    pass


Term = Union[
    Var, Abstraction, Application, Selection, RecordLit, MergeTerm,
    PrimInt, PrimBool, PrimString, PrimOp, Fix,
]

FIX = Fix()
PLUS = PrimOp("plus")
EQ = PrimOp("eq")


def apply(f: Term, *args: Term) -> Term:
    for a in args:
        f = Application(f, a)
    return f


def let(name: str, value: Term, body: Term) -> Term:
    """``let name = value in body``, which is just substitution."""
    return subst(body, name, value)


class StuckTerm(RuntimeError):
    """A redex-shaped term that has no reduct, such as a missing label."""


class FuelExhausted(RuntimeError):
    """Evaluation did not reach a normal form within the step budget."""


# variables and substitution -------------------------------------------------


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Abstraction):
        return free_vars(t.body) - {t.binder}
    if isinstance(t, Application):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, Selection):
        return free_vars(t.term)
    if isinstance(t, RecordLit):
        return frozenset().union(*(free_vars(v) for _, v in t.entries))
    if isinstance(t, MergeTerm):
        return free_vars(t.left) | free_vars(t.right)
    return frozenset()


def fresh(base: str, avoid: frozenset[str]) -> str:
    stem = base.rstrip("0123456789'") or "x"
    for i in itertools.count(1):
        name = f"{stem}{i}"
        if name not in avoid:
            return name
    raise AssertionError


def subst(t: Term, x: str, n: Term) -> Term:
    """Capture-avoiding ``t[n/x]``."""
    if isinstance(t, Var):
        return n if t.name == x else t
    if isinstance(t, Abstraction):
        if t.binder == x:
            return t
        fv = free_vars(n)
        if t.binder in fv and x in free_vars(t.body):
            y = fresh(t.binder, fv | free_vars(t.body) | {x})
            return Abstraction(y, subst(subst(t.body, t.binder, Var(y)), x, n))
        return Abstraction(t.binder, subst(t.body, x, n))
    if isinstance(t, Application):
        return Application(subst(t.fun, x, n), subst(t.arg, x, n))
    if isinstance(t, Selection):
        return Selection(subst(t.term, x, n), t.label)
    if isinstance(t, RecordLit):
        return RecordLit(tuple((l, subst(v, x, n)) for l, v in t.entries))
    if isinstance(t, MergeTerm):
        return MergeTerm(subst(t.left, x, n), subst(t.right, x, n))
    return t


def alpha_equal(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {})


def _alpha(a: Term, b: Term, ea: dict, eb: dict) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return ea.get(a.name, a.name) == eb.get(b.name, b.name)
    if isinstance(a, Abstraction):
        mark = f"#{len(ea)}"
        return _alpha(a.body, b.body, {**ea, a.binder: mark}, {**eb, b.binder: mark})
    if isinstance(a, Application):
        return _alpha(a.fun, b.fun, ea, eb) and _alpha(a.arg, b.arg, ea, eb)
    if isinstance(a, Selection):
        return a.label == b.label and _alpha(a.term, b.term, ea, eb)
    if isinstance(a, RecordLit):
        return a.labels() == b.labels() and all(
            _alpha(x, y, ea, eb) for (_, x), (_, y) in zip(a.entries, b.entries)
        )
    if isinstance(a, MergeTerm):
        return _alpha(a.left, b.left, ea, eb) and _alpha(a.right, b.right, ea, eb)
    return a == b


# reduction ------------------------------------------------------------------

LEFTMOST_OUTERMOST = "leftmost-outermost"
RIGHTMOST_INNERMOST = "rightmost-innermost"

_LITERALS = (PrimInt, PrimBool, PrimString)


def _is_rec_value(t: Term) -> bool:
    return isinstance(t, Application) and isinstance(t.fun, Fix)


def _is_value(t: Term) -> bool:
    """Closed-form heads that can never turn into something else."""
    if isinstance(t, _LITERALS + (Abstraction, RecordLit, Fix, PrimOp)):
        return True
    if isinstance(t, Application) and isinstance(t.fun, PrimOp):
        return _is_value(t.arg)
    return _is_rec_value(t)


def _unfold(t: Application) -> Term:
    return Application(t.arg, t)


def _delta(op: str, a: Term, b: Term) -> Optional[Term]:
    if op == "plus":
        if isinstance(a, PrimInt) and isinstance(b, PrimInt):
            return PrimInt(a.value + b.value)
    elif type(a) is type(b) and isinstance(a, _LITERALS):
        return PrimBool(a.value == b.value)
    if _is_value(a) and _is_value(b):
        raise StuckTerm(f"primitive {op} applied to non-literal arguments")
    return None


def _contract(t: Term) -> Optional[Term]:
    """The reduct of ``t`` when ``t`` itself is a redex, else None."""
    if isinstance(t, Application):
        f = t.fun
        if isinstance(f, Abstraction):
            return subst(f.body, f.binder, t.arg)
        if _is_rec_value(f):
            return Application(_unfold(f), t.arg)
        if isinstance(f, Application) and isinstance(f.fun, PrimOp):
            return _delta(f.fun.name, f.arg, t.arg)
        if isinstance(f, _LITERALS + (RecordLit,)):
            raise StuckTerm("application of a non-function")
        return None
    if isinstance(t, Selection):
        s = t.term
        if isinstance(s, RecordLit):
            v = s.get(t.label)
            if v is None:
                raise StuckTerm(f"record has no label {t.label}")
            return v
        if _is_rec_value(s):
            return Selection(_unfold(s), t.label)
        if _is_value(s):
            raise StuckTerm(f"selection of {t.label} from a non-record")
        return None
    if isinstance(t, MergeTerm):
        s = t.left
        if isinstance(s, RecordLit):
            right = dict(t.right.entries)
            merged = [(l, right.pop(l, v)) for l, v in s.entries]
            merged += [(l, v) for l, v in t.right.entries if l in right]
            return RecordLit(tuple(merged))
        if _is_rec_value(s):
            return MergeTerm(_unfold(s), t.right)
        if _is_value(s):
            raise StuckTerm("merge onto a non-record")
        return None
    return None


def _children(t: Term) -> list[Term]:
    if isinstance(t, Abstraction):
        return [t.body]
    if isinstance(t, Application):
        return [t.fun, t.arg]
    if isinstance(t, Selection):
        return [t.term]
    if isinstance(t, RecordLit):
        return [v for _, v in t.entries]
    if isinstance(t, MergeTerm):
        return [t.left, t.right]
    return []


def _rebuild(t: Term, i: int, c: Term) -> Term:
    if isinstance(t, Abstraction):
        return Abstraction(t.binder, c)
    if isinstance(t, Application):
        return Application(c, t.arg) if i == 0 else Application(t.fun, c)
    if isinstance(t, Selection):
        return Selection(c, t.label)
    if isinstance(t, RecordLit):
        es = list(t.entries)
        es[i] = (es[i][0], c)
        return RecordLit(tuple(es))
    assert isinstance(t, MergeTerm)
    return MergeTerm(c, t.right) if i == 0 else MergeTerm(t.left, c)


def _step_outer(t: Term) -> Optional[Term]:
    r = _contract(t)
    if r is not None:
        return r
    for i, c in enumerate(_children(t)):
        c2 = _step_outer(c)
        if c2 is not None:
            return _rebuild(t, i, c2)
    return None


def _step_inner(t: Term) -> Optional[Term]:
    cs = _children(t)
    for i in reversed(range(len(cs))):
        c2 = _step_inner(cs[i])
        if c2 is not None:
            return _rebuild(t, i, c2)
    return _contract(t)


def reduce_step(t: Term, strategy: str = LEFTMOST_OUTERMOST) -> Optional[Term]:
    """One reduction step, or None when ``t`` is a normal form."""
    if strategy == LEFTMOST_OUTERMOST:
        return _step_outer(t)
    if strategy == RIGHTMOST_INNERMOST:
        return _step_inner(t)
    raise ValueError(f"unknown strategy {strategy}")


def evaluate(t: Term, fuel: int = 10_000, strategy: str = LEFTMOST_OUTERMOST) -> Term:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for _ in range(fuel):
        nxt = reduce_step(t, strategy)
        if nxt is None:
            return t
        t = nxt
    if reduce_step(t, strategy) is None:
        return t
    raise FuelExhausted(f"no normal form within {fuel} steps")


def show(t: Term) -> str:
    """Render a term in the surface syntax."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, PrimInt):
        return str(t.value)
    if isinstance(t, PrimBool):
        return "true" if t.value else "false"
    if isinstance(t, PrimString):
        return '"' + t.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(t, PrimOp):
        return "(+)" if t.name == "plus" else "(==)"
    if isinstance(t, Fix):
        return "Y"
    if isinstance(t, Abstraction):
        return f"\\{t.binder}. {show(t.body)}"
    if isinstance(t, RecordLit):
        return "<" + ", ".join(f"{l} = {show(v)}" for l, v in t.entries) + ">"
    if isinstance(t, MergeTerm):
        return f"{_atomic(t.left)} ++ {show(t.right)}"
    if isinstance(t, Selection):
        return f"{_atomic(t.term)}.{t.label}"
    f = t.fun
    if isinstance(f, Application) and isinstance(f.fun, PrimOp):
        op = " + " if f.fun.name == "plus" else " == "
        return _atomic(f.arg) + op + _atomic(t.arg)
    head = show(f) if isinstance(f, Application) else _atomic(f)
    return f"{head} {_atomic(t.arg)}"


def _atomic(t: Term) -> str:
    s = show(t)
    simple = (Var, PrimInt, PrimBool, PrimString, PrimOp, Fix, RecordLit, Selection)
    return s if isinstance(t, simple) else f"({s})"


# classes and mixins -----------------------------------------------------------

SELF, SUPER = "self", "super"
CLASS, STATE, ARG_CLASS = "class", "state", "argClass"


@dataclass(frozen=True)
class Method:
    label: str
    body: Term
    declared: Optional[tt.Type] = None


@dataclass(frozen=True)
class ClassDecl:
    """``Y(\\class. \\state. <l = N, ...>)``; a missing state type means ``Y(\\class. R)``."""

    name: str
    state_type: Optional[tt.Type]
    methods: tuple[Method, ...]

    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.methods)


@dataclass(frozen=True)
class MixinDecl:
    name: str
    state_type: tt.Type
    requires: tt.Type
    methods: tuple[Method, ...]
    provides: Optional[tt.Type] = None

    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.methods)


class CompileError(ValueError):
    pass


def _self_term(stateful: bool) -> Term:
    return Application(Var(CLASS), Var(STATE)) if stateful else Var(CLASS)


def expand_body(body: Term, stateful: bool = True, mixin: bool = False) -> Term:
    """Replace ``self`` and ``super`` by what they abbreviate."""
    body = subst(body, SELF, _self_term(stateful))
    if mixin:
        body = subst(body, SUPER, Application(Var(ARG_CLASS), Var(STATE)))
    return body


def _methods_record(methods, stateful: bool, mixin: bool, name: str) -> RecordLit:
    allowed = {CLASS, STATE} if stateful else {CLASS}
    if mixin:
        allowed.add(ARG_CLASS)
    entries = []
    for m in methods:
        body = expand_body(m.body, stateful, mixin)
        stray = free_vars(body) - allowed
        if stray:
            raise CompileError(
                f"{name}.{m.label} mentions unbound names {', '.join(sorted(stray))}"
            )
        entries.append((m.label, body))
    return RecordLit(tuple(entries))


def compile_class(c: ClassDecl) -> Term:
    stateful = c.state_type is not None
    rec = _methods_record(c.methods, stateful, False, c.name)
    body = Abstraction(STATE, rec) if stateful else rec
    return Application(FIX, Abstraction(CLASS, body))


def compile_mixin(m: MixinDecl) -> Term:
    rec = _methods_record(m.methods, True, True, m.name)
    inner = MergeTerm(Application(Var(ARG_CLASS), Var(STATE)), rec)
    return Abstraction(
        ARG_CLASS, Application(FIX, Abstraction(CLASS, Abstraction(STATE, inner)))
    )


# typing ---------------------------------------------------------------------

INT, BOOL, STRING = Constant("Int"), Constant("Bool"), Constant("String")
EVEN, ODD = Constant("Even"), Constant("Odd")


def _arrows(*ts: tt.Type) -> tt.Type:
    result = ts[-1]
    for t in reversed(ts[:-1]):
        result = Arrow(t, result)
    return result


@dataclass(frozen=True)
class PrimTable:
    """Types of the primitive operators and integer literals."""

    plus: tt.Type = _arrows(INT, INT, INT)
    eq: tt.Type = tt.intersect(
        [_arrows(INT, INT, BOOL), _arrows(BOOL, BOOL, BOOL), _arrows(STRING, STRING, BOOL)]
    )
    parity: bool = False

    def literal(self, n: int) -> tt.Type:
        if not self.parity:
            return INT
        return Intersection(INT, EVEN if n % 2 == 0 else ODD)


def _par(p: Constant) -> tt.Type:
    return Intersection(INT, p)


STANDARD = PrimTable()
EVEN_ODD = PrimTable(
    plus=tt.intersect(
        [_arrows(INT, INT, INT)]
        + [
            _arrows(_par(a), _par(b), _par(EVEN if a == b else ODD))
            for a in (EVEN, ODD)
            for b in (EVEN, ODD)
        ]
    ),
    parity=True,
)


class OutsideFragment(ValueError):
    """The term is not in the fragment the checker handles."""


class TypingFailure(ValueError):
    pass


Env = Mapping[str, tt.Type]


class _Checker:
    def __init__(self, prims: PrimTable):
        self.prims = prims

    def check(self, env: Env, t: Term, goal: tt.Type) -> bool:
        return all(self._check_piece(env, t, p) for p in tt.tt_paths(goal))

    def _check_piece(self, env: Env, t: Term, p: tt.Type) -> bool:
        if isinstance(t, Abstraction):
            if not isinstance(p, Arrow):
                return False
            return self.check({**env, t.binder: p.source}, t.body, p.target)
        if isinstance(t, RecordLit):
            for _, v in t.entries:
                self._ensure_fragment(env, v)
            if isinstance(p, RecordEmpty):
                return True
            if isinstance(p, RecordField):
                v = t.get(p.label)
                return v is not None and self.check(env, v, p.value)
            return False
        if isinstance(t, MergeTerm):
            if not isinstance(p, (RecordEmpty, RecordField)):
                return False
            if not self.check(env, t.left, tt.EMPTY):
                return False
            for _, v in t.right.entries:
                self._ensure_fragment(env, v)
            if isinstance(p, RecordField) and p.label in t.right.labels():
                return self.check(env, t.right.get(p.label), p.value)
            return self.check(env, t.left, p)
        if isinstance(t, Selection):
            return self.check(env, t.term, RecordField(t.label, p))
        if isinstance(t, Application) and isinstance(t.fun, Abstraction):
            f = t.fun
            return self.check({**env, f.binder: self.synth(env, t.arg)}, f.body, p)
        return tt.subtype_tt(self.synth(env, t), p)

    def _ensure_fragment(self, env: Env, t: Term) -> None:
        # fields typed at omega still have to be terms we understand
        if _mentions_fix(t):
            raise OutsideFragment("the fixed-point combinator is not checkable")

    def synth(self, env: Env, t: Term) -> tt.Type:
        if isinstance(t, Var):
            if t.name not in env:
                raise OutsideFragment(f"unbound variable {t.name}")
            return tt.normalize(env[t.name])
        if isinstance(t, PrimInt):
            return self.prims.literal(t.value)
        if isinstance(t, PrimBool):
            return BOOL
        if isinstance(t, PrimString):
            return STRING
        if isinstance(t, PrimOp):
            return tt.normalize(self.prims.plus if t.name == "plus" else self.prims.eq)
        if isinstance(t, Application):
            if isinstance(t.fun, Abstraction):
                f = t.fun
                return self.synth({**env, f.binder: self.synth(env, t.arg)}, f.body)
            if isinstance(t.fun, Fix):
                raise OutsideFragment("the fixed-point combinator is not checkable")
            fun = self.synth(env, t.fun)
            verdicts: dict[tt.Type, bool] = {}
            targets = []
            for p in tt.tt_paths(fun):
                if not isinstance(p, Arrow):
                    continue
                if p.source not in verdicts:
                    verdicts[p.source] = self.check(env, t.arg, p.source)
                if verdicts[p.source]:
                    targets.append(p.target)
            return tt.normalize(tt.intersect(targets))
        if isinstance(t, Selection):
            rec = self.synth(env, t.term)
            hits = [
                p.value
                for p in tt.tt_paths(rec)
                if isinstance(p, RecordField) and p.label == t.label
            ]
            return tt.normalize(tt.intersect(hits))
        if isinstance(t, RecordLit):
            return tt.normalize(tt.record((l, self.synth(env, v)) for l, v in t.entries))
        if isinstance(t, MergeTerm):
            left = _record_part(self.synth(env, t.left))
            right = self.synth(env, t.right)
            if left is None:
                return tt.OMEGA
            return tt.merge_types(left, right)
        if isinstance(t, Abstraction):
            raise OutsideFragment("cannot synthesize a type for an abstraction")
        raise OutsideFragment("the fixed-point combinator is not checkable")


def _mentions_fix(t: Term) -> bool:
    return isinstance(t, Fix) or any(_mentions_fix(c) for c in _children(t))


def _record_part(t: tt.Type) -> Optional[tt.Type]:
    parts = [c for c in tt.components(tt.normalize(t)) if tt.is_record_sort(c)]
    return tt.intersect(parts) if parts else None


def check_term(env: Env, t: Term, goal: tt.Type, prims: PrimTable = STANDARD) -> bool:
    return _Checker(prims).check(env, t, goal)


def synth_term(env: Env, t: Term, prims: PrimTable = STANDARD) -> tt.Type:
    return _Checker(prims).synth(env, t)


@dataclass
class Approximation:
    """Chain of approximant record types; ``fixpoint`` is the first stable index."""

    chain: list[tt.Type] = field(default_factory=list)
    fixpoint: Optional[int] = None

    @property
    def last(self) -> tt.Type:
        return self.chain[-1]


def _method_type(ck: _Checker, env: Env, body: Term, declared) -> tt.Type:
    if declared is None:
        return ck.synth(env, body)
    return tt.normalize(declared) if ck.check(env, body, declared) else tt.OMEGA


def _unvalidated(methods, rho: tt.Type) -> list[str]:
    got = tt.entries(rho)
    return [
        m.label
        for m in methods
        if m.declared is not None
        and not tt.type_equal(got[m.label], m.declared)
    ]


def class_approximants(c: ClassDecl, n: int, prims: PrimTable = STANDARD) -> Approximation:
    """Approximant chain starting from ``omega``; stops when two agree."""
    if n < 1:
        raise ValueError("need at least one iteration")
    ck = _Checker(prims)
    stateful = c.state_type is not None
    bodies = [expand_body(m.body, stateful) for m in c.methods]
    out = Approximation([tt.OMEGA])
    for k in range(n):
        rho = out.chain[-1]
        if stateful:
            env = {CLASS: Arrow(c.state_type, rho), STATE: c.state_type}
        else:
            env = {CLASS: rho}
        nxt = tt.normalize(
            tt.record(
                (m.label, _method_type(ck, env, b, m.declared))
                for m, b in zip(c.methods, bodies)
            )
        )
        if tt.type_equal(nxt, rho):
            out.fixpoint = k
            break
        out.chain.append(nxt)
    return out


def class_typing(c: ClassDecl, n: int, prims: PrimTable = STANDARD) -> tt.Type:
    """``state -> rho`` for the last approximant, or ``rho`` for stateless classes."""
    approx = class_approximants(c, n, prims)
    bad = _unvalidated(c.methods, approx.last)
    if bad:
        raise TypingFailure(
            f"class {c.name}: method {', '.join(bad)} does not check against its declared type"
        )
    if c.state_type is None:
        return approx.last
    return Arrow(tt.normalize(c.state_type), approx.last)


@dataclass(frozen=True)
class MixinTyping:
    state: tt.Type
    requires: tt.Type
    provides: tt.Type

    def as_tuple(self) -> tuple[tt.Type, tt.Type, tt.Type]:
        return (self.state, self.requires, self.provides)


def mixin_typing(m: MixinDecl, n: int, prims: PrimTable = STANDARD) -> MixinTyping:
    """Certify ``(state, requires, provides)`` for a mixin."""
    if n < 1:
        raise ValueError("need at least one iteration")
    labels = set(m.labels())
    if m.provides is not None and set(tt.lbl(m.provides)) != labels:
        raise TypingFailure(
            f"mixin {m.name}: provided labels {sorted(tt.lbl(m.provides))} "
            f"differ from its methods {sorted(labels)}"
        )
    if not tt.is_record_sort(m.requires):
        raise TypingFailure(f"mixin {m.name}: requirement is not a record type")
    ck = _Checker(prims)
    sigma = tt.normalize(m.state_type)
    rho1 = tt.normalize(m.requires)
    bodies = [expand_body(x.body, True, True) for x in m.methods]
    rho2 = tt.normalize(tt.record((l, tt.OMEGA) for l in m.labels()))
    for k in range(n):
        env = {
            ARG_CLASS: Arrow(sigma, rho1),
            CLASS: Arrow(sigma, tt.merge_types(rho1, rho2)),
            STATE: sigma,
        }
        nxt = tt.normalize(
            tt.record(
                (x.label, _method_type(ck, env, b, x.declared))
                for x, b in zip(m.methods, bodies)
            )
        )
        done = tt.type_equal(nxt, rho2)
        rho2 = nxt
        if done:
            break
    bad = _unvalidated(m.methods, rho2)
    if bad:
        raise TypingFailure(
            f"mixin {m.name}: method {', '.join(bad)} does not check against its declared type"
        )
    provides = tt.normalize(m.provides) if m.provides is not None else rho2
    if not tt.subtype_tt(rho2, provides):
        raise TypingFailure(f"mixin {m.name}: methods do not provide {provides}")
    return MixinTyping(sigma, rho1, provides)
