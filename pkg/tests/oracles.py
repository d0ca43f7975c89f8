"""Independent reference implementations used to cross-check the package.

None of these share code with the decision procedures they validate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

from mixsynth import lambda_r as lr
from mixsynth import types_tt as tt
from mixsynth import types_ttc as ttc
from mixsynth.inhabitation import Apply, Leaf

# textbook BCD subtyping on constructor-free types ---------------------------------
#
# Types are tuples: ("atom", name), ("top",), ("arrow", s, t), ("meet", s, t).


def from_ttc(t: ttc.Type) -> tuple:
    if isinstance(t, (ttc.Constant, ttc.Variable)):
        return ("atom", ttc.render(t))
    if isinstance(t, ttc.Omega):
        return ("top",)
    if isinstance(t, ttc.Arrow):
        return ("arrow", from_ttc(t.source), from_ttc(t.target))
    if isinstance(t, ttc.Intersection):
        return ("meet", from_ttc(t.left), from_ttc(t.right))
    raise ValueError("constructors are outside the BCD fragment")


def from_tt(t: tt.Type) -> tuple:
    if isinstance(t, tt.Constant):
        return ("atom", t.name)
    if isinstance(t, tt.Omega):
        return ("top",)
    if isinstance(t, tt.Arrow):
        return ("arrow", from_tt(t.source), from_tt(t.target))
    if isinstance(t, tt.Intersection):
        return ("meet", from_tt(t.left), from_tt(t.right))
    raise ValueError("records are outside the BCD fragment")


def _is_top(t: tuple) -> bool:
    if t[0] == "top":
        return True
    if t[0] == "arrow":
        return _is_top(t[2])
    if t[0] == "meet":
        return _is_top(t[1]) and _is_top(t[2])
    return False


def _flatten(t: tuple) -> list[tuple]:
    if t[0] == "meet":
        return _flatten(t[1]) + _flatten(t[2])
    return [] if t[0] == "top" else [t]


def bcd_leq(s: tuple, t: tuple) -> bool:
    """Hindley's algorithm: split the right side, select arrows on the left."""
    if _is_top(t):
        return True
    if t[0] == "meet":
        return bcd_leq(s, t[1]) and bcd_leq(s, t[2])
    comps = _flatten(s)
    if t[0] == "atom":
        return t in comps
    src, tgt = t[1], t[2]
    chosen = [c[2] for c in comps if c[0] == "arrow" and bcd_leq(src, c[1])]
    if not chosen:
        return False
    meet = chosen[0]
    for c in chosen[1:]:
        meet = ("meet", meet, c)
    return bcd_leq(meet, tgt)


# records by label-set containment and pointwise depth -----------------------------


def record_map(t: tt.Type) -> dict[str, tt.Type]:
    """Label map of a canonical record built from fields, ``<>`` and ``&``."""
    if isinstance(t, tt.RecordEmpty):
        return {}
    if isinstance(t, tt.RecordField):
        return {t.label: t.value}
    if isinstance(t, tt.Intersection):
        left, right = record_map(t.left), record_map(t.right)
        out = dict(left)
        for l, v in right.items():
            out[l] = tt.Intersection(out[l], v) if l in out else v
        return out
    raise ValueError("not a flat record")


def record_leq(s: tt.Type, t: tt.Type) -> bool:
    """Width plus depth; field values are compared with ``bcd_leq``."""
    ms, mt = record_map(s), record_map(t)
    if not set(mt) <= set(ms):
        return False
    return all(bcd_leq(from_tt(ms[l]), from_tt(v)) for l, v in mt.items())


# level, straight from its defining equations -----------------------------------


def level(t: ttc.Type) -> int:
    match t:
        case ttc.Constant() | ttc.Variable() | ttc.Omega():
            return 0
        case ttc.Ctor(arg=a):
            return 1 + level(a)
        case ttc.Arrow(source=s, target=r):
            return 1 + max(level(s), level(r))
        case ttc.Intersection(left=a, right=b):
            return max(level(a), level(b))
    raise TypeError(t)


# a lazy big-step interpreter ----------------------------------------------------


@dataclass
class Thunk:
    compute: Callable[[], object]
    done: bool = False
    value: object = None

    def force(self):
        if not self.done:
            self.value, self.done = self.compute(), True
        return self.value


@dataclass
class Closure:
    fn: Callable[[Thunk], object]


class Record(dict):
    pass


def interpret(t: lr.Term, env: dict[str, Thunk] | None = None):
    """Environment-based call-by-need evaluation to a Python value.

    Records map labels to thunks so a class instance can mention itself
    without looping.  Fix is the usual knot: ``fix f = f (fix f)``.
    """
    env = env or {}
    match t:
        case lr.Var(name=n):
            return env[n].force()
        case lr.PrimInt(value=v) | lr.PrimBool(value=v) | lr.PrimString(value=v):
            return v
        case lr.Abstraction(binder=x, body=b):
            return Closure(lambda arg, x=x, b=b: interpret(b, {**env, x: arg}))
        case lr.Application(fun=f, arg=a):
            fv = interpret(f, env)
            return _call(fv, Thunk(lambda: interpret(a, env)))
        case lr.Selection(term=s, label=l):
            return interpret_record(s, env)[l].force()
        case lr.RecordLit(entries=es):
            return Record({l: Thunk(lambda v=v: interpret(v, env)) for l, v in es})
        case lr.MergeTerm(left=s, right=r):
            out = Record(interpret_record(s, env))
            out.update(interpret_record(r, env))
            return out
        case lr.PrimOp(name=n):
            return _prim(n)
        case lr.Fix():
            return Closure(_fix)
    raise TypeError(t)


def interpret_record(t: lr.Term, env) -> Record:
    v = interpret(t, env)
    if not isinstance(v, Record):
        raise TypeError("not a record")
    return v


def _call(f, arg: Thunk):
    if not isinstance(f, Closure):
        raise TypeError("not a function")
    return f.fn(arg)


def _fix(f: Thunk):
    return _call(f.force(), Thunk(lambda: _fix(f)))


def _prim(name: str) -> Closure:
    if name == "plus":
        return Closure(lambda a: Closure(lambda b: a.force() + b.force()))
    return Closure(lambda a: Closure(lambda b: a.force() == b.force()))


# combinator typing by whole-type instantiation ----------------------------------


def instances(t: ttc.Type, images) -> list[ttc.Type]:
    """Every instance of ``t`` with its variables drawn from ``images``."""
    names = ttc.variables(t)
    return [ttc.apply_subst(dict(zip(names, c)), t) for c in product(images, repeat=len(names))]


class WholeTypeTyper:
    """Least types: all instances at leaves, arrow elimination at applications."""

    def __init__(self, delta: dict, images):
        self.delta, self.images = delta, images
        self._paths: dict = {}

    def paths(self, e) -> list[ttc.Type]:
        hit = self._paths.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Leaf):
            t = ttc.intersect(instances(self.delta[e.name], self.images))
        else:
            arg = ttc.intersect(self.paths(e.arg))
            t = ttc.intersect(
                p.target
                for p in self.paths(e.fun)
                if isinstance(p, ttc.Arrow) and ttc.subtype(arg, p.source)
            )
        out = list(ttc.paths(ttc.organize(t)))
        self._paths[e] = out
        return out


def terms_up_to(names, size):
    """All applicative terms with at most ``size`` leaves."""
    by_size = {1: [Leaf(n) for n in names]}
    for s in range(2, size + 1):
        by_size[s] = [Apply(f, a) for i in range(1, s) for f in by_size[i] for a in by_size[s - i]]
    return [e for s in range(1, size + 1) for e in by_size[s]]


def inhabitants(delta: dict, goal: ttc.Type, images, size: int) -> set:
    typer = WholeTypeTyper(delta, images)
    return {
        e
        for e in terms_up_to(list(delta), size)
        if ttc.subtype(ttc.intersect(typer.paths(e)), goal)
    }
