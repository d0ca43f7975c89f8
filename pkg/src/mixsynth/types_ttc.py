"""Intersection types with unary covariant constructors and type variables.

This is the type language the synthesizer works in.  Besides arrows and
intersections it has constants, variables, the top type ``omega`` and unary
constructors ``c(t)`` that are covariant and distribute over intersection,
so ``c(a) & c(b)`` and ``c(a & b)`` are equal.

Every type is equal to the intersection of its paths.  A path is a type with
a single spine: an atom, a constructor over a path (or over ``omega``), or an
arrow whose target is a path.  Subtyping is decided path by path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union


@dataclass(frozen=True, slots=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Omega:
    def __str__(self) -> str:
        return render(self)


# compound nodes hash once at construction since the search keys memo tables on types


@dataclass(frozen=True, slots=True)
class Arrow:
    source: Type
    target: Type
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("Arrow", self.source, self.target)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Intersection:
    left: Type
    right: Type
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("Intersection", self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Ctor:
    """Unary constructor application ``name(arg)``."""

    name: str
    arg: Type
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("Ctor", self.name, self.arg)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


Type = Union[Constant, Variable, Omega, Arrow, Intersection, Ctor]
Substitution = Mapping[str, Type]

OMEGA = Omega()


class ArityError(ValueError):
    """Raised when a path has fewer arguments than requested."""


def intersect(types: Iterable[Type]) -> Type:
    """Right-nested intersection of ``types``; omega when empty."""
    items = list(types)
    if not items:
        return OMEGA
    result = items[-1]
    for t in reversed(items[:-1]):
        result = Intersection(t, result)
    return result


def components(t: Type) -> Iterator[Type]:
    """Top-level intersection components of ``t``."""
    if isinstance(t, Intersection):
        yield from components(t.left)
        yield from components(t.right)
    else:
        yield t


# rendering ------------------------------------------------------------------


@lru_cache(maxsize=None)
def render(t: Type, unicode: bool = False) -> str:
    arrow, inter, top = (" → ", " ∩ ", "ω") if unicode else (" -> ", " & ", "omega")
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Variable):
        return "'" + t.name
    if isinstance(t, Omega):
        return top
    if isinstance(t, Ctor):
        return f"{t.name}({render(t.arg, unicode)})"
    if isinstance(t, Intersection):
        parts = []
        for c in components(t):
            s = render(c, unicode)
            parts.append(f"({s})" if isinstance(c, Arrow) else s)
        return inter.join(parts)
    src = render(t.source, unicode)
    if isinstance(t.source, (Arrow, Intersection)):
        src = f"({src})"
    return src + arrow + render(t.target, unicode)


# measures ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def level(t: Type) -> int:
    """Nesting depth of arrows and constructors."""
    if isinstance(t, (Constant, Variable, Omega)):
        return 0
    if isinstance(t, Ctor):
        return 1 + level(t.arg)
    if isinstance(t, Arrow):
        return 1 + max(level(t.source), level(t.target))
    return max(level(t.left), level(t.right))


def subst_level(s: Substitution) -> int:
    return max((level(v) for v in s.values()), default=0)


@lru_cache(maxsize=None)
def size(t: Type) -> int:
    """Number of nodes in the syntax tree."""
    if isinstance(t, (Constant, Variable, Omega)):
        return 1
    if isinstance(t, Ctor):
        return 1 + size(t.arg)
    if isinstance(t, Arrow):
        return 1 + size(t.source) + size(t.target)
    return 1 + size(t.left) + size(t.right)


def atoms(t: Type) -> frozenset[str]:
    """Names of constants, variables and constructors occurring in ``t``."""
    if isinstance(t, (Constant, Variable)):
        return frozenset([t.name])
    if isinstance(t, Omega):
        return frozenset()
    if isinstance(t, Ctor):
        return atoms(t.arg) | {t.name}
    if isinstance(t, Arrow):
        return atoms(t.source) | atoms(t.target)
    return atoms(t.left) | atoms(t.right)


@lru_cache(maxsize=None)
def variables(t: Type) -> tuple[str, ...]:
    """Variable names in order of first occurrence."""
    if isinstance(t, Variable):
        return (t.name,)
    if isinstance(t, (Constant, Omega)):
        return ()
    if isinstance(t, Ctor):
        return variables(t.arg)
    a, b = (t.source, t.target) if isinstance(t, Arrow) else (t.left, t.right)
    left = variables(a)
    return left + tuple(v for v in variables(b) if v not in left)


def constants(t: Type) -> frozenset[str]:
    if isinstance(t, Constant):
        return frozenset([t.name])
    if isinstance(t, (Variable, Omega)):
        return frozenset()
    if isinstance(t, Ctor):
        return constants(t.arg)
    a, b = (t.source, t.target) if isinstance(t, Arrow) else (t.left, t.right)
    return constants(a) | constants(b)


def constructors(t: Type) -> frozenset[str]:
    if isinstance(t, (Constant, Variable, Omega)):
        return frozenset()
    if isinstance(t, Ctor):
        return constructors(t.arg) | {t.name}
    a, b = (t.source, t.target) if isinstance(t, Arrow) else (t.left, t.right)
    return constructors(a) | constructors(b)


def subterms(t: Type) -> Iterator[Type]:
    yield t
    if isinstance(t, Ctor):
        yield from subterms(t.arg)
    elif isinstance(t, Arrow):
        yield from subterms(t.source)
        yield from subterms(t.target)
    elif isinstance(t, Intersection):
        yield from subterms(t.left)
        yield from subterms(t.right)


def apply_subst(s: Substitution, t: Type) -> Type:
    """Replace variables homomorphically; unmapped variables stay put."""
    if not s:
        return t
    if isinstance(t, Variable):
        return s.get(t.name, t)
    if isinstance(t, (Constant, Omega)):
        return t
    if isinstance(t, Ctor):
        return Ctor(t.name, apply_subst(s, t.arg))
    if isinstance(t, Arrow):
        return Arrow(apply_subst(s, t.source), apply_subst(s, t.target))
    return Intersection(apply_subst(s, t.left), apply_subst(s, t.right))


# paths ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def paths(t: Type) -> tuple[Type, ...]:
    """The paths of ``t`` in syntactic order, without duplicates."""
    if isinstance(t, (Constant, Variable)):
        return (t,)
    if isinstance(t, Omega):
        return ()
    if isinstance(t, Arrow):
        return tuple(Arrow(t.source, p) for p in paths(t.target))
    if isinstance(t, Ctor):
        inner = paths(t.arg)
        if not inner:
            return (Ctor(t.name, OMEGA),)
        return tuple(Ctor(t.name, p) for p in inner)
    return tuple(dict.fromkeys(paths(t.left) + paths(t.right)))


def is_path(t: Type) -> bool:
    if isinstance(t, (Constant, Variable)):
        return True
    if isinstance(t, Arrow):
        return is_path(t.target)
    if isinstance(t, Ctor):
        return isinstance(t.arg, Omega) or is_path(t.arg)
    return False


def organize(t: Type) -> Type:
    """Intersection of the paths of ``t``, sorted and deduplicated."""
    return intersect(sorted(set(paths(t)), key=render))


def arity(p: Type) -> int:
    n = 0
    while isinstance(p, Arrow):
        n += 1
        p = p.target
    return n


def arg(p: Type, i: int) -> Type:
    """The ``i``-th argument (1-based) of path ``p``."""
    if i < 1 or arity(p) < i:
        raise ArityError(f"path {render(p)} has no argument {i}")
    for _ in range(i - 1):
        p = p.target
    return p.source


def tgt(p: Type, m: int) -> Type:
    """What remains of path ``p`` after ``m`` arguments."""
    if m < 0 or arity(p) < m:
        raise ArityError(f"path {render(p)} has arity below {m}")
    for _ in range(m):
        p = p.target
    return p


# subtyping --------------------------------------------------------------------


@lru_cache(maxsize=1 << 20)
def path_leq(p: Type, q: Type) -> bool:
    """Decide ``p <= q`` for two paths."""
    if isinstance(q, (Constant, Variable)):
        return p == q
    if isinstance(q, Arrow):
        return (
            isinstance(p, Arrow)
            and path_leq(p.target, q.target)
            and subtype(q.source, p.source)
        )
    if isinstance(q, Ctor):
        if not isinstance(p, Ctor) or p.name != q.name:
            return False
        if isinstance(q.arg, Omega):
            return True
        return not isinstance(p.arg, Omega) and path_leq(p.arg, q.arg)
    raise TypeError(f"not a path: {render(q)}")


@lru_cache(maxsize=1 << 20)
def subtype(s: Type, t: Type) -> bool:
    """Decide ``s <= t``: every path of ``t`` is above some path of ``s``."""
    if s == t:
        return True
    left = paths(s)
    return all(any(path_leq(p, q) for p in left) for q in paths(t))


def equal(s: Type, t: Type) -> bool:
    return subtype(s, t) and subtype(t, s)


@lru_cache(maxsize=1 << 16)
def canon(t: Type) -> Type:
    """Canonical representative of the equality class of ``t``.

    Paths are organized recursively (arrow sources included), paths that are
    implied by another path of the same type are dropped, and the rest are
    sorted.
    """
    ps = {_canon_path(p) for p in paths(t)}
    keep = [p for p in ps if not any(_implies(o, p) for o in ps if o != p)]
    return intersect(sorted(keep, key=render))


def _implies(o: Type, p: Type) -> bool:
    if not path_leq(o, p):
        return False
    # equal paths: keep the one that renders first
    return not path_leq(p, o) or render(o) < render(p)


def _canon_path(p: Type) -> Type:
    if isinstance(p, Arrow):
        return Arrow(canon(p.source), _canon_path(p.target))
    if isinstance(p, Ctor) and not isinstance(p.arg, Omega):
        return Ctor(p.name, _canon_path(p.arg))
    return p
