"""Bounded inhabitation for combinators typed in the constructor type language.

A combinator ``C`` with schematic type ``t`` may be used at any instance
``S(t)`` with ``level(S) <= k``, and at intersections of instances.  The
search works on a finite pool of instance paths per combinator.  The pool
is built path by path: every path of ``t`` is instantiated with every
assignment of its own variables.  Since paths of different instances may
be intersected freely, this loses nothing against instantiating the whole
type at once.

``C E1 ... Em`` inhabits ``tau`` iff some set ``P`` of pool paths of arity
at least ``m`` has ``tgt_m(P) <= tau`` and each ``Ei`` inhabits the
intersection of ``arg_i(P)``.  A minimal ``P`` picks one path per path of
``tau``, which is what the solver enumerates.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from . import types_ttc as ttc

Repository = Mapping[str, ttc.Type]

FULL = "full"
GOAL_DIRECTED = "goal-directed"


@dataclass(frozen=True)
class Leaf:
    name: str

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True)
class Apply:
    fun: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Leaf, Apply]


class UnknownCombinator(KeyError):
    pass


def term_size(e: Term) -> int:
    """Number of combinator occurrences."""
    if isinstance(e, Leaf):
        return 1
    return term_size(e.fun) + term_size(e.arg)


def leaves(e: Term) -> Iterator[str]:
    if isinstance(e, Leaf):
        yield e.name
    else:
        yield from leaves(e.fun)
        yield from leaves(e.arg)


def pipeline_of(e: Term) -> Optional[list[str]]:
    """``[C, M1, ..., Mn]`` when ``e`` is ``Mn (... (M1 C))``, else None."""
    names = []
    while isinstance(e, Apply):
        if not isinstance(e.fun, Leaf):
            return None
        names.append(e.fun.name)
        e = e.arg
    names.append(e.name)
    return names[::-1]


def render_term(e: Term, unicode: bool = False) -> str:
    names = pipeline_of(e)
    if names is not None:
        return (" ▷ " if unicode else " | ").join(names)
    head, args = e, []
    while isinstance(head, Apply):
        args.append(head.arg)
        head = head.fun
    parts = [render_term(head, unicode)]
    for a in reversed(args):
        s = render_term(a, unicode)
        parts.append(s if isinstance(a, Leaf) else f"({s})")
    return " ".join(parts)


def sort_key(e: Term, order: Mapping[str, int]) -> tuple:
    """Repository order, reading pipelines from the innermost class outward."""
    if isinstance(e, Leaf):
        return (0, order[e.name])
    return (1, sort_key(e.arg, order), sort_key(e.fun, order))


@dataclass(frozen=True)
class SearchConfig:
    k: int
    max_term_size: int = 9
    max_results: Optional[int] = 1
    subst_mode: str = GOAL_DIRECTED
    extra_subst_images: tuple[ttc.Type, ...] = ()
    max_image_size: int = 5
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.max_term_size < 1:
            raise ValueError("max_term_size must be >= 1")
        if self.subst_mode not in (FULL, GOAL_DIRECTED):
            raise ValueError(f"unknown substitution mode {self.subst_mode!r}")
        if self.max_results is not None and self.max_results < 1:
            raise ValueError("max_results must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


# substitution images ----------------------------------------------------------


def _image_order(t: ttc.Type) -> tuple:
    return (ttc.level(t), ttc.size(t), ttc.render(t))


def _dedup(types: Iterable[ttc.Type]) -> tuple[ttc.Type, ...]:
    seen = {}
    for t in types:
        c = ttc.canon(t)
        seen.setdefault(c, c)
    return tuple(sorted(seen, key=_image_order))


def full_images(
    constants: Iterable[str], constructors: Iterable[str], k: int, max_size: int
) -> tuple[ttc.Type, ...]:
    """Ground types of level <= k and size <= max_size, one per equality class."""
    by_size: dict[int, list[ttc.Type]] = {
        1: [ttc.OMEGA] + [ttc.Constant(a) for a in sorted(constants)]
    }
    ctors = sorted(constructors)
    for n in range(2, max_size + 1):
        out = [ttc.Ctor(c, t) for c in ctors for t in by_size[n - 1]]
        for i in range(1, n - 1):
            for a in by_size[i]:
                for b in by_size[n - 1 - i]:
                    out.append(ttc.Arrow(a, b))
                    out.append(ttc.Intersection(a, b))
        by_size[n] = [t for t in out if ttc.level(t) <= k]
    return _dedup(t for ts in by_size.values() for t in ts if ttc.level(t) <= k)


def goal_directed_images(
    delta: Repository, goal: ttc.Type, k: int, extra: Iterable[ttc.Type] = ()
) -> tuple[ttc.Type, ...]:
    """omega, ground subterms of the goal and the repository, and their paths."""
    found: list[ttc.Type] = [ttc.OMEGA, *extra]
    for t in [goal, *delta.values()]:
        for whole in (t, ttc.organize(t)):
            for s in ttc.subterms(whole):
                if ttc.variables(s):
                    continue
                found.append(s)
                found.extend(ttc.paths(s))
    return _dedup(t for t in found if ttc.level(t) <= k)


def images_for(delta: Repository, goal: ttc.Type, cfg: SearchConfig) -> tuple[ttc.Type, ...]:
    if cfg.subst_mode == GOAL_DIRECTED:
        return goal_directed_images(delta, goal, cfg.k, cfg.extra_subst_images)
    types = [goal, *delta.values(), *cfg.extra_subst_images]
    consts = set().union(*(ttc.constants(t) for t in types))
    ctors = set().union(*(ttc.constructors(t) for t in types))
    base = full_images(consts, ctors, cfg.k, cfg.max_image_size)
    extra = [t for t in cfg.extra_subst_images if ttc.level(t) <= cfg.k]
    return _dedup([*base, *extra]) if extra else base


def substitution_space(
    delta: Repository, c: str, goal: ttc.Type, cfg: SearchConfig
) -> Iterator[dict[str, ttc.Type]]:
    """All substitutions of ``delta[c]``'s variables into the image set, lazily."""
    if c not in delta:
        raise UnknownCombinator(c)
    names = ttc.variables(delta[c])
    images = images_for(delta, goal, cfg)
    for combo in itertools.product(images, repeat=len(names)):
        yield dict(zip(names, combo))


def instance_pool(t: ttc.Type, images: Sequence[ttc.Type]) -> tuple[ttc.Type, ...]:
    """Canonical paths of all instances of ``t``, built path by path."""
    out: dict[ttc.Type, None] = {}
    for p in ttc.paths(t):
        names = ttc.variables(p)
        for combo in itertools.product(images, repeat=len(names)):
            inst = ttc.apply_subst(dict(zip(names, combo)), p)
            for q in ttc.paths(inst):
                out.setdefault(ttc.canon(q), None)
    return tuple(out)


# search -------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive summands."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


class _Search:
    def __init__(self, delta: Repository, images: Sequence[ttc.Type]):
        self.names = list(delta)
        self.pools = {c: instance_pool(delta[c], images) for c in self.names}
        self.max_arity = {
            c: max((ttc.arity(p) for p in pool), default=0) for c, pool in self.pools.items()
        }
        self._memo: dict[tuple[ttc.Type, int], frozenset] = {}
        self._cands: dict[tuple[str, int, ttc.Type], tuple] = {}
        self._every: dict[int, frozenset] = {}
        self._lock = threading.Lock()

    def solve(self, goal: ttc.Type, size: int) -> frozenset:
        goal = ttc.canon(goal)
        key = (goal, size)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out: set[Term] = set()
        for c in self.names:
            out |= self.solve_head(c, goal, size)
        result = frozenset(out)
        with self._lock:
            return self._memo.setdefault(key, result)

    def solve_head(self, c: str, goal: ttc.Type, size: int) -> set:
        """Terms ``c E1 ... Em`` of the given size inhabiting ``goal``."""
        goal_paths = ttc.paths(goal)
        if not goal_paths:
            return {e for e in self.every(size) if _head(e) == c}
        out: set[Term] = set()
        for m in range(min(self.max_arity[c], size - 1) + 1):
            if m == 0 and size != 1:
                continue
            choices = []
            for q in goal_paths:
                cs = self.candidates(c, m, q)
                if not cs:
                    break
                choices.append(cs)
            else:
                arg_goals = {
                    tuple(
                        ttc.canon(ttc.intersect(ttc.arg(p, i) for p in combo))
                        for i in range(1, m + 1)
                    )
                    for combo in itertools.product(*choices)
                }
                for goals in arg_goals:
                    out |= self._apply_all(Leaf(c), goals, size - 1)
        return out

    def _apply_all(self, head: Term, goals: tuple, budget: int) -> set:
        out: set[Term] = set()
        for split in _compositions(budget, len(goals)):
            subs = []
            for g, s in zip(goals, split):
                found = self.solve(g, s)
                if not found:
                    break
                subs.append(found)
            else:
                for args in itertools.product(*subs):
                    e = head
                    for a in args:
                        e = Apply(e, a)
                    out.add(e)
        return out

    def candidates(self, c: str, m: int, q: ttc.Type) -> tuple:
        """Pool paths of ``c`` usable for goal path ``q`` after ``m`` arguments.

        A path is dropped when another candidate asks for weaker arguments.
        """
        key = (c, m, q)
        hit = self._cands.get(key)
        if hit is not None:
            return hit
        found = [
            p for p in self.pools[c] if ttc.arity(p) >= m and ttc.path_leq(ttc.tgt(p, m), q)
        ]
        args = [tuple(ttc.arg(p, i) for i in range(1, m + 1)) for p in found]
        keep = []
        for i, p in enumerate(found):
            dominated = False
            for j in range(len(found)):
                if j == i or not _weaker(args[j], args[i]):
                    continue
                # equal requirements: keep the earlier one
                if j < i or not _weaker(args[i], args[j]):
                    dominated = True
                    break
            if not dominated:
                keep.append(p)
        result = tuple(keep)
        with self._lock:
            return self._cands.setdefault(key, result)

    def every(self, size: int) -> frozenset:
        """All terms of the given size, which is what omega asks for."""
        hit = self._every.get(size)
        if hit is not None:
            return hit
        if size == 1:
            out = frozenset(Leaf(c) for c in self.names)
        else:
            out = frozenset(
                Apply(f, a)
                for i in range(1, size)
                for f in self.every(i)
                for a in self.every(size - i)
            )
        with self._lock:
            return self._every.setdefault(size, out)


def _weaker(a: tuple, b: tuple) -> bool:
    """Arguments ``a`` are implied by ``b`` componentwise."""
    return all(ttc.subtype(y, x) for x, y in zip(a, b))


def _head(e: Term) -> str:
    while isinstance(e, Apply):
        e = e.fun
    return e.name


def inhabit(delta: Repository, goal: ttc.Type, cfg: SearchConfig) -> Iterator[Term]:
    """Inhabitants of ``goal`` by increasing size, at most ``cfg.max_results``."""
    images = images_for(delta, goal, cfg)
    search = _Search(delta, images)
    order = {c: i for i, c in enumerate(delta)}
    emitted = 0
    goal = ttc.canon(goal)
    pool = ThreadPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        for s in range(1, cfg.max_term_size + 1):
            if pool is None:
                found = search.solve(goal, s)
            else:
                parts = pool.map(lambda c: search.solve_head(c, goal, s), search.names)
                found = set().union(*parts)
            for e in sorted(found, key=lambda e: sort_key(e, order)):
                yield e
                emitted += 1
                if cfg.max_results is not None and emitted >= cfg.max_results:
                    return
    finally:
        if pool is not None:
            pool.shutdown()


# checking -----------------------------------------------------------------------


class _Typer:
    def __init__(self, delta: Repository, images: Sequence[ttc.Type]):
        self.delta = delta
        self.images = images
        self._pools: dict[str, tuple] = {}

    def paths_of(self, e: Term) -> tuple[ttc.Type, ...]:
        """Paths of the least type of ``e``; their intersection is that type."""
        if isinstance(e, Leaf):
            if e.name not in self.delta:
                raise UnknownCombinator(e.name)
            if e.name not in self._pools:
                self._pools[e.name] = instance_pool(self.delta[e.name], self.images)
            return self._pools[e.name]
        fun = self.paths_of(e.fun)
        a = ttc.intersect(self.paths_of(e.arg))
        out = {
            p.target: None for p in fun if isinstance(p, ttc.Arrow) and ttc.subtype(a, p.source)
        }
        return tuple(out)


def synthesize(delta: Repository, e: Term, images: Sequence[ttc.Type]) -> ttc.Type:
    return ttc.intersect(_Typer(delta, images).paths_of(e))


def check_inhabitant(
    delta: Repository,
    e: Term,
    goal: ttc.Type,
    k: int,
    cfg: Optional[SearchConfig] = None,
) -> bool:
    """Decide whether ``e`` has type ``goal`` using instances of level <= k.

    Without ``cfg`` the instance images are those of both search modes, so
    any term found by ``inhabit`` at the same ``k`` is accepted.
    """
    for name in leaves(e):
        if name not in delta:
            raise UnknownCombinator(name)
    if cfg is not None:
        return ttc.subtype(synthesize(delta, e, images_for(delta, goal, cfg)), goal)
    # more images only strengthen the synthesized type, so a success on the
    # small goal-directed set settles it and only failures pay for the union
    small = images_for(delta, goal, SearchConfig(k))
    if ttc.subtype(synthesize(delta, e, small), goal):
        return True
    images = _dedup(images_for(delta, goal, SearchConfig(k, subst_mode=FULL)) + small)
    return ttc.subtype(synthesize(delta, e, images), goal)


def all_terms(names: Sequence[str], size: int) -> Iterator[Term]:
    if size == 1:
        for n in names:
            yield Leaf(n)
        return
    for i in range(1, size):
        for f in all_terms(names, i):
            for a in all_terms(names, size - i):
                yield Apply(f, a)


def brute_force_inhabit(
    delta: Repository,
    goal: ttc.Type,
    k: int,
    max_size: int,
    cfg: Optional[SearchConfig] = None,
) -> set[Term]:
    """Every term up to ``max_size`` accepted by ``check_inhabitant``; for tests."""
    cfg = cfg or SearchConfig(k, subst_mode=FULL)
    images = images_for(delta, goal, cfg)
    typer = _Typer(delta, images)
    return {
        e
        for s in range(1, max_size + 1)
        for e in all_terms(list(delta), s)
        if ttc.subtype(ttc.intersect(typer.paths_of(e)), goal)
    }
