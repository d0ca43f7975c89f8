"""Bridge from record types and mixins to constructor types and back.

Records are encoded with a ``rec`` constructor over one constructor per
label.  A mixin becomes a combinator whose type has a head component
mapping required to provided methods, plus one component per untouched
label that passes the field through unchanged.  The variable in that
component is named ``<mixin>.<label>`` so no two combinators share one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import lambda_r as lr
from . import types_tt as tt
from . import types_ttc as ttc

REC = "rec"


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    pass


def encode(t: tt.Type) -> ttc.Type:
    if isinstance(t, tt.Constant):
        return ttc.Constant(t.name)
    if isinstance(t, tt.Omega):
        return ttc.OMEGA
    if isinstance(t, tt.Arrow):
        return ttc.Arrow(encode(t.source), encode(t.target))
    if isinstance(t, tt.Intersection):
        return ttc.Intersection(encode(t.left), encode(t.right))
    if isinstance(t, tt.RecordEmpty):
        return ttc.Ctor(REC, ttc.OMEGA)
    if isinstance(t, tt.RecordField):
        if t.label == REC:
            raise EncodeError(f"label {REC!r} is reserved")
        return ttc.Ctor(REC, ttc.Ctor(t.label, encode(t.value)))
    raise EncodeError(f"cannot encode a type containing ++ ({tt.render(t)}); normalize it first")


def decode(t: ttc.Type) -> tt.Type:
    if isinstance(t, ttc.Constant):
        return tt.Constant(t.name)
    if isinstance(t, ttc.Omega):
        return tt.OMEGA
    if isinstance(t, ttc.Arrow):
        return tt.Arrow(decode(t.source), decode(t.target))
    if isinstance(t, ttc.Intersection):
        return tt.Intersection(decode(t.left), decode(t.right))
    if isinstance(t, ttc.Variable):
        raise DecodeError(f"variable '{t.name} has no record-calculus counterpart")
    if t.name != REC:
        raise DecodeError(f"constructor {t.name} outside a record")
    return _decode_fields(t.arg)


def _decode_fields(t: ttc.Type) -> tt.Type:
    if isinstance(t, ttc.Omega):
        return tt.EMPTY
    if isinstance(t, ttc.Intersection):
        return tt.Intersection(_decode_fields(t.left), _decode_fields(t.right))
    if isinstance(t, ttc.Ctor) and t.name != REC:
        return tt.RecordField(t.name, decode(t.arg))
    raise DecodeError(f"{ttc.render(t)} is not a record field")


def rec_field(label: str, value: ttc.Type) -> ttc.Type:
    return ttc.Ctor(REC, ttc.Ctor(label, value))


def mixin_variable(mixin: str, label: str) -> ttc.Variable:
    return ttc.Variable(f"{mixin}.{label}")


def mixin_combinator_type(
    sigma: tt.Type,
    rho1: tt.Type,
    rho2: tt.Type,
    provided: Iterable[str],
    universe: Sequence[str],
    name: str = "M",
) -> ttc.Type:
    """Head component intersected with a pass-through component per untouched label."""
    provided = frozenset(provided)
    known = set(universe)
    stray = (provided | tt.lbl(rho1) | tt.lbl(rho2)) - known
    if stray:
        raise EncodeError(f"{name}: labels {sorted(stray)} are not in the label universe")
    s = encode(tt.normalize(sigma))
    head = ttc.Arrow(
        ttc.Arrow(s, encode(tt.normalize(rho1))),
        ttc.Arrow(s, encode(tt.normalize(rho2))),
    )
    parts = [head]
    for l in universe:
        if l in provided:
            continue
        a = mixin_variable(name, l)
        keep = ttc.Arrow(s, rec_field(l, a))
        parts.append(ttc.Arrow(keep, keep))
    return _left_nested(parts)


def _left_nested(parts: list[ttc.Type]) -> ttc.Type:
    out = parts[0]
    for p in parts[1:]:
        out = ttc.Intersection(out, p)
    return out


# source repositories ----------------------------------------------------------


@dataclass
class SourceRepository:
    """Certified classes and mixins over a fixed label universe."""

    classes: list[tuple[lr.ClassDecl, tt.Type]]
    mixins: list[tuple[lr.MixinDecl, lr.MixinTyping]]
    universe: tuple[str, ...]
    prims: lr.PrimTable = field(default_factory=lambda: lr.STANDARD)

    def names(self) -> list[str]:
        return [c.name for c, _ in self.classes] + [m.name for m, _ in self.mixins]

    def class_named(self, name: str):
        return next(((c, t) for c, t in self.classes if c.name == name), None)

    def mixin_named(self, name: str):
        return next(((m, t) for m, t in self.mixins if m.name == name), None)


class CertificationError(ValueError):
    pass


def certify(
    classes: Sequence[lr.ClassDecl],
    mixins: Sequence[lr.MixinDecl],
    universe: Optional[Sequence[str]] = None,
    prims: lr.PrimTable = lr.STANDARD,
    iterations: int = 8,
) -> SourceRepository:
    """Type every declaration; the universe defaults to all labels in use."""
    typed_classes = []
    for c in classes:
        if c.state_type is None:
            raise CertificationError(f"class {c.name} needs a state type to be a combinator")
        try:
            typed_classes.append((c, lr.class_typing(c, iterations, prims)))
        except (lr.TypingFailure, lr.OutsideFragment) as e:
            raise CertificationError(str(e)) from e
    typed_mixins = []
    for m in mixins:
        try:
            typing = lr.mixin_typing(m, iterations, prims)
        except (lr.TypingFailure, lr.OutsideFragment, tt.NotARecord) as e:
            raise CertificationError(str(e)) from e
        if not m.labels():
            raise CertificationError(f"mixin {m.name} must define at least one method")
        typed_mixins.append((m, typing))
    used: list[str] = []
    for c, _ in typed_classes:
        used.extend(c.labels())
    for m, t in typed_mixins:
        used.extend(tt.lbl(t.requires))
        used.extend(m.labels())
    if universe is None:
        universe = tuple(dict.fromkeys(used))
    missing = set(used) - set(universe)
    if missing:
        raise CertificationError(f"labels {sorted(missing)} are not in the label universe")
    return SourceRepository(typed_classes, typed_mixins, tuple(universe), prims)


def build_repository(src: SourceRepository) -> dict[str, ttc.Type]:
    repo: dict[str, ttc.Type] = {}
    for c, typ in src.classes:
        try:
            repo[c.name] = encode(tt.normalize(typ))
        except EncodeError as e:
            raise EncodeError(f"{c.name}: {e}") from e
    for m, t in src.mixins:
        repo[m.name] = mixin_combinator_type(
            t.state, t.requires, t.provides, m.labels(), src.universe, m.name
        )
    return repo


def goal_record(goal: tt.Type) -> tt.Type:
    """The record part of a goal: the target of an arrow goal, else the goal."""
    goal = tt.normalize(goal)
    if isinstance(goal, tt.Arrow):
        return goal.target
    return goal


def k_bound(src: SourceRepository, goal: tt.Type) -> int:
    levels = [ttc.level(encode(tt.normalize(t.target))) for _, t in src.classes]
    levels += [ttc.level(encode(t.provides)) for _, t in src.mixins]
    levels.append(ttc.level(encode(goal_record(goal))))
    return max(levels)


def check_goal_labels(src: SourceRepository, goal: tt.Type) -> None:
    stray = _labels_in(goal) - set(src.universe)
    if stray:
        raise EncodeError(f"goal mentions labels outside the universe: {sorted(stray)}")


def _labels_in(t: tt.Type) -> set[str]:
    if isinstance(t, tt.RecordField):
        return {t.label} | _labels_in(t.value)
    if isinstance(t, (tt.Arrow,)):
        return _labels_in(t.source) | _labels_in(t.target)
    if isinstance(t, (tt.Intersection, tt.RecordMerge)):
        return _labels_in(t.left) | _labels_in(t.right)
    return set()


# pipelines ------------------------------------------------------------------


class PipelineError(ValueError):
    pass


def pipeline_names(e) -> list[str]:
    """``[Class, M1, ..., Mn]`` for ``Mn(...(M1 Class))``."""
    from .inhabitation import Apply, Leaf

    out = []
    while isinstance(e, Apply):
        if not isinstance(e.fun, Leaf):
            raise PipelineError("not a pipeline: the function part must be a single mixin")
        out.append(e.fun.name)
        e = e.arg
    if not isinstance(e, Leaf):
        raise PipelineError("not a pipeline")
    out.append(e.name)
    return out[::-1]


def _split(e, src: SourceRepository):
    names = pipeline_names(e)
    base = src.class_named(names[0])
    if base is None:
        if src.mixin_named(names[0]) is not None:
            raise PipelineError(f"pipeline must start with a class, not mixin {names[0]}")
        raise PipelineError(f"unknown class {names[0]}")
    ms = []
    for n in names[1:]:
        m = src.mixin_named(n)
        if m is None:
            what = "a class" if src.class_named(n) else "unknown"
            raise PipelineError(f"{n} is {what}, expected a mixin")
        ms.append(m)
    return base, ms


def compose_to_lambda(e, src: SourceRepository) -> lr.Term:
    (cls, _), ms = _split(e, src)
    term = lr.compile_class(cls)
    for m, _ in ms:
        term = lr.Application(lr.compile_mixin(m), term)
    return term


def pipeline_type(e, src: SourceRepository) -> tt.Type:
    """Record-calculus type of a pipeline from the certified component typings.

    Each mixin is applied through its typing schema: the current record must
    be below the requirement and the result is the merge with the provided
    record.
    """
    (cls, ctype), ms = _split(e, src)
    ctype = tt.normalize(ctype)
    sigma, rho = ctype.source, ctype.target
    for m, t in ms:
        if not tt.type_equal(sigma, t.state):
            raise PipelineError(f"{m.name} expects state {t.state}, got {sigma}")
        if not tt.subtype_tt(rho, t.requires):
            raise PipelineError(f"{m.name} requires {t.requires}, got {rho}")
        rho = tt.merge_types(rho, t.provides)
    return tt.Arrow(sigma, rho)
