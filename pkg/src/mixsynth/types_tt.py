"""Intersection types with records and the record merge ``+``.

Record types are built from ``<>``, unary fields ``<l : t>``, intersection and
merge.  Merge is right-biased and can always be eliminated: ``normalize``
flattens every record to a canonical label map.  Subtyping goes through the
constructor encoding and the path-based decision procedure of ``types_ttc``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union


@dataclass(frozen=True, slots=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Omega:
    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Arrow:
    source: Type
    target: Type

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Intersection:
    left: Type
    right: Type

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class RecordEmpty:
    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class RecordField:
    label: str
    value: Type

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class RecordMerge:
    left: Type
    right: Type

    def __str__(self) -> str:
        return render(self)


Type = Union[Constant, Omega, Arrow, Intersection, RecordEmpty, RecordField, RecordMerge]

OMEGA = Omega()
EMPTY = RecordEmpty()


class NotARecord(TypeError):
    """Raised when a record-sorted type was required."""


def intersect(types: Iterable[Type]) -> Type:
    items = list(types)
    if not items:
        return OMEGA
    result = items[-1]
    for t in reversed(items[:-1]):
        result = Intersection(t, result)
    return result


def record(entries: Iterable[tuple[str, Type]]) -> Type:
    """The record type with the given fields; ``<>`` when there are none."""
    items = list(entries)
    if not items:
        return EMPTY
    return intersect(RecordField(l, v) for l, v in items)


def components(t: Type) -> Iterator[Type]:
    if isinstance(t, Intersection):
        yield from components(t.left)
        yield from components(t.right)
    else:
        yield t


@lru_cache(maxsize=None)
def render(t: Type, unicode: bool = False) -> str:
    arrow, inter, top = (" → ", " ∩ ", "ω") if unicode else (" -> ", " & ", "omega")
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Omega):
        return top
    if isinstance(t, RecordEmpty):
        return "<>"
    if isinstance(t, (RecordField, Intersection)) and _is_flat_record(t):
        fields = ", ".join(
            f"{c.label} : {render(c.value, unicode)}" for c in components(t)
        )
        return f"<{fields}>"
    if isinstance(t, RecordMerge):
        right = render(t.right, unicode)
        if isinstance(t.right, RecordMerge):
            right = f"({right})"
        return f"{_wrap(t.left, unicode, RecordMerge)} ++ {right}"
    if isinstance(t, Intersection):
        return inter.join(_wrap(c, unicode, Arrow, RecordMerge) for c in components(t))
    src = _wrap(t.source, unicode, Arrow, Intersection, RecordMerge)
    return src + arrow + _wrap(t.target, unicode, RecordMerge)


def _wrap(t: Type, unicode: bool, *kinds: type) -> str:
    s = render(t, unicode)
    if isinstance(t, kinds) and not _is_flat_record(t):
        return f"({s})"
    return s


def _is_flat_record(t: Type) -> bool:
    cs = list(components(t))
    if not all(isinstance(c, RecordField) for c in cs):
        return False
    labels = [c.label for c in cs]
    return len(set(labels)) == len(labels)


# record sort ----------------------------------------------------------------


def is_record_sort(t: Type) -> bool:
    if isinstance(t, (RecordEmpty, RecordField)):
        return True
    if isinstance(t, (RecordMerge, Intersection)):
        return is_record_sort(t.left) and is_record_sort(t.right)
    return False


def lbl(t: Type) -> frozenset[str]:
    """Labels mentioned by a record-sorted type."""
    if isinstance(t, RecordEmpty):
        return frozenset()
    if isinstance(t, RecordField):
        return frozenset([t.label])
    if isinstance(t, (RecordMerge, Intersection)) and is_record_sort(t):
        return lbl(t.left) | lbl(t.right)
    raise NotARecord(f"not a record type: {render(t)}")


# normalization ----------------------------------------------------------------


def _entries(t: Type) -> dict[str, Type]:
    """Canonical label map of a record-sorted type, values not yet normalized."""
    if isinstance(t, RecordEmpty):
        return {}
    if isinstance(t, RecordField):
        return {t.label: t.value}
    if isinstance(t, RecordMerge):
        merged = _entries(t.left)
        merged.update(_entries(t.right))
        return merged
    left, right = _entries(t.left), _entries(t.right)
    for l, v in right.items():
        left[l] = Intersection(left[l], v) if l in left else v
    return left


@lru_cache(maxsize=1 << 16)
def normalize(t: Type) -> Type:
    """A ``+``-free type equal to ``t`` with every record flattened.

    Records become intersections of unary fields with distinct labels in
    label order; other intersection components are sorted and deduplicated,
    ``omega`` components are dropped.  ``<l : omega>`` is kept as is.
    """
    if isinstance(t, (Constant, Omega, RecordEmpty)):
        return t
    if isinstance(t, Arrow):
        return Arrow(normalize(t.source), normalize(t.target))
    if isinstance(t, RecordField):
        return RecordField(t.label, normalize(t.value))
    if isinstance(t, RecordMerge):
        return _render_entries(_entries(t))
    others: list[Type] = []
    fields: dict[str, Type] = {}
    is_rec = False
    for c in components(t):
        if is_record_sort(c):
            is_rec = True
            for l, v in _entries(c).items():
                fields[l] = Intersection(fields[l], v) if l in fields else v
        else:
            n = normalize(c)
            if not isinstance(n, Omega):
                others.extend(components(n))
    parts = sorted(set(others), key=render)
    if is_rec:
        parts.extend(components(_render_entries(fields)))
    return intersect(parts)


def _render_entries(entries: dict[str, Type]) -> Type:
    return record((l, normalize(entries[l])) for l in sorted(entries))


def entries(t: Type) -> dict[str, Type]:
    """Label map of a record-sorted type with normalized values."""
    if not is_record_sort(t):
        raise NotARecord(f"not a record type: {render(t)}")
    return {l: normalize(v) for l, v in sorted(_entries(t).items())}


def merge_types(r1: Type, r2: Type) -> Type:
    """Normalized ``r1 + r2``; fields of ``r2`` win."""
    if not (is_record_sort(r1) and is_record_sort(r2)):
        raise NotARecord("merge needs two record types")
    return normalize(RecordMerge(r1, r2))


# subtyping ------------------------------------------------------------------


def subtype_tt(s: Type, t: Type) -> bool:
    from . import translation, types_ttc

    return types_ttc.subtype(
        translation.encode(normalize(s)), translation.encode(normalize(t))
    )


def type_equal(s: Type, t: Type) -> bool:
    return subtype_tt(s, t) and subtype_tt(t, s)


def tt_paths(t: Type) -> list[Type]:
    """Split a type into single-spine pieces whose intersection equals it.

    Record fields whose value has no pieces stay as ``<l : omega>`` since a
    record with a field is more than ``omega``.
    """
    t = normalize(t)
    if isinstance(t, Omega):
        return []
    if isinstance(t, (Constant, RecordEmpty)):
        return [t]
    if isinstance(t, Intersection):
        return list(dict.fromkeys(tt_paths(t.left) + tt_paths(t.right)))
    if isinstance(t, Arrow):
        return [Arrow(t.source, p) for p in tt_paths(t.target)]
    if isinstance(t, RecordField):
        inner = tt_paths(t.value)
        if not inner:
            return [RecordField(t.label, OMEGA)]
        return [RecordField(t.label, p) for p in inner]
    raise AssertionError(t)
