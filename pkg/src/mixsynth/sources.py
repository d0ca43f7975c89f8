"""Loading repositories from ``.mix`` sources, raw JSON, or the bundled examples."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from . import syntax
from . import translation as tr
from . import types_ttc as ttc

BUNDLED = ("running", "extended", "full", "crypto", "semantic")


class RepositoryFormatError(ValueError):
    pass


@dataclass
class LoadedRepository:
    """A combinator repository, with its certified sources when it came from a ``.mix`` file."""

    name: str
    delta: dict[str, ttc.Type]
    source: Optional[tr.SourceRepository] = None


def _read(spec: str) -> tuple[str, str]:
    if spec in BUNDLED:
        folder = resources.files("mixsynth") / "data"
        for ext in (".mix", ".json"):
            f = folder / (spec + ext)
            if f.is_file():
                return spec + ext, f.read_text(encoding="utf-8")
    path = Path(spec)
    return path.name, path.read_text(encoding="utf-8")


def load(spec: str, iterations: int = 8) -> LoadedRepository:
    """Load a file path or bundled name.

    ``.json`` files hold raw combinator types; anything else is parsed as a
    source file whose declarations are certified and translated.
    Certification errors surface as ``translation.CertificationError``.
    """
    name, text = _read(spec)
    if name.endswith(".json"):
        return LoadedRepository(name, parse_raw(text))
    src = syntax.parse_source(text)
    certified = tr.certify(src.classes, src.mixins, src.labels, src.prims, iterations)
    return LoadedRepository(name, tr.build_repository(certified), certified)


def parse_raw(text: str) -> dict[str, ttc.Type]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RepositoryFormatError(f"invalid JSON: {e}") from e
    combos = data.get("combinators") if isinstance(data, dict) else None
    if not isinstance(combos, dict) or not combos:
        raise RepositoryFormatError("expected an object with a non-empty 'combinators' map")
    out = {}
    for n, t in combos.items():
        try:
            out[n] = syntax.parse_ttc(t)
        except syntax.ParseError as e:
            raise RepositoryFormatError(f"{n}: {e}") from e
    return out


def dump_raw(delta: dict[str, ttc.Type], description: str = "") -> str:
    data = {"description": description} if description else {}
    data["combinators"] = {n: ttc.render(t) for n, t in delta.items()}
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
