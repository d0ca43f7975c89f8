"""Command-line interface: ``mixsynth {synth,check,eval,typecheck,encode,subtype}``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import inhabitation as inh
from . import lambda_r as lr
from . import sources, syntax
from . import translation as tr
from . import types_tt as tt
from . import types_ttc as ttc

OK, NOT_FOUND, INPUT_ERROR, CERT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass(frozen=True)
class QueryResult:
    term: inh.Term
    size: int
    k: int
    elapsed_ms: float
    transcript: tuple[tuple[str, str], ...] = ()

    def pipeline(self, unicode: bool = False) -> str:
        return inh.render_term(self.term, unicode)

    def as_json(self) -> dict:
        out = {
            "pipeline": self.pipeline(),
            "size": self.size,
            "k": self.k,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.transcript:
            out["eval"] = dict(self.transcript)
        return out


# helpers ----------------------------------------------------------------------


def _load(path: str) -> sources.LoadedRepository:
    try:
        return sources.load(path)
    except OSError as e:
        raise InputError(f"cannot read repository {path}: {e.strerror or e}") from e
    except (syntax.ParseError, sources.RepositoryFormatError) as e:
        raise InputError(f"{path}: {e}") from e


def parse_goal(text: str, repo: Optional[sources.LoadedRepository] = None):
    """Goal as (record-calculus type or None, constructor type).

    Record syntax is tried first; constructor syntax is the fallback.
    """
    try:
        goal = syntax.parse_tt(text)
    except syntax.ParseError as first:
        try:
            return None, syntax.parse_ttc(text)
        except syntax.ParseError:
            raise InputError(f"goal: {first}") from first
    if repo is not None and repo.source is not None:
        try:
            tr.check_goal_labels(repo.source, goal)
        except tr.EncodeError as e:
            raise InputError(str(e)) from e
    return goal, tr.encode(tt.normalize(goal))


def _default_k(repo: sources.LoadedRepository, goal_tt, goal: ttc.Type) -> int:
    if repo.source is not None and goal_tt is not None:
        return tr.k_bound(repo.source, goal_tt)
    return ttc.level(goal)


def _parse_pipeline(text: str, repo: sources.LoadedRepository) -> inh.Term:
    try:
        e = syntax.parse_pipeline(text)
    except syntax.ParseError as err:
        raise InputError(f"term: {err}") from err
    unknown = [n for n in inh.leaves(e) if n not in repo.delta]
    if unknown:
        raise InputError(f"unknown combinator {unknown[0]}")
    return e


def _parse_term(text: str, what: str) -> lr.Term:
    try:
        return syntax.parse_term(text)
    except syntax.ParseError as e:
        raise InputError(f"{what}: {e}") from e


def instance_transcript(
    compiled: lr.Term, labels: Sequence[str], state: lr.Term, fuel: int
) -> list[tuple[str, str]]:
    """Value of every method of the instance at ``state``."""
    inst = lr.Application(compiled, state)
    out = []
    for l in labels:
        try:
            out.append((l, lr.show(lr.evaluate(lr.Selection(inst, l), fuel))))
        except lr.StuckTerm as e:
            out.append((l, f"stuck: {e}"))
        except lr.FuelExhausted:
            out.append((l, "fuel exhausted"))
    return out


def _final_labels(e: inh.Term, src: tr.SourceRepository) -> list[str]:
    names = tr.pipeline_names(e)
    labels = list(src.class_named(names[0])[0].labels())
    for n in names[1:]:
        for l in src.mixin_named(n)[0].labels():
            if l not in labels:
                labels.append(l)
    return labels


# commands -------------------------------------------------------------------------


def cmd_synth(args) -> int:
    repo = _load(args.repo)
    goal_tt, goal = parse_goal(args.goal, repo)
    k = args.k if args.k is not None else _default_k(repo, goal_tt, goal)
    state = _parse_term(args.eval, "state") if args.eval is not None else None
    if state is not None and repo.source is None:
        raise InputError("--eval needs a repository with class and mixin sources")
    mode = inh.FULL if args.complete else inh.GOAL_DIRECTED
    last_k = k
    if args.k_auto:
        last_k = args.k_max if args.k_max is not None else k + 3
    results: list[QueryResult] = []
    start = time.perf_counter()
    while True:
        cfg = inh.SearchConfig(
            k,
            max_term_size=args.max_size,
            max_results=args.max_results,
            subst_mode=mode,
            jobs=args.jobs,
        )
        for e in inh.inhabit(repo.delta, goal, cfg):
            if not inh.check_inhabitant(repo.delta, e, goal, k, cfg):
                raise AssertionError(f"solver returned an ill-typed term {e}")
            transcript = ()
            if state is not None:
                try:
                    compiled = tr.compose_to_lambda(e, repo.source)
                    labels = _final_labels(e, repo.source)
                    transcript = tuple(instance_transcript(compiled, labels, state, args.fuel))
                except tr.PipelineError as err:
                    transcript = (("error", str(err)),)
            elapsed = (time.perf_counter() - start) * 1000
            results.append(QueryResult(e, inh.term_size(e), k, elapsed, transcript))
        if results or k >= last_k:
            break
        k += 1
    if args.json:
        print(json.dumps([r.as_json() for r in results], ensure_ascii=False))
    elif not results:
        print(f"no inhabitant within bounds (k={k}, max-size={args.max_size}, mode={mode})")
    else:
        for r in results:
            print(r.pipeline(args.unicode))
            for l, v in r.transcript:
                print(f"  {l} = {v}")
    return OK if results else NOT_FOUND


def cmd_check(args) -> int:
    repo = _load(args.repo)
    goal_tt, goal = parse_goal(args.goal, repo)
    e = _parse_pipeline(args.term, repo)
    k = args.k if args.k is not None else _default_k(repo, goal_tt, goal)
    ok = inh.check_inhabitant(repo.delta, e, goal, k)
    print("true" if ok else "false")
    return OK if ok else NOT_FOUND


def cmd_eval(args) -> int:
    repo = _load(args.repo)
    if repo.source is None:
        raise InputError("eval needs a repository with class and mixin sources")
    e = _parse_pipeline(args.term, repo)
    try:
        compiled = tr.compose_to_lambda(e, repo.source)
    except tr.PipelineError as err:
        raise InputError(str(err)) from err
    state = _parse_term(args.state, "state")
    call: lr.Term = lr.Selection(lr.Application(compiled, state), args.method)
    for a in args.arg:
        call = lr.Application(call, lr.subst(_parse_term(a, "argument"), "pipeline", compiled))
    try:
        value = lr.evaluate(call, args.fuel)
    except lr.StuckTerm as err:
        print(f"stuck: {err}")
        return INPUT_ERROR
    except lr.FuelExhausted:
        print(f"fuel exhausted after {args.fuel} steps")
        return INPUT_ERROR
    print(lr.show(value))
    return OK


def cmd_typecheck(args) -> int:
    repo = _load(args.repo)
    if repo.source is None:
        raise InputError("typecheck needs a repository with class and mixin sources")
    src = repo.source
    u = args.unicode
    for c, t in src.classes:
        if args.name in (None, c.name):
            print(f"{c.name} : {tt.render(t, u)}")
    for m, t in src.mixins:
        if args.name in (None, m.name):
            print(
                f"{m.name} : state {tt.render(t.state, u)}, "
                f"requires {tt.render(t.requires, u)}, provides {tt.render(t.provides, u)}"
            )
    if args.delta:
        for n, t in repo.delta.items():
            if args.name in (None, n):
                print(f"{n} :: {ttc.render(t, u)}")
    if args.name is not None and args.name not in repo.delta:
        raise InputError(f"no declaration named {args.name}")
    return OK


def cmd_encode(args) -> int:
    try:
        t = syntax.parse_tt(args.type)
    except syntax.ParseError as e:
        raise InputError(str(e)) from e
    print(ttc.render(tr.encode(tt.normalize(t)), args.unicode))
    return OK


def cmd_subtype(args) -> int:
    try:
        if args.ttc:
            ok = ttc.subtype(syntax.parse_ttc(args.left), syntax.parse_ttc(args.right))
        else:
            ok = tt.subtype_tt(syntax.parse_tt(args.left), syntax.parse_tt(args.right))
    except syntax.ParseError as e:
        raise InputError(str(e)) from e
    print("true" if ok else "false")
    return OK if ok else NOT_FOUND


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mixsynth", description="Synthesize mixin pipelines from typed repositories."
    )
    sub = p.add_subparsers(dest="command", required=True)

    def repo_arg(q):
        q.add_argument(
            "--repo",
            required=True,
            help="repository file (.mix or .json) or a bundled name: "
            + ", ".join(sources.BUNDLED),
        )

    s = sub.add_parser("synth", help="find pipelines inhabiting a goal type")
    repo_arg(s)
    s.add_argument("--goal", required=True)
    s.add_argument("--k", type=int, help="level bound (default: computed from the inputs)")
    s.add_argument("--k-auto", action="store_true", help="raise k until something is found")
    s.add_argument("--k-max", type=int, help="upper end for --k-auto (default: k + 3)")
    s.add_argument("--max-results", type=int, default=1)
    s.add_argument("--max-size", type=int, default=9)
    s.add_argument("--complete", action="store_true", help="enumerate all substitutions")
    s.add_argument("--eval", metavar="STATE", help="instantiate each result at STATE")
    s.add_argument("--fuel", type=int, default=10_000)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--unicode", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_synth)

    c = sub.add_parser("check", help="type-check a pipeline against a goal")
    repo_arg(c)
    c.add_argument("--term", required=True)
    c.add_argument("--goal", required=True)
    c.add_argument("--k", type=int)
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("eval", help="call a method of a pipeline instance")
    repo_arg(e)
    e.add_argument("--term", required=True)
    e.add_argument("--state", required=True)
    e.add_argument("--method", required=True)
    e.add_argument(
        "--arg",
        action="append",
        default=[],
        help="argument term; the name 'pipeline' refers to the compiled pipeline",
    )
    e.add_argument("--fuel", type=int, default=10_000)
    e.set_defaults(run=cmd_eval)

    t = sub.add_parser("typecheck", help="print certified types of declarations")
    repo_arg(t)
    t.add_argument("--name")
    t.add_argument("--delta", action="store_true", help="also print combinator types")
    t.add_argument("--unicode", action="store_true")
    t.set_defaults(run=cmd_typecheck)

    n = sub.add_parser("encode", help="translate a record type to constructor form")
    n.add_argument("type")
    n.add_argument("--unicode", action="store_true")
    n.set_defaults(run=cmd_encode)

    b = sub.add_parser("subtype", help="decide LEFT <= RIGHT")
    b.add_argument("left")
    b.add_argument("right")
    b.add_argument("--ttc", action="store_true", help="parse both sides as constructor types")
    b.set_defaults(run=cmd_subtype)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except ValueError as e:
        if isinstance(e, tr.CertificationError):
            print(f"certification failed: {e}", file=sys.stderr)
            return CERT_ERROR
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
