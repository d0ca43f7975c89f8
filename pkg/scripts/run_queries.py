"""Run the worked synthesis queries against the bundled repositories.

Prints each goal, the first pipeline found in both substitution modes and
the time taken.  Pass ``--quick`` to skip the slower full mode.

    python3 scripts/run_queries.py [--quick]
"""

import argparse
import time

from mixsynth import inhabitation as inh
from mixsynth import sources, translation
from mixsynth import types_tt as tt
from mixsynth import types_ttc as ttc
from mixsynth.syntax import parse_tt, parse_ttc

QUERIES = [
    ("running", "tt", "Int -> <succ : Int, compare : <get : Int> -> Bool, succTwice : Int>"),
    ("extended", "tt", "Int -> <succ : Int -> Int, succTwice : Int>"),
    ("semantic", "ttc", "Int & Even -> rec(succ(Int & Even))"),
    ("crypto", "ttc", "String -> rec(get(String & Enc(Plain & Time & Sign(Plain & Time))))"),
    ("crypto", "ttc", "String -> rec(get(String & Enc(Enc(Enc(Plain)))))"),
]


def goal_and_k(repo, kind, text):
    if kind == "tt":
        source_goal = parse_tt(text)
        return translation.encode(tt.normalize(source_goal)), translation.k_bound(repo.source, source_goal)
    goal = parse_ttc(text)
    return goal, ttc.level(goal)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="goal-directed mode only")
    args = parser.parse_args()
    modes = [inh.GOAL_DIRECTED] if args.quick else [inh.GOAL_DIRECTED, inh.FULL]
    for name, kind, text in QUERIES:
        repo = sources.load(name)
        goal, k = goal_and_k(repo, kind, text)
        print(f"[{name}] {text}  (k={k})")
        for mode in modes:
            start = time.perf_counter()
            found = next(iter(inh.inhabit(repo.delta, goal, inh.SearchConfig(k, subst_mode=mode))), None)
            shown = inh.render_term(found) if found is not None else "nothing found"
            print(f"  {mode:<13} {shown}  ({time.perf_counter() - start:.2f}s)")


if __name__ == "__main__":
    main()
