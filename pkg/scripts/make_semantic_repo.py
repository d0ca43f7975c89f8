"""Regenerate the bundled repository with Even/Odd refinements.

Starts from the certified translation of ``full.mix`` and intersects the
refined types of Nat, SuccTwice and Parity into their entries.  The
pass-through components of every mixin are kept.

    python3 scripts/make_semantic_repo.py [OUTPUT]
"""

import sys
from importlib import resources

from mixsynth import sources, syntax
from mixsynth import types_ttc as ttc

E, O = "(Int & Even)", "(Int & Odd)"

REFINED = {
    "Nat": f"({E} -> rec(get({E}))) & ({O} -> rec(get({O})))"
    " & (Int -> rec(set((Int -> Int) & (Even -> Even) & (Odd -> Odd))))"
    f" & ({E} -> rec(succ({O}))) & ({O} -> rec(succ({E})))",
    "SuccTwice": f"(({E} -> rec(succ({O}))) & ({O} -> rec(succ({E}))))"
    f" -> ({E} -> rec(succTwice({E}))) & ({O} -> rec(succTwice({O})))",
    "Parity": f"(({E} -> rec(succTwice({E}))) & ({O} -> rec(succTwice({O}))))"
    f" -> ({E} -> rec(succ({E}))) & ({O} -> rec(succ({O})))",
}


def build() -> dict:
    delta = sources.load("full").delta
    out = {}
    for name, t in delta.items():
        if name == "Nat":
            out[name] = syntax.parse_ttc(REFINED[name])
        elif name in REFINED:
            out[name] = ttc.Intersection(syntax.parse_ttc(REFINED[name]), t)
        else:
            out[name] = t
    return out


def main() -> None:
    default = resources.files("mixsynth") / "data" / "semantic.json"
    target = sys.argv[1] if len(sys.argv) > 1 else str(default)
    text = sources.dump_raw(
        build(), "Running example with Even/Odd refinements on Nat, SuccTwice and Parity."
    )
    with open(target, "w", encoding="utf-8") as f:
        f.write(text)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
