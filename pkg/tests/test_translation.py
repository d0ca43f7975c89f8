import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixsynth import inhabitation as inh
from mixsynth import lambda_r as lr
from mixsynth import translation as tr
from mixsynth import types_tt as tt
from mixsynth import types_ttc as ttc
from mixsynth.syntax import parse_pipeline, parse_source, parse_tt as T, parse_ttc as P

import oracles
from conftest import FIRST_GOAL, SECOND_GOAL
from strategies import canonical_records, merge_free_tt

UNIVERSE = ("get", "set", "succ", "succTwice", "compare")


def keep(m, l):
    """The pass-through component for label ``l`` of mixin ``m``."""
    return f"((Int -> rec({l}('{m}.{l}))) -> (Int -> rec({l}('{m}.{l}))))"


# the repository listing of the worked example, variables scoped per mixin
PAPER_DELTA = {
    "Nat": "Int -> rec(get(Int) & set(Int -> Int) & succ(Int))",
    "Comparable": " & ".join(
        ["((Int -> rec(get(Int))) -> (Int -> rec(compare(rec(get(Int)) -> Bool))))"]
        + [keep("Comparable", l) for l in ("get", "set", "succ", "succTwice")]
    ),
    "SuccTwice": " & ".join(
        ["((Int -> rec(succ(Int))) -> (Int -> rec(succTwice(Int))))"]
        + [keep("SuccTwice", l) for l in ("get", "set", "succ", "compare")]
    ),
    "SuccDelta": " & ".join(
        ["((Int -> rec(get(Int) & set(Int -> Int))) -> (Int -> rec(succ(Int -> Int))))"]
        + [keep("SuccDelta", l) for l in ("get", "set", "succTwice", "compare")]
    ),
}


def enc(text):
    return tr.encode(tt.normalize(T(text)))


class TestEncode:
    def test_record(self):
        assert tr.encode(T("<get : Int> & <succ : Int>")) == P("rec(get(Int)) & rec(succ(Int))")

    def test_empty(self):
        assert tr.encode(tt.EMPTY) == P("rec(omega)")

    def test_homomorphic(self):
        assert tr.encode(T("Int & Bool -> <l : omega>")) == P("Int & Bool -> rec(l(omega))")

    def test_merge_rejected(self):
        with pytest.raises(tr.EncodeError, match="normalize"):
            tr.encode(T("<a : Int> ++ <b : Int>"))

    def test_reserved_label(self):
        with pytest.raises(tr.EncodeError):
            tr.encode(T("<rec : Int>"))


class TestDecode:
    def test_examples(self):
        assert tr.decode(P("rec(get(Int))")) == T("<get : Int>")
        assert tr.decode(P("Int -> Int")) == T("Int -> Int")

    def test_variable(self):
        with pytest.raises(tr.DecodeError):
            tr.decode(P("rec(get('a))"))

    def test_out_of_image(self):
        with pytest.raises(tr.DecodeError):
            tr.decode(P("get(Int)"))

    @settings(max_examples=300)
    @given(merge_free_tt())
    def test_left_inverse_on_image(self, t):
        e = tr.encode(t)
        assert ttc.canon(tr.encode(tr.decode(e))) == ttc.canon(e)


class TestEqualityCorrespondence:
    @settings(max_examples=500)
    @given(merge_free_tt(), merge_free_tt())
    def test_random_pairs(self, s, t):
        assert tt.type_equal(s, t) == ttc.equal(tr.encode(s), tr.encode(t))

    @settings(max_examples=300)
    @given(merge_free_tt(), merge_free_tt())
    def test_equal_by_construction(self, s, t):
        u, v = tt.Intersection(s, t), tt.Intersection(t, tt.Intersection(s, s))
        assert ttc.equal(tr.encode(u), tr.encode(v))

    @settings(max_examples=500)
    @given(canonical_records(), canonical_records())
    def test_against_record_oracle(self, s, t):
        same = oracles.record_leq(s, t) and oracles.record_leq(t, s)
        assert same == ttc.equal(tr.encode(s), tr.encode(t))


class TestMixinCombinatorType:
    def test_comparable(self, running):
        m, t = running.source.mixin_named("Comparable")
        got = tr.mixin_combinator_type(t.state, t.requires, t.provides, m.labels(), UNIVERSE, m.name)
        assert ttc.equal(got, P(PAPER_DELTA["Comparable"]))
        assert len(list(_components(got))) == 5

    def test_succ_delta(self, extended):
        assert ttc.equal(extended.delta["SuccDelta"], P(PAPER_DELTA["SuccDelta"]))

    def test_all_labels_provided(self):
        got = tr.mixin_combinator_type(T("Int"), tt.EMPTY, T("<b : Int>"), ["b"], ["b"], "M")
        assert got == P("(Int -> rec(omega)) -> (Int -> rec(b(Int)))")

    def test_label_outside_universe(self):
        with pytest.raises(tr.EncodeError, match="universe"):
            tr.mixin_combinator_type(T("Int"), tt.EMPTY, T("<z : Int>"), ["z"], ["a"], "M")

    def test_variables_are_scoped(self, extended):
        seen = {}
        for name, t in extended.delta.items():
            for v in ttc.variables(t):
                assert v.startswith(name + ".")
                assert v not in seen
                seen[v] = name


def _components(t):
    if isinstance(t, ttc.Intersection):
        yield from _components(t.left)
        yield from _components(t.right)
    else:
        yield t


class TestBuildRepository:
    def test_running_matches_listing(self, running):
        assert list(running.delta) == ["Nat", "Comparable", "SuccTwice"]
        for name, t in running.delta.items():
            assert ttc.equal(t, P(PAPER_DELTA[name])), name

    def test_adding_a_mixin_leaves_entries_alone(self, running, extended):
        for name, t in running.delta.items():
            assert extended.delta[name] == t

    def test_classes_only(self, running):
        src = tr.certify([c for c, _ in running.source.classes], [])
        assert list(tr.build_repository(src)) == ["Nat"]

    def test_new_label_adds_one_component_per_mixin(self, running):
        src = running.source
        wider = tr.SourceRepository(src.classes, src.mixins, src.universe + ("extra",))
        before, after = tr.build_repository(src), tr.build_repository(wider)
        for m, _ in src.mixins:
            assert len(list(_components(after[m.name]))) == len(list(_components(before[m.name]))) + 1
        assert after["Nat"] == before["Nat"]

    def test_size_is_linear_in_labels_times_mixins(self, extended):
        src, delta = extended.source, extended.delta
        n_labels, n_mixins, n_classes = len(src.universe), len(src.mixins), len(src.classes)
        # each pass-through component over an atomic state is 11 nodes plus one for the meet
        head = max(ttc.size(next(_components(delta[m.name]))) for m, _ in src.mixins)
        cls = max(ttc.size(delta[c.name]) for c, _ in src.classes)
        total = sum(ttc.size(t) for t in delta.values())
        assert total <= (12 * n_labels + head) * n_mixins + cls * n_classes
        for m, _ in src.mixins:
            extra = ttc.size(delta[m.name]) - ttc.size(next(_components(delta[m.name])))
            assert extra == 12 * (n_labels - len(m.labels()))


class TestCertify:
    def test_mixin_needs_methods(self):
        src = parse_source("mixin Empty state: Int requires <> { }")
        with pytest.raises(tr.CertificationError, match="at least one"):
            tr.certify([], list(src.mixins))

    def test_class_needs_state(self):
        src = parse_source("class C1 { l = 3; }")
        with pytest.raises(tr.CertificationError, match="state"):
            tr.certify(list(src.classes), [])

    def test_universe_must_cover(self, running):
        with pytest.raises(tr.CertificationError, match="universe"):
            tr.certify([c for c, _ in running.source.classes], [], universe=("get",))

    def test_typing_failure(self):
        src = parse_source("class B state: Int { l : Bool = state; }")
        with pytest.raises(tr.CertificationError):
            tr.certify(list(src.classes), [])


class TestKBound:
    def test_first_query(self, running):
        k = tr.k_bound(running.source, T(FIRST_GOAL))
        assert k == oracles.level(enc("<succ : Int, compare : <get : Int> -> Bool, succTwice : Int>"))
        assert k == 5

    def test_flat_repository_with_empty_goal(self):
        src = parse_source("class Flat state: Int { a : Int = state; }")
        repo = tr.certify(list(src.classes), [])
        assert tr.k_bound(repo, tt.EMPTY) == 2

    def test_empty_repository(self):
        repo = tr.certify([], [], universe=("l",))
        assert tr.k_bound(repo, T("<l : Int>")) == 2

    def test_goal_labels(self, running):
        with pytest.raises(tr.EncodeError, match="outside"):
            tr.check_goal_labels(running.source, T("Int -> <nope : Int>"))


class TestPipelines:
    def test_compose(self, running):
        src = running.source
        got = tr.compose_to_lambda(parse_pipeline("Nat | Comparable | SuccTwice"), src)
        nat, comp, twice = (
            lr.compile_class(src.class_named("Nat")[0]),
            lr.compile_mixin(src.mixin_named("Comparable")[0]),
            lr.compile_mixin(src.mixin_named("SuccTwice")[0]),
        )
        assert got == lr.Application(twice, lr.Application(comp, nat))

    def test_bare_class(self, running):
        got = tr.compose_to_lambda(inh.Leaf("Nat"), running.source)
        assert got == lr.compile_class(running.source.class_named("Nat")[0])

    @pytest.mark.parametrize("text", ["Comparable | Nat", "Nat Nat", "Nat | Missing", "Nat | Nat"])
    def test_bad_shapes(self, running, text):
        with pytest.raises(tr.PipelineError):
            tr.compose_to_lambda(parse_pipeline(text), running.source)

    def test_non_pipeline(self, running):
        e = inh.Apply(inh.Apply(inh.Leaf("Comparable"), inh.Leaf("Nat")), inh.Leaf("Nat"))
        with pytest.raises(tr.PipelineError):
            tr.pipeline_names(e)

    def test_pipeline_type(self, running):
        got = tr.pipeline_type(parse_pipeline("Nat | Comparable | SuccTwice"), running.source)
        want = T(
            "Int -> <get : Int, set : Int -> Int, succ : Int, "
            "compare : <get : Int> -> Bool, succTwice : Int>"
        )
        assert tt.type_equal(got, want)

    def test_order_matters(self, extended):
        with pytest.raises(tr.PipelineError, match="SuccTwice requires"):
            tr.pipeline_type(parse_pipeline("Nat | SuccDelta | SuccTwice"), extended.source)


# instance checks of the translation lemmas ------------------------------------

QUERY_PIPELINES = [
    ("running", "Nat | Comparable | SuccTwice"),
    ("extended", "Nat | SuccTwice | SuccDelta"),
    ("full", "Nat | SuccTwice | Parity"),
]


def _fields(rho):
    return oracles.record_map(tt.normalize(rho))


def _completeness_subst(m, rho):
    """alpha_l := the encoded field type of the argument record ``rho`` for labels
    the mixin leaves alone, omega for the others."""
    fields = _fields(rho)
    return {
        tr.mixin_variable(m.name, l).name: (
            tr.encode(tt.normalize(fields[l])) if l in fields and l not in m.labels() else ttc.OMEGA
        )
        for l in UNIVERSE
        if l not in m.labels()
    }


def _chains(repos):
    """(mixin, typing, record it is applied to) along every pinned pipeline."""
    for repo_name, text in QUERY_PIPELINES:
        src = repos[repo_name].source
        names = tr.pipeline_names(parse_pipeline(text))
        rho = tt.normalize(src.class_named(names[0])[1]).target
        for n in names[1:]:
            m, t = src.mixin_named(n)
            yield repo_name, m, t, rho
            rho = tt.merge_types(rho, t.provides)


@pytest.fixture
def repos(running, extended, full):
    return {"running": running, "extended": extended, "full": full}


def test_translation_soundness_instances(repos):
    checked = 0
    for repo_name, m, t, rho in _chains(repos):
        delta = repos[repo_name].delta
        inst = ttc.apply_subst(_completeness_subst(m, rho), delta[m.name])
        decoded = tr.decode(inst)
        kept = [tt.RecordField(l, v) for l, v in _fields(rho).items() if l not in m.labels()]
        a = tt.normalize(tt.intersect([t.requires, *kept]))
        b = tt.normalize(tt.intersect([t.provides, *kept]))
        sigma = t.state
        assert tt.subtype_tt(decoded, tt.Arrow(tt.Arrow(sigma, a), tt.Arrow(sigma, b)))
        # the mixin body certifies against that requirement and yields b
        at_a = lr.mixin_typing(dataclasses.replace(m, requires=a), 8, repos[repo_name].source.prims)
        assert tt.subtype_tt(tt.merge_types(a, at_a.provides), b)
        checked += 1
    assert checked == 6


def _records_over_universe():
    values = st.sampled_from([T("Int"), T("Bool"), T("Int -> Int"), T("<get : Int>"), tt.OMEGA])
    return st.lists(st.tuples(st.sampled_from(UNIVERSE), values), max_size=5).map(
        lambda fs: tt.normalize(tt.intersect([tt.RecordField(l, v) for l, v in fs]))
        if fs
        else tt.EMPTY
    )


@pytest.mark.parametrize("name", ["Comparable", "SuccTwice", "SuccDelta", "Parity"])
def test_translation_completeness_instances(full, name):
    m, t = full.source.mixin_named(name)

    @settings(max_examples=50)
    @given(_records_over_universe())
    def check(rho):
        arg = tt.normalize(tt.Intersection(rho, t.requires))
        inst = ttc.apply_subst(_completeness_subst(m, arg), full.delta[name])
        lhs = tt.Arrow(t.state, arg)
        rhs = tt.Arrow(t.state, tt.merge_types(arg, t.provides))
        assert ttc.subtype(inst, tr.encode(tt.normalize(tt.Arrow(lhs, rhs))))

    check()


def test_end_to_end_soundness(running, extended, full):
    cases = [(running, FIRST_GOAL), (extended, SECOND_GOAL), (full, SECOND_GOAL), (full, FIRST_GOAL)]
    for repo, goal_text in cases:
        goal = T(goal_text)
        k = tr.k_bound(repo.source, goal)
        cfg = inh.SearchConfig(k, max_results=3, max_term_size=5)
        found = list(inh.inhabit(repo.delta, tr.encode(tt.normalize(goal)), cfg))
        assert found
        for e in found:
            assert tt.subtype_tt(tr.pipeline_type(e, repo.source), tr.decode(tr.encode(tt.normalize(goal))))
            compiled = tr.compose_to_lambda(e, repo.source)
            labels = tt.lbl(tr.pipeline_type(e, repo.source).target)
            for state in range(3):
                inst = lr.Application(compiled, lr.PrimInt(state))
                for l in labels:
                    lr.evaluate(lr.Selection(inst, l))
