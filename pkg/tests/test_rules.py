"""Each inference rule against its recorded chart instances and its guards."""

import random

import pytest

from les_deduce.algebra import (
    ActionFact,
    ActionTable,
    Element,
    ModuleId,
    RingGenerator,
    Value,
    span_of,
)
from les_deduce.chartdata import ChartFile, SesRecord, expand_periodic
from les_deduce.rules import (
    exceptional_verdicts,
    fact_labels,
    rule_exact,
    rule_linearity,
    rule_periodic,
    rule_t1,
    rule_t2,
    rule_t3,
    rule_t4,
    saturate,
)
from les_deduce.sequences import FactStore, fact_key


def known(store, map_name, key):
    """Value of a fact looked up by element key string."""
    return store.facts.get(f"{map_name}|{key}")


def rules_for(store, map_name, key):
    return {d.rule for d in store.derivations.get(f"{map_name}|{key}", [])}


def mini_chart(records, elements, actions=(), axioms=()):
    return ChartFile(
        schema_version="1",
        max_stem=300,
        generators={"κ̄": RingGenerator("κ̄", 20, 4)},
        elements={e.key: e for e in elements},
        actions=ActionTable(actions),
        classifications=[],
        hurewicz={},
        orders={},
        tmf_names={},
        tmf_name_overrides={},
        nu_multiples=frozenset(),
        prior_order_two=frozenset(),
        exceptional_sets={"EM": (), "FS": (), "FM": ()},
        delta8_closure=False,
        ses_records=list(records),
        axioms=list(axioms),
        periodic_presentations={},
    )


class TestPeriodicFormulas:
    def test_inclusion_on_v1_powers(self, chart):
        store = FactStore()
        emissions = rule_periodic(store, chart)
        by_source = {(e.map, e.source.name): e.value for e in emissions}
        # i₂(Δ²v₁⁴) = Δ²v₁⁴
        value = by_source[("i2", "Δ²v₁⁴")]
        assert {el.name for el in value.span} == {"Δ²v₁⁴"}

    def test_projection_to_sphere(self, chart):
        store = FactStore()
        emissions = rule_periodic(store, chart)
        by_source = {(e.map, e.source.name): e.value for e in emissions}
        # p₁(v₁⁵η) = c₄η²
        value = by_source[("p1", "v₁⁵η")]
        assert {el.name for el in value.span} == {"c₄η²"}

    def test_c6_terms_gated_at_k_one(self, chart):
        # No 2-divisible c₆ monomial exists below c₄-power one, so no
        # inclusion fact can fire outside the stated range.
        monomials = expand_periodic(ModuleId.S, 176)
        assert all(m.v1 >= 1 for m in monomials if m.c6)

    def test_per_facts_do_not_reach_the_table(self, store):
        assert all(not e.periodic for e in store.p3_image)


class TestExceptionalRule:
    def test_exceptional_inclusion_upgraded_to_torsion_value(self, store):
        # i₂ of the degree-50 exceptional class ends up on the surviving
        # torsion generator, upgraded from mere nonzeroness.
        value = known(store, "i2", "M:m_{50,6}")
        assert value is not None and {e.name for e in value.span} == {"y_{50,6}"}
        assert "EXC" in rules_for(store, "i2", "M:m_{50,6}")

    def test_sphere_level_exceptional(self, store):
        value = known(store, "i1", "S:s_{24,0}")
        assert {e.name for e in value.span} == {"m_{24,6}"}
        assert "EXC" in rules_for(store, "i1", "S:s_{24,0}")

    def test_verdicts(self, chart):
        verdicts = {(v.element.key, v.context.value): v.verdict for v in exceptional_verdicts(chart)}
        assert verdicts[("M:m_{50,6}", "LES-2.3")] is True
        assert verdicts[("M:m_{50,6}", "LES-2.4")] is False
        assert ("M:m_{48,6}", "LES-2.3") not in verdicts  # torsion: no verdict

    def test_delta8_closure_verdicts(self, chart):
        from les_deduce.chartdata import delta8_extend

        ext = delta8_extend(chart, 1)
        verdicts = {(v.element.key, v.context.value): v.verdict for v in exceptional_verdicts(ext)}
        assert verdicts[("M:m_{242,6}", "LES-2.3")] is True  # Δ⁸·m_{50,6}


class TestT1:
    def test_vanishing_kernel_zeroes(self, store):
        assert known(store, "p2", "Y:y_{3,1}").is_zero
        assert known(store, "p2", "Y:y_{161,7}").is_zero
        assert "T1" in rules_for(store, "p2", "Y:y_{3,1}")

    def test_guard_kernel_rank_one(self, store):
        assert "T1" not in rules_for(store, "p2", "Y:y_{45,3}")

    def test_lift_identification(self, store):
        value = known(store, "i1", "S:s_{24,0}")
        assert {e.name for e in value.span} == {"m_{24,6}"}
        assert "T1" in rules_for(store, "i1", "S:s_{24,0}")


class TestT2:
    def test_unique_generator(self, store):
        assert {e.name for e in known(store, "p2", "Y:y_{8,2}").span} == {"m_{6,2}"}
        assert {e.name for e in known(store, "p2", "Y:y_{167,3}").span} == {"m_{165,3}"}
        assert "T2" in rules_for(store, "p2", "Y:y_{8,2}")

    def test_guard_nonzero_cokernel(self, store):
        assert "T2" not in rules_for(store, "p2", "Y:y_{45,3}")

    def test_rank_two_kernel_gives_only_nonzeroness(self):
        mid = [Element(ModuleId.Y, 10, 1, "u"), Element(ModuleId.Y, 10, 3, "w")]
        ker = [Element(ModuleId.M, 8, 1, "k1"), Element(ModuleId.M, 8, 5, "k2")]
        record = SesRecord("SES-2.8", 10, tuple(mid), (), tuple(ker))
        chart = mini_chart([record], mid + ker)
        store = FactStore()
        for em in rule_t2(store, chart):
            store.insert(em.map, em.source, em.value, em.rule, em.inputs)
        assert known(store, "p2", "Y:u") == Value.nonzero_unknown()


class TestT3:
    def test_degree_45_shape(self, store):
        assert {e.name for e in known(store, "p2", "Y:y_{45,3}").span} == {"m_{43,9}"}
        assert known(store, "p2", "Y:y_{45,9}").is_zero
        assert {e.name for e in known(store, "i2", "M:m_{45,5}").span} == {"y_{45,9}"}
        assert "T3a" in rules_for(store, "p2", "Y:y_{45,3}")

    def test_degree_107_basis_matching(self, store):
        assert {e.name for e in known(store, "p2", "Y:y_{107,11}").span} == {"m_{105,17}"}
        assert {e.name for e in known(store, "p2", "Y:y_{107,3}").span} == {"m_{105,3}"}
        assert "T3b" in rules_for(store, "p2", "Y:y_{107,11}")

    def test_iso_shape_identifies_both_lifts(self, store):
        assert {e.name for e in known(store, "i1", "S:s_{105,17}").span} == {"m_{105,17}"}
        assert {e.name for e in known(store, "i1", "S:s_{105,3}").span} == {"m_{105,3}"}
        assert "T3a" in rules_for(store, "i1", "S:s_{105,3}")

    def test_high_class_above_kernel_dies(self, store):
        assert known(store, "p2", "Y:y_{57,11}").is_zero
        assert "T3a" in rules_for(store, "p2", "Y:y_{57,11}")

    def test_guard_silent_when_filtrations_reversed(self):
        # Cokernel filtration below both middle classes: no exclusion possible
        # (kernel sits high enough that the ceiling clause stays quiet too).
        c = Element(ModuleId.M, 10, 1, "c")
        mid = [Element(ModuleId.Y, 10, 2, "u"), Element(ModuleId.Y, 10, 5, "w")]
        ker = [Element(ModuleId.M, 8, 6, "k")]
        record = SesRecord("SES-2.8", 10, tuple(mid), (c,), tuple(ker))
        chart = mini_chart([record], [c] + mid + ker)
        assert rule_t3(FactStore(), chart) == []


class TestLinearity:
    def test_kappabar_pushforward(self, store):
        assert {e.name for e in known(store, "p2", "Y:y_{82,6}").span} == {"m_{80,16}"}
        assert "LIN" in rules_for(store, "p2", "Y:y_{82,6}")
        assert {e.name for e in known(store, "p2", "Y:y_{133,11}").span} == {"m_{131,17}"}

    def test_zero_action_on_value_kills_image(self, store):
        # κ̄·m_{126,20} = 0 forces the next projection in the chain to vanish.
        assert known(store, "p2", "Y:y_{148,18}").is_zero

    def test_guard_unknown_action(self):
        kbar = RingGenerator("κ̄", 20, 4)
        y = Element(ModuleId.Y, 10, 2, "y")
        ky = Element(ModuleId.Y, 30, 6, "ky")
        m = Element(ModuleId.M, 8, 2, "m")
        chart = mini_chart([], [y, ky, m], actions=[ActionFact(kbar, y, value=span_of(ky))])
        store = FactStore()
        store.insert("p2", y, Value.known(span_of(m)), "axiom")
        assert rule_linearity(store, chart) == []  # κ̄·m unrecorded


class TestT4:
    def test_degree_50(self, store):
        assert known(store, "p2", "Y:y_{50,6}").is_zero
        assert {e.name for e in known(store, "p2", "Y:y_{50,4}").span} == {"m_{48,6}"}
        assert "T4" in rules_for(store, "p2", "Y:y_{50,6}")
        assert "T4" in rules_for(store, "p2", "Y:y_{50,4}")

    def test_degree_70(self, store):
        assert known(store, "p2", "Y:y_{70,10}").is_zero
        assert {e.name for e in known(store, "p2", "Y:y_{70,8}").span} == {"m_{68,10}"}
        assert "T4" in rules_for(store, "p2", "Y:y_{70,8}")

    def test_fires_exactly_at_the_two_recorded_degrees(self, store):
        # Extra firings would be review events; the shipped dataset has none.
        t4_facts = {
            key
            for key, derivations in store.derivations.items()
            if any(d.rule == "T4" for d in derivations)
        }
        assert t4_facts == {
            "p2|Y:y_{50,4}",
            "p2|Y:y_{50,6}",
            "p2|Y:y_{70,8}",
            "p2|Y:y_{70,10}",
        }

    def test_guard_floor_within_kernel_range(self):
        kbar = RingGenerator("κ̄", 20, 4)
        yp = Element(ModuleId.Y, 10, 2, "yp")
        y = Element(ModuleId.Y, 30, 6, "y")
        other = Element(ModuleId.Y, 30, 3, "other")
        mp = Element(ModuleId.M, 8, 2, "mp")
        gen = Element(ModuleId.M, 28, 9, "gen")  # kernel reaches filtration 9
        record = SesRecord("SES-2.8", 30, (other, y), None, (gen,))
        chart = mini_chart(
            [record], [yp, y, other, mp, gen], actions=[ActionFact(kbar, yp, value=span_of(y))]
        )
        store = FactStore()
        store.insert("p2", yp, Value.known(span_of(mp)), "axiom")
        assert rule_t4(store, chart) == []  # pushed floor 6 does not clear 9


class TestExactCompletion:
    def test_degree_54_axiom_resolution(self, store):
        # The shipped projection on the higher Moore class forces the lower
        # one to vanish and pins its inclusion lift.
        assert known(store, "p1", "M:m_{54,2}").is_zero
        assert {e.name for e in known(store, "i1", "S:s_{54,2}").span} == {"m_{54,2}"}
        assert "EXACT" in rules_for(store, "p1", "M:m_{54,2}")

    def test_degree_153_basis_adjustment(self, store):
        assert known(store, "p2", "Y:y_{153,11}").is_zero
        assert "EXACT" in rules_for(store, "p2", "Y:y_{153,11}")

    def test_degree_102_rederivation_carries_filtration_label(self, store):
        labels = fact_labels(store)
        assert "3" in labels[fact_key("p2", Element(ModuleId.Y, 102, 10, "y_{102,10}"))]
        assert "3" in labels[fact_key("p2", Element(ModuleId.Y, 102, 2, "y_{102,2}"))]

    def test_ambiguous_direction_stays_silent(self):
        gen = Element(ModuleId.M, 8, 5, "gen")
        u = Element(ModuleId.Y, 10, 1, "u")
        w = Element(ModuleId.Y, 10, 4, "w")
        record = SesRecord("SES-2.8", 10, (u, w), None, (gen,))
        chart = mini_chart([record], [gen, u, w])
        store = FactStore()
        store.insert("p2", u, Value.known(span_of(gen)), "axiom")
        emissions = rule_exact(store, chart)
        assert all(e.source != w for e in emissions)


class TestSaturation:
    def test_empty_chart_empty_store(self):
        chart = mini_chart([], [])
        store = saturate(chart, with_periodic=False)
        assert store.facts == {}

    def test_idempotent(self, chart, store):
        count = len(store.facts)
        log = len(store.log)
        again = saturate(chart, store=store)
        assert len(again.facts) == count
        assert len(again.log) == log

    def test_schedules_agree(self, chart, store):
        for seed in range(5):
            shuffled = saturate(chart, rng=random.Random(seed))
            assert shuffled.serialize() == store.serialize()

    def test_no_contradictions_on_shipped_data(self, store):
        assert store.contradictions == []
