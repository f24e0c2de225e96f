"""Monotone inference rules and the saturation loop.

Each rule is a pure function of (store, chart) returning emissions; firing a
rule twice adds nothing new, and every guard reads only dataset structure or
already-present facts, so the saturated store is independent of rule order.

Rule inventory, matching the techniques used to fill the summary table:

* ``T1``   vanishing kernel: rank-0 kernel kills the projection on the whole
  middle; with rank-1 cokernel and middle the inclusion is pinned too.
* ``T2``   vanishing cokernel: projection is injective on the middle, and a
  rank-1 kernel pins the value; larger kernels yield only nonzeroness.
* ``T3a``  filtration exclusion in a (1, 2, 1) shape, plus the (2, 2, 0)
  iso variant where the inclusion is an isomorphism pinned by filtration.
* ``T3b``  filtration matching in a (0, 2, 2) shape, the lower identification
  valid after a basis adjustment by strictly higher filtration.
* ``T4``   extended linearity: a generator multiple whose pushed-forward value
  is forced above everything the kernel offers must die, and rank-1
  surjectivity then pins the other middle generator.
* ``LIN``  module linearity p(t·x) = t·p(x) over recorded generator actions.
* ``EXACT`` rank-1 completion at a junction: surjectivity in one direction,
  basis adjustment in the other, and the induced inclusion pin.  This is the
  same move T3/T4 end with, recorded with provenance "exactness".
* ``PERIODIC`` the closed-form values of the inclusion/projection maps on
  periodic-part monomials.
* ``EXC``  exceptional classes: their inclusion image is nonzero torsion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from .algebra import (
    ClassificationKind,
    Element,
    LesContext,
    ModuleId,
    Value,
    filtration_floor,
    span_of,
)
from .chartdata import ChartFile, Monomial, expand_periodic
from .sequences import (
    FactStore,
    RULE_EXACT,
    RULE_EXC,
    RULE_LIN,
    RULE_PERIODIC,
    RULE_T1,
    RULE_T2,
    RULE_T3A,
    RULE_T3B,
    RULE_T4,
    fact_key,
    image_of_p3,
    load_axioms,
)


@dataclass(frozen=True)
class Emission:
    map: str
    source: Element
    value: Value
    rule: str
    inputs: Tuple[str, ...] = ()


Rule = Callable[[FactStore, ChartFile], List[Emission]]


def _sorted_by_filtration(elements: Iterable[Element]) -> List[Element]:
    return sorted(elements, key=lambda e: (e.filtration, e.name))


# ---------------------------------------------------------------------------
# Periodic formulas
# ---------------------------------------------------------------------------

def rule_periodic(store: FactStore, chart: ChartFile, bound: Optional[int] = None) -> List[Emission]:
    """Inclusion/projection values on periodic-part monomials.

    A formula instance fires only when both its domain monomial and its target
    monomial exist in the expanded presentations; the localized rows are not
    exact, so these facts are values only, never exactness constraints.
    """
    bound = chart.max_stem if bound is None else bound
    presentations = chart.periodic_presentations
    y_index = {(m.delta, m.v1): m for m in expand_periodic(ModuleId.Y, bound, presentations)}
    m_index = {
        (m.delta, m.v1, m.eta): m for m in expand_periodic(ModuleId.M, bound, presentations)
    }
    s_mons = expand_periodic(ModuleId.S, bound, presentations)
    s_index = {(m.delta, m.v1, m.eta, m.c6): m for m in s_mons}

    out: List[Emission] = []

    def emit(map_name: str, source: Monomial, target: Monomial) -> None:
        out.append(
            Emission(
                map_name,
                source.element,
                Value.known(span_of(target.element)),
                RULE_PERIODIC,
                (f"formula:{map_name}",),
            )
        )

    for (n, v, eta), mon in m_index.items():
        if eta == 0 and v % 4 in (0, 1):
            target = y_index.get((n, v))
            if target is not None:
                emit("i2", mon, target)
    for (n, v), mon in y_index.items():
        if v % 4 in (2, 3):
            target = m_index.get((n, v - 2, 2))
            if target is not None:
                emit("p2", mon, target)
    for (n, k, eta, c6), mon in s_index.items():
        if c6:
            target = m_index.get((n, 4 * k + 1, 2))
            if target is not None:
                emit("i1", mon, target)
        elif k >= 1:
            target = m_index.get((n, 4 * k, eta))
            if target is not None:
                emit("i1", mon, target)
    for (n, v, eta), mon in m_index.items():
        if v % 4 == 1 and v >= 5 and eta in (0, 1):
            k = (v - 1) // 4
            target = s_index.get((n, k, eta + 1, False))
            if target is not None:
                emit("p1", mon, target)
    return out


# ---------------------------------------------------------------------------
# Exceptional classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalVerdict:
    element: Element
    context: LesContext
    verdict: bool


def exceptional_verdicts(chart: ChartFile) -> List[ExceptionalVerdict]:
    out = []
    for c in chart.classifications:
        if c.kind is ClassificationKind.TORSION:
            continue
        out.append(
            ExceptionalVerdict(
                c.element, c.context, c.kind is ClassificationKind.PERIODIC_EXCEPTIONAL
            )
        )
    return out


def rule_exceptional(store: FactStore, chart: ChartFile) -> List[Emission]:
    """Exceptional periodic classes include to nonzero torsion.

    In the Y-sequence the exceptional Moore classes have nonzero torsion image
    under the inclusion; in the sphere sequence the exceptional sphere classes
    do so under i₁ and the exceptional Moore classes under p₁.  Non-exceptional
    periodic classes stay out of the torsion bookkeeping entirely.
    """
    out: List[Emission] = []
    for c in chart.classifications:
        if c.kind is not ClassificationKind.PERIODIC_EXCEPTIONAL:
            continue
        if c.context is LesContext.LES_23:
            out.append(
                Emission("i2", c.element, Value.nonzero_unknown(), RULE_EXC, ("E^M",))
            )
        elif c.element.module is ModuleId.S:
            out.append(
                Emission("i1", c.element, Value.nonzero_unknown(), RULE_EXC, ("F^S",))
            )
        else:
            out.append(
                Emission("p1", c.element, Value.nonzero_unknown(), RULE_EXC, ("F^M",))
            )
    return out


# ---------------------------------------------------------------------------
# Techniques 1-4
# ---------------------------------------------------------------------------

def rule_t1(store: FactStore, chart: ChartFile) -> List[Emission]:
    out: List[Emission] = []
    for record in chart.ses_records:
        if record.kernel is None or record.kernel:
            continue
        ref = f"{record.context}@{record.stem}"
        for element in record.middle:
            out.append(Emission(record.project_map, element, Value.zero(), RULE_T1, (ref,)))
        if record.cokernel is not None and len(record.cokernel) == 1 and len(record.middle) == 1:
            out.append(
                Emission(
                    record.include_map,
                    record.cokernel[0],
                    Value.known(span_of(record.middle[0])),
                    RULE_T1,
                    (ref,),
                )
            )
    return out


def rule_t2(store: FactStore, chart: ChartFile) -> List[Emission]:
    out: List[Emission] = []
    for record in chart.ses_records:
        if record.cokernel is None or record.cokernel:
            continue
        ref = f"{record.context}@{record.stem}"
        for element in record.middle:
            out.append(
                Emission(record.project_map, element, Value.nonzero_unknown(), RULE_T2, (ref,))
            )
        if record.kernel is not None and len(record.kernel) == 1:
            generator = record.kernel[0]
            for element in record.middle:
                out.append(
                    Emission(
                        record.project_map,
                        element,
                        Value.known(span_of(generator)),
                        RULE_T2,
                        (ref,),
                    )
                )
    return out


def rule_t3(store: FactStore, chart: ChartFile) -> List[Emission]:
    """Filtration arguments: the maps cannot decrease Adams–Novikov filtration.

    Shape guards are exact; when an inequality fails the rule stays silent
    rather than guessing.  Conclusions pinned only after a basis adjustment
    are claims modulo strictly higher filtration, which is how all chart
    names are read anyway.
    """
    out: List[Emission] = []
    for record in chart.ses_records:
        if record.kernel is None:
            continue
        ref = f"{record.context}@{record.stem}"
        include, project = record.include_map, record.project_map
        # Any middle class strictly above everything the kernel offers must
        # project to zero, whatever the cokernel looks like.
        if record.kernel:
            ceiling = max(k.filtration for k in record.kernel)
            for element in record.middle:
                if element.filtration > ceiling:
                    out.append(Emission(project, element, Value.zero(), RULE_T3A, (ref,)))
        if record.cokernel is None:
            continue
        shape = (len(record.cokernel), len(record.middle), len(record.kernel))
        if shape == (1, 2, 1):
            c = record.cokernel[0]
            u, w = _sorted_by_filtration(record.middle)
            g = record.kernel[0]
            if c.filtration > u.filtration and w.filtration >= c.filtration and g.filtration >= u.filtration:
                out.append(Emission(include, c, Value.known(span_of(w)), RULE_T3A, (ref,)))
                out.append(Emission(project, w, Value.zero(), RULE_T3A, (ref,)))
                out.append(Emission(project, u, Value.known(span_of(g)), RULE_T3A, (ref,)))
        elif shape == (2, 2, 0):
            c1, c2 = _sorted_by_filtration(record.cokernel)
            m1, m2 = _sorted_by_filtration(record.middle)
            if (
                c1.filtration < c2.filtration
                and m1.filtration < m2.filtration
                and c2.filtration > m1.filtration
                and m2.filtration >= c2.filtration
                and m1.filtration >= c1.filtration
            ):
                out.append(Emission(include, c2, Value.known(span_of(m2)), RULE_T3A, (ref,)))
                out.append(Emission(include, c1, Value.known(span_of(m1)), RULE_T3A, (ref,)))
        elif shape == (0, 2, 2):
            u, w = _sorted_by_filtration(record.middle)
            k1, k2 = _sorted_by_filtration(record.kernel)
            if (
                u.filtration < w.filtration
                and k1.filtration == u.filtration
                and k2.filtration > k1.filtration
                and k2.filtration >= w.filtration
            ):
                out.append(Emission(project, w, Value.known(span_of(k2)), RULE_T3B, (ref,)))
                out.append(Emission(project, u, Value.known(span_of(k1)), RULE_T3B, (ref,)))
    return out


def _actions_landing_on(chart: ChartFile, target: Element):
    for fact in chart.actions.facts():
        if fact.value is not None and fact.value == frozenset({target}):
            yield fact


def rule_t4(store: FactStore, chart: ChartFile) -> List[Emission]:
    """Extended linearity: push a known projection through a generator.

    If the middle class is a generator multiple y = g·y′ with p(y′) known, and
    the pushed value g·p(y′) is forced (by the generator's filtration degree)
    strictly above everything in a rank-1 kernel, then p(y) = 0 and rank-1
    surjectivity pins the other middle generator.  Applies only when the
    action of g on p(y′) is itself uncharted; otherwise plain linearity runs.
    """
    out: List[Emission] = []
    for record in chart.ses_records:
        if record.kernel is None or len(record.kernel) != 1 or len(record.middle) != 2:
            continue
        ref = f"{record.context}@{record.stem}"
        project = record.project_map
        generator = record.kernel[0]
        for y in record.middle:
            for action in _actions_landing_on(chart, y):
                parent_key = fact_key(project, action.source)
                parent = store.facts.get(parent_key)
                if parent is None or not parent.is_known:
                    continue
                if parent.is_zero:
                    excluded = True
                else:
                    pushed = chart.actions.act(action.generator.name, parent.span)
                    if pushed is not None:
                        continue
                    floor = filtration_floor(parent.span) + action.generator.filtration_degree
                    excluded = floor > generator.filtration
                if not excluded:
                    continue
                inputs = (parent_key, f"{action.generator.name}·{action.source.key}", ref)
                out.append(Emission(project, y, Value.zero(), RULE_T4, inputs))
                other = next(e for e in record.middle if e != y)
                out.append(
                    Emission(project, other, Value.known(span_of(generator)), RULE_T4, inputs)
                )
    return out


def rule_linearity(store: FactStore, chart: ChartFile) -> List[Emission]:
    """Module linearity p(t·x) = t·p(x) over recorded generator actions."""
    out: List[Emission] = []
    generator_names = sorted(chart.generators)
    for key, value in list(store.facts.items()):
        if not value.is_known:
            continue
        map_name, _, _ = key.partition("|")
        if map_name not in ("i1", "i2", "i3", "p1", "p2", "p3", "eta", "v", "mul2"):
            continue
        source = store.sources[key]
        if source.periodic:
            continue
        for name in generator_names:
            action = chart.actions.get(name, source)
            if action is None or action.value is None or len(action.value) != 1:
                continue
            new_source = next(iter(action.value))
            if value.is_zero:
                pushed: Optional[Value] = Value.zero()
            else:
                pushed = chart.actions.act(name, value.span)
            if pushed is None:
                continue
            out.append(
                Emission(
                    map_name,
                    new_source,
                    pushed,
                    RULE_LIN,
                    (key, f"{name}·{source.key}"),
                )
            )
    return out


def rule_exact(store: FactStore, chart: ChartFile) -> List[Emission]:
    """Rank-1 completion at a recorded junction.

    With kernel {g} and middle {u, w} (u strictly below w): a vanishing value
    on one generator forces the other onto g by surjectivity; a value g on the
    higher generator lets the lower one be adjusted to 0 by a strictly
    higher-filtration basis change.  When the cokernel is rank 1 the induced
    inclusion is pinned onto whichever middle generator dies.
    """
    out: List[Emission] = []
    for record in chart.ses_records:
        if record.kernel is None or len(record.kernel) != 1 or len(record.middle) != 2:
            continue
        u, w = _sorted_by_filtration(record.middle)
        if u.filtration >= w.filtration:
            continue
        ref = f"{record.context}@{record.stem}"
        project, include = record.project_map, record.include_map
        generator = record.kernel[0]
        fw = store.get(project, w)
        fu = store.get(project, u)
        lift_target: Optional[Element] = None
        if fw is not None and fw.is_known:
            key_w = fact_key(project, w)
            if fw.is_zero:
                out.append(
                    Emission(project, u, Value.known(span_of(generator)), RULE_EXACT, (key_w, ref))
                )
                lift_target = w
            else:
                out.append(Emission(project, u, Value.zero(), RULE_EXACT, (key_w, ref)))
                lift_target = u
        if fu is not None and fu.is_known and fu.is_zero:
            key_u = fact_key(project, u)
            out.append(
                Emission(project, w, Value.known(span_of(generator)), RULE_EXACT, (key_u, ref))
            )
            lift_target = lift_target or u
        if lift_target is not None and record.cokernel is not None and len(record.cokernel) == 1:
            parents = tuple(
                fact_key(project, e)
                for e, v in ((u, fu), (w, fw))
                if v is not None and v.is_known
            )
            out.append(
                Emission(
                    include,
                    record.cokernel[0],
                    Value.known(span_of(lift_target)),
                    RULE_EXACT,
                    parents + (ref,),
                )
            )
    return out


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

ALL_RULES: Tuple[Tuple[str, Rule], ...] = (
    ("PERIODIC", rule_periodic),
    ("EXC", rule_exceptional),
    ("T1", rule_t1),
    ("T2", rule_t2),
    ("T3", rule_t3),
    ("T4", rule_t4),
    ("LIN", rule_linearity),
    ("EXACT", rule_exact),
)


def saturate(
    chart: ChartFile,
    store: Optional[FactStore] = None,
    rng: Optional[random.Random] = None,
    with_periodic: bool = True,
) -> FactStore:
    """Run all rules to a fixpoint; deterministic result for any schedule.

    ``rng`` shuffles the rule order each pass (used by the determinism
    harness); axioms and the p₃ image are loaded before any rule fires, so
    every guard sees the same static data regardless of schedule.
    """
    if store is None:
        store = FactStore()
        load_axioms(store, chart)
        image_of_p3(store, chart)
    rules = [(name, rule) for name, rule in ALL_RULES if with_periodic or name != "PERIODIC"]
    changed = True
    while changed:
        changed = False
        ordered = list(rules)
        if rng is not None:
            rng.shuffle(ordered)
        for _, rule in ordered:
            for emission in rule(store, chart):
                if store.insert(
                    emission.map, emission.source, emission.value, emission.rule, emission.inputs
                ):
                    changed = True
    return store


# ---------------------------------------------------------------------------
# Technique attribution
# ---------------------------------------------------------------------------

_BASE_LABELS = {
    RULE_T1: frozenset({"1"}),
    RULE_T2: frozenset({"2"}),
    RULE_T3A: frozenset({"3"}),
    RULE_T3B: frozenset({"3"}),
    RULE_T4: frozenset({"4"}),
    RULE_EXACT: frozenset({"3"}),
    RULE_PERIODIC: frozenset({"periodic"}),
    RULE_EXC: frozenset({"exc"}),
    "axiom": frozenset({"axiom"}),
    "P3IMG": frozenset({"p3"}),
    RULE_LIN: frozenset(),
}

_CHASE_PARENTS = {RULE_LIN, RULE_EXACT}


def fact_labels(store: FactStore) -> Dict[str, FrozenSet[str]]:
    """Technique labels per fact: base rule ids, chased through linearity and
    exactness completions to their root derivations.

    Computed as a least fixpoint because completion steps can re-derive their
    own parents (the derivation graph is not acyclic).
    """
    labels: Dict[str, set] = {key: set() for key in store.derivations}
    changed = True
    while changed:
        changed = False
        for key, derivations in store.derivations.items():
            current = labels[key]
            for derivation in derivations:
                add = set(_BASE_LABELS.get(derivation.rule, frozenset()))
                if derivation.rule in _CHASE_PARENTS:
                    for parent in derivation.inputs:
                        if "|" in parent and parent in labels:
                            add |= labels[parent]
                if not add <= current:
                    current |= add
                    changed = True
    return {key: frozenset(value) for key, value in labels.items()}
