"""Brute-force exactness oracle for soundness testing.

For a small synthetic dataset, enumerate every filling of its recorded short
exact sequences: an injective inclusion and a surjective projection with
matching image/kernel, both respecting the filtration law, compatible with the
dataset's axioms and with linearity over its recorded generator actions.  A
derived fact is sound if it holds in every such filling, reading equality the
way chart names are read: the source may be adjusted by strictly
higher-filtration classes of its own basis, and a nonzero value is pinned only
up to strictly higher-filtration classes of the target basis.

The instance generator keeps total dimension small (well under the engine's
12-per-sequence soundness budget) and draws axioms from one concrete filling,
so every instance is consistent by construction.  Generator actions are only
attached upward (into the higher record), never into the adjustable low slot
of a rank-1 junction, mirroring how the real chart data is keyed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    ActionFact,
    ActionTable,
    Element,
    ModuleId,
    RingGenerator,
    Value,
)
from .chartdata import ChartFile, MapAxiom, SesRecord
from .sequences import FactStore
from .rules import saturate


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank of a list of bitmask rows over GF(2)."""
    basis: List[int] = []
    for row in rows:
        cur = row
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
    return len(basis)


@dataclass(frozen=True)
class JunctionFilling:
    """One exact filling of one SES record, as index bitmasks."""

    record: SesRecord
    include: Tuple[int, ...]  # per cokernel element: mask over middle
    project: Tuple[int, ...]  # per middle element: mask over kernel


Filling = Dict[Tuple[str, int], JunctionFilling]


def _admissible_masks(source: Element, targets: Sequence[Element], allow_zero: bool) -> List[int]:
    masks = []
    for mask in range(1 << len(targets)):
        if mask == 0:
            if allow_zero:
                masks.append(mask)
            continue
        floor = min(t.filtration for i, t in enumerate(targets) if mask >> i & 1)
        if floor >= source.filtration:
            masks.append(mask)
    return masks


def _junction_candidates(record: SesRecord) -> List[JunctionFilling]:
    cokernel = list(record.cokernel or ())
    middle = list(record.middle)
    kernel = list(record.kernel or ())
    include_choices = [_admissible_masks(c, middle, allow_zero=False) for c in cokernel]
    project_choices = [_admissible_masks(u, kernel, allow_zero=True) for u in middle]
    out = []
    for include in itertools.product(*include_choices) if cokernel else [()]:
        if gf2_rank(include) != len(cokernel):
            continue
        for project in itertools.product(*project_choices) if middle else [()]:
            if gf2_rank(project) != len(kernel):
                continue
            # Exactness: the inclusion image must die under the projection.
            ok = True
            for mask in include:
                image = 0
                for i in range(len(middle)):
                    if mask >> i & 1:
                        image ^= project[i]
                if image:
                    ok = False
                    break
            if ok:
                out.append(JunctionFilling(record, tuple(include), tuple(project)))
    return out


def _axiom_matches(filling: JunctionFilling, axiom: MapAxiom) -> Optional[bool]:
    record = filling.record
    if axiom.map == record.project_map and axiom.source in record.middle:
        idx = record.middle.index(axiom.source)
        got = filling.project[idx]
        want_elems = axiom.value
        targets = record.kernel or ()
    elif axiom.map == record.include_map and record.cokernel and axiom.source in record.cokernel:
        idx = record.cokernel.index(axiom.source)
        got = filling.include[idx]
        want_elems = axiom.value
        targets = record.middle
    else:
        return None
    if axiom.nonzero:
        return got != 0
    want = 0
    for element in want_elems or ():
        if element not in targets:
            return False
        want |= 1 << targets.index(element)
    return got == want


def enumerate_fillings(chart: ChartFile, cap: int = 200_000) -> List[Filling]:
    """All joint fillings of the chart's records consistent with its data."""
    per_record: List[Tuple[SesRecord, List[JunctionFilling]]] = []
    for record in chart.ses_records:
        if record.cokernel is None or record.kernel is None:
            raise ValueError(f"oracle needs full bases for {record.context}@{record.stem}")
        candidates = _junction_candidates(record)
        candidates = [
            c
            for c in candidates
            if all(
                _axiom_matches(c, axiom) in (None, True)
                for axiom in chart.axioms
            )
        ]
        per_record.append((record, candidates))
    total = 1
    for _, candidates in per_record:
        total *= max(len(candidates), 1)
        if total > cap:
            raise ValueError("too many fillings to enumerate")
    out: List[Filling] = []
    for combo in itertools.product(*(candidates for _, candidates in per_record)):
        filling: Filling = {
            (jf.record.context, jf.record.stem): jf for jf in combo
        }
        if _linearity_compatible(chart, filling):
            out.append(filling)
    return out


def _project_value(filling: Filling, record: SesRecord, source: Element) -> Optional[frozenset]:
    jf = filling.get((record.context, record.stem))
    if jf is None or source not in record.middle:
        return None
    mask = jf.project[record.middle.index(source)]
    kernel = record.kernel or ()
    return frozenset(kernel[i] for i in range(len(kernel)) if mask >> i & 1)


def _linearity_compatible(chart: ChartFile, filling: Filling) -> bool:
    """p(g·x) must equal g·p(x) whenever both actions are recorded.

    When the action of g on the low value is uncharted, its filtration shadow
    still binds: multiplication by g exists in the module whether or not the
    chart names the product, so the high value is either zero or sits at least
    ``filtration_degree(g)`` above the low value's floor.
    """
    for fact in chart.actions.facts():
        if fact.value is None or len(fact.value) != 1:
            continue
        target = next(iter(fact.value))
        for record in chart.ses_records:
            if fact.source not in record.middle:
                continue
            low = _project_value(filling, record, fact.source)
            if low is None:
                continue
            target_record = next(
                (
                    r
                    for r in chart.ses_records
                    if r.context == record.context and target in r.middle
                ),
                None,
            )
            if target_record is None:
                continue
            high = _project_value(filling, target_record, target)
            if high is None:
                continue
            pushed = chart.actions.act(fact.generator.name, low)
            if pushed is not None and pushed.is_known:
                if pushed.span != high:
                    return False
            elif not low:
                if high:
                    return False
            else:
                low_floor = min(e.filtration for e in low)
                need = low_floor + fact.generator.filtration_degree
                if high and min(e.filtration for e in high) < need:
                    return False
    return True


def fact_holds(chart: ChartFile, filling: Filling, map_name: str, source: Element, value: Value) -> Optional[bool]:
    """Does a derived fact hold in one filling, modulo basis adjustments?

    Returns None when the fact does not live on an enumerated junction.
    """
    for record in chart.ses_records:
        jf = filling.get((record.context, record.stem))
        if jf is None:
            continue
        if map_name == record.project_map and source in record.middle:
            basis = list(record.middle)
            matrix = list(jf.project)
            targets = list(record.kernel or ())
            break
        if map_name == record.include_map and record.cokernel and source in record.cokernel:
            basis = list(record.cokernel)
            matrix = list(jf.include)
            targets = list(record.middle)
            break
    else:
        return None

    src_idx = basis.index(source)
    adjustable = [i for i, e in enumerate(basis) if e.filtration > source.filtration]
    if value.is_known:
        want = 0
        for element in value.span:
            if element not in targets:
                return False
            want |= 1 << targets.index(element)
        if value.span:
            floor = min(e.filtration for e in value.span)
            higher_targets = sum(
                1 << i for i, e in enumerate(targets) if e.filtration > floor
            )
        else:
            higher_targets = 0
        for bits in range(1 << len(adjustable)):
            got = matrix[src_idx]
            for j, idx in enumerate(adjustable):
                if bits >> j & 1:
                    got ^= matrix[idx]
            if (got ^ want) & ~higher_targets == 0:
                return True
        return False
    # nonzeroUnknown: every representative must map to something nonzero.
    for bits in range(1 << len(adjustable)):
        got = matrix[src_idx]
        for j, idx in enumerate(adjustable):
            if bits >> j & 1:
                got ^= matrix[idx]
        if got == 0:
            return False
    return True


def check_soundness(chart: ChartFile, store: FactStore, fillings: Sequence[Filling]) -> List[str]:
    """Every engine-derived fact must hold in every filling."""
    violations = []
    derived = [
        (key, value)
        for key, value in store.facts.items()
        if any(d.rule != "axiom" for d in store.derivations.get(key, ()))
    ]
    for key, value in derived:
        source = store.sources[key]
        map_name, _, _ = key.partition("|")
        for filling in fillings:
            ok = fact_holds(chart, filling, map_name, source, value)
            if ok is False:
                violations.append(f"{key} = {value.serialize()} fails in a filling")
                break
    return violations


# ---------------------------------------------------------------------------
# Synthetic instance generation
# ---------------------------------------------------------------------------

_GENERATOR = RingGenerator("κ̄", 20, 4)


def random_instance(rng: random.Random) -> ChartFile:
    """A small consistent synthetic dataset with one or two junctions."""
    context = rng.choice(["SES-2.8", "SES-2.9"])
    mid_module = ModuleId.Y if context == "SES-2.8" else ModuleId.M
    side_module = ModuleId.M if context == "SES-2.8" else ModuleId.S
    shift = SesRecord.KERNEL_SHIFT[context]
    coupled = rng.random() < 0.3

    elements: Dict[str, Element] = {}
    counter = itertools.count()

    def fresh(module: ModuleId, stem: int, filtration: int) -> Element:
        element = Element(module, stem, filtration, f"x{next(counter)}s{stem}f{filtration}")
        elements[element.key] = element
        return element

    def random_record(stem: int, force_shape: Optional[Tuple[int, int]] = None) -> SesRecord:
        while True:
            if force_shape is not None:
                c_dim, k_dim = force_shape
            else:
                c_dim = rng.randint(0, 2)
                k_dim = rng.randint(0, 2)
            m_dim = c_dim + k_dim
            if 1 <= m_dim <= 3:
                break
            force_shape = None
        middle = tuple(
            sorted(
                (fresh(mid_module, stem, rng.randint(0, 9)) for _ in range(m_dim)),
            )
        )
        cokernel = tuple(
            sorted(fresh(side_module, stem, rng.randint(0, 9)) for _ in range(c_dim))
        )
        kernel = tuple(
            sorted(fresh(side_module, stem - shift, rng.randint(0, 9)) for _ in range(k_dim))
        )
        return SesRecord(context, stem, middle, cokernel, kernel)

    records = []
    stem = rng.randint(10, 40)
    lower = random_record(stem)
    records.append(lower)
    actions: List[ActionFact] = []
    if coupled:
        # Mirror the lower shape one generator-stem up, with filtrations
        # shifted by the generator degree (plus jitter), so that linearity and
        # extended-linearity steps actually have legal targets.
        jitter = _GENERATOR.filtration_degree + rng.randint(0, 2)
        upper_middle = tuple(
            sorted(fresh(mid_module, stem + _GENERATOR.stem_degree, e.filtration + jitter) for e in lower.middle)
        )
        upper_coker = tuple(
            sorted(
                fresh(side_module, stem + _GENERATOR.stem_degree, e.filtration + jitter)
                for e in lower.cokernel or ()
            )
        )
        upper_kernel = tuple(
            sorted(
                fresh(side_module, stem + _GENERATOR.stem_degree - shift, e.filtration + jitter)
                for e in lower.kernel or ()
            )
        )
        upper = SesRecord(
            context, stem + _GENERATOR.stem_degree, upper_middle, upper_coker, upper_kernel
        )
        records.append(upper)
        lows = sorted(lower.middle, key=lambda e: (e.filtration, e.name))
        highs = sorted(upper.middle, key=lambda e: (e.filtration, e.name))
        for src, dst in zip(lows, highs):
            if rng.random() < 0.8:
                actions.append(ActionFact(_GENERATOR, src, value=frozenset({dst})))
        k_lows = sorted(lower.kernel or (), key=lambda e: (e.filtration, e.name))
        k_highs = sorted(upper.kernel or (), key=lambda e: (e.filtration, e.name))
        for src, dst in zip(k_lows, k_highs):
            roll = rng.random()
            if roll < 0.6:
                actions.append(ActionFact(_GENERATOR, src, value=frozenset({dst})))
            elif roll < 0.75:
                actions.append(ActionFact(_GENERATOR, src, value=frozenset()))

    chart = ChartFile(
        schema_version="1",
        max_stem=stem + 200,
        generators={_GENERATOR.name: _GENERATOR},
        elements=elements,
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
        ses_records=records,
        axioms=[],
        periodic_presentations={},
    )

    fillings = enumerate_fillings(chart)
    if not fillings:
        return random_instance(rng)

    # Draw axioms from one concrete filling so the instance stays consistent.
    seed_filling = rng.choice(fillings)
    axioms: List[MapAxiom] = []
    for record in records:
        jf = seed_filling[(record.context, record.stem)]
        for idx, element in enumerate(record.middle):
            if rng.random() < 0.25:
                kernel = record.kernel or ()
                span = frozenset(
                    kernel[i] for i in range(len(kernel)) if jf.project[idx] >> i & 1
                )
                axioms.append(MapAxiom(record.project_map, element, span))
    chart.axioms.extend(axioms)
    return chart


def run_soundness_trial(seed: int) -> Tuple[int, List[str]]:
    """Saturate one synthetic instance and check every derivation against
    every brute-force filling; returns (facts checked, violations)."""
    rng = random.Random(seed)
    chart = random_instance(rng)
    store = saturate(chart, with_periodic=False)
    fillings = enumerate_fillings(chart)
    violations = check_soundness(chart, store, fillings)
    return len(store.facts), violations
