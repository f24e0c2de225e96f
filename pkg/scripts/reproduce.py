#!/usr/bin/env python3
"""Run the full pipeline on the shipped dataset and print every artifact:
the saturated-store summary, the exactness report, the summary table, and
the periodic family reports."""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from les_deduce import chartdata  # noqa: E402
from les_deduce.families import build_table, emit_families, render_table_markdown  # noqa: E402
from les_deduce.rules import saturate  # noqa: E402
from les_deduce.sequences import check_all  # noqa: E402


def main() -> None:
    chart = chartdata.load(REPO / "data" / "tmf_chart.json")
    store = saturate(chart)
    print(f"# saturation: {len(store.facts)} facts, {len(store.log)} derivations, "
          f"{len(store.contradictions)} contradictions\n")

    verdicts = check_all(store, chart)
    counts = {}
    for v in verdicts:
        counts[v.verdict] = counts.get(v.verdict, 0) + 1
    print(f"# exactness: {counts}\n")

    rows = build_table(store, chart)
    print(render_table_markdown(rows))

    result = emit_families(rows, chart)
    print("# families")
    for report in result.case_ii + result.direct_p1 + result.case_i:
        print(report.describe())
    for report in result.suppressed_direct_p1:
        print(f"(previously known) {report.describe()}")
    for note in result.review_notes:
        print(f"review: {note}")
    diff = result.golden_diff()
    print("# golden check:", "clean" if not diff else diff)


if __name__ == "__main__":
    main()
