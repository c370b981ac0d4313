"""
Simulating policy checks on an automated payment system
========================================================

A construction project streams evidence of finished work into a payment
pipeline: sub-task recordings and scopes of works arrive at a
recognition process, project status lands in a project store, and
up-to-date project information flows on into a BIM store.

The flow table (what each flow is for, whether it carries personal
data) and the record table (who the data is about, what they consented
to, when it expires) drive the simulation: every record is pushed into
its flow's limit, which forwards it only when the flow's purpose is
covered by consent and the record has not expired. Every decision is
logged either way.
"""

from __future__ import annotations

from datetime import date
from pathlib import Path

from padfd import (
    Diagram,
    Flow,
    FlowType,
    Node,
    NodeType,
    Stage,
    add_flow,
    add_node,
    compatibility_with_equivalences,
    load_data_records,
    load_equivalences,
    load_flow_metas,
    render_report,
    run_clean,
    run_simulation,
    transform,
    typecheck,
)

DATA = Path(__file__).parent / "data"

# ---------------------------------------------------------------------------
# The business diagram, drawn in code.

diagram = Diagram(stage=Stage.RAW)
for node in (
    Node("construction", NodeType.EXT, label="Construction Project"),
    Node("p1", NodeType.PROC, label="Recognise Finished Sub-tasks"),
    Node("p2", NodeType.PROC, label="Assign Project Information"),
    Node("p3", NodeType.PROC, label="Validate Completed Sub-tasks"),
    Node("db_project", NodeType.DB, label="Project DB"),
    Node("db_bim", NodeType.DB, label="BIM DB"),
):
    diagram = add_node(diagram, node)

for flow in (
    Flow("f1", "construction", "p1", FlowType.PF, label="Completed sub-tasks"),
    Flow("f2", "construction", "p1", FlowType.PF, label="Scope of Works"),
    Flow("f3", "p1", "db_project", FlowType.PF, label="Real-time Location Information"),
    Flow("f4", "db_project", "p2", FlowType.PF, label="Status"),
    Flow("f5", "p2", "db_bim", FlowType.PF, label="Up-to-date Project Information"),
    Flow("f6", "db_bim", "p3", FlowType.PF, label="Tracked Progress"),
    Flow("f7", "p3", "db_project", FlowType.PF, label="Valid/Invalid Installation"),
):
    diagram = add_flow(diagram, flow)

wellformed, diagnostics = typecheck(diagram)
assert wellformed is not None, [d.render() for d in diagnostics]
pa = transform(wellformed)

# ---------------------------------------------------------------------------
# The tables. Consent wordings in the record table differ from the flow
# purposes ("Recording the work status" vs "Project monitoring"), so the
# compatibility predicate is extended with the deployment's equivalences.

metas = load_flow_metas(DATA / "payment_static.csv")
records = load_data_records(DATA / "payment_dynamic.csv")
compatible = compatibility_with_equivalences(load_equivalences(DATA / "compat.json"))

# ---------------------------------------------------------------------------
# Run at a clock inside every retention window. d1-d4 are covered by
# consent; d5 was consented for advertisements only, so the limit
# withholds it and flags a violation.

report = run_simulation(pa, metas, records, date(2020, 6, 1), compatible=compatible)
print(render_report(report))

# ---------------------------------------------------------------------------
# Run again a year later: d1 and d5 have expired by then (their consent
# ran out at the end of 2020), so their limits withhold them too.

late = run_simulation(pa, metas, records, date(2021, 6, 1), compatible=compatible)
print()
print(f"at 2021-06-01: {len(late.violations)} violations "
      f"({', '.join(sorted(e.d_id for e in late.violations))})")

# ---------------------------------------------------------------------------
# Retention enforcement: the cleaning element purges expired records
# (and their policies) from the stores the first run deposited into.

cleaned, events = run_clean(report.state, date(2022, 12, 31))
for event in events:
    print(f"cleaned {event.d_id} from {event.store} (expired {event.expiry})")
