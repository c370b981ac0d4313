"""
Building diagrams in code and type-checking them
=================================================

A diagram starts life "raw": every arrow is just a plain flow (or a
delete flow), and nothing says yet whether the drawing makes sense.
Type-checking reads each flow's endpoints, assigns it one of the six
well-formed kinds (in, out, comp, store, read, delete), and reports a
diagnostic for anything it cannot read.
"""

from __future__ import annotations

from padfd import (
    Diagram,
    Flow,
    FlowType,
    Node,
    NodeType,
    Stage,
    add_flow,
    add_node,
    typecheck,
)

# ---------------------------------------------------------------------------
# A small online shop: one customer, three processes, one data store.
# Raw flows carry no kind yet — PF is "plain flow", DF is "delete flow".

diagram = Diagram(stage=Stage.RAW)
for node in (
    Node("customer", NodeType.EXT, label="Customer"),
    Node("p_info", NodeType.PROC, label="Get Customer Information"),
    Node("p_account", NodeType.PROC, label="Create Account"),
    Node("p_cart", NodeType.PROC, label="Shopping Cart Function"),
    Node("db_customer", NodeType.DB, label="Customer DB"),
):
    diagram = add_node(diagram, node)

for flow in (
    Flow("f1", "customer", "p_info", FlowType.PF, label="Customer Info"),
    Flow("f2", "p_info", "p_account", FlowType.PF, label="Create Account"),
    Flow("f3", "p_account", "p_cart", FlowType.PF),
    Flow("f4", "p_account", "db_customer", FlowType.PF),
    Flow("f5", "db_customer", "p_cart", FlowType.PF),
    Flow("f6", "p_cart", "customer", FlowType.PF, label="Order Summary"),
):
    diagram = add_flow(diagram, flow)

# ---------------------------------------------------------------------------
# Type-check it. The result is a new diagram at the "wellformed" stage;
# the input is never mutated.

wellformed, diagnostics = typecheck(diagram)
assert wellformed is not None and not diagnostics

print("inferred flow kinds:")
for flow_id, flow in sorted(wellformed.flows.items()):
    print(f"  {flow_id}: {flow.source} -> {flow.target}  [{flow.flow_type.value}]")

# ---------------------------------------------------------------------------
# Now break it on purpose. A plain flow between two externals has no
# reading, and a process that only receives can never be well-formed.

broken = Diagram(stage=Stage.RAW)
for node in (
    Node("alice", NodeType.EXT, label="Alice"),
    Node("bob", NodeType.EXT, label="Bob"),
    Node("p_sink", NodeType.PROC, label="Sink"),
):
    broken = add_node(broken, node)
broken = add_flow(broken, Flow("chat", "alice", "bob", FlowType.PF))
broken = add_flow(broken, Flow("feed", "alice", "p_sink", FlowType.PF))

typed, diagnostics = typecheck(broken)
assert typed is None

print()
print("diagnostics for the broken drawing:")
for diagnostic in diagnostics:
    print(f"  {diagnostic.render()}")
