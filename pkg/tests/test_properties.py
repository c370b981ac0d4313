from __future__ import annotations

import copy
from dataclasses import replace
from datetime import date

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from padfd import (
    FlowType,
    NodeType,
    Stage,
    emit_drawio,
    emit_json,
    evaluate_limit,
    parse_drawio,
    parse_json,
    run_clean,
    run_simulation,
    simulate_bdfd,
    to_canonical_dict,
    transform,
    typecheck,
    validate_pa,
    validate_wellformed,
)
from padfd.model import WELLFORMED_FLOW_ENDPOINTS

from diagram_strategies import (
    any_stage_diagrams,
    data_records,
    dates,
    flow_metas,
    raw_diagrams,
    simulation_scenarios,
    store_states,
    wellformed_diagrams,
)

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


# --- typing ---------------------------------------------------------------------


@PROPERTY_SETTINGS
@given(raw_diagrams())
def test_typecheck_soundness(diagram):
    """A successful run types every flow consistently with its endpoints;
    a failed run explains itself."""
    wellformed, diagnostics = typecheck(diagram)
    if wellformed is None:
        assert diagnostics
        return
    assert diagnostics == []
    assert wellformed.stage is Stage.WELLFORMED
    assert validate_wellformed(wellformed).valid
    for flow_id, flow in wellformed.flows.items():
        source = wellformed.nodes[flow.source].node_type
        target = wellformed.nodes[flow.target].node_type
        assert (source, target) == WELLFORMED_FLOW_ENDPOINTS[flow.flow_type]
        original = diagram.flows[flow_id].flow_type
        if original is FlowType.DF:
            assert flow.flow_type is FlowType.DELETE
        else:
            assert flow.flow_type is not FlowType.DELETE
        if flow.flow_type is FlowType.COMP:
            assert flow.source != flow.target


@PROPERTY_SETTINGS
@given(wellformed_diagrams())
def test_typecheck_inverts_type_erasure(diagram):
    """Erasing the flow types of a well-formed diagram and re-typing it
    recovers the diagram exactly."""
    erased_flows = {
        flow_id: replace(
            flow,
            flow_type=FlowType.DF if flow.flow_type is FlowType.DELETE else FlowType.PF,
        )
        for flow_id, flow in diagram.flows.items()
    }
    erased = replace(diagram, stage=Stage.RAW, flows=erased_flows)
    recovered, diagnostics = typecheck(erased)
    assert diagnostics == []
    assert recovered == diagram


# --- the privacy rewrite -----------------------------------------------------------


@PROPERTY_SETTINGS
@given(wellformed_diagrams())
def test_transform_counting_laws_hold(diagram):
    procs = sum(1 for n in diagram.nodes.values() if n.node_type is NodeType.PROC)
    dbs = sum(1 for n in diagram.nodes.values() if n.node_type is NodeType.DB)
    flows = len(diagram.flows)
    pa = transform(diagram)
    assert len(pa.nodes) == len(diagram.nodes) + procs + 2 * dbs + 4 * flows
    assert len(pa.flows) == 7 * flows + 2 * dbs


@PROPERTY_SETTINGS
@given(wellformed_diagrams())
def test_transform_output_is_valid(diagram):
    validity = validate_pa(transform(diagram))
    assert validity.valid, [v.render() for v in validity.violations]


@PROPERTY_SETTINGS
@given(wellformed_diagrams())
def test_transform_partner_links_are_mutual(diagram):
    pa = transform(diagram)
    for node in pa.nodes.values():
        if node.partner is not None:
            assert pa.nodes[node.partner].partner == node.id
    for flow in pa.flows.values():
        if flow.partner is not None:
            assert pa.flows[flow.partner].partner == flow.id


@PROPERTY_SETTINGS
@given(wellformed_diagrams())
def test_transform_preserves_and_guards_originals(diagram):
    pa = transform(diagram)
    for node_id, node in diagram.nodes.items():
        kept = pa.nodes[node_id]
        assert kept.node_type is node.node_type
        assert kept.label == node.label
        assert kept.position == node.position
    for flow_id, flow in diagram.flows.items():
        kept = pa.flows[flow_id]
        assert kept.label == flow.label
        assert kept.target == flow.target
        assert pa.nodes[kept.source].node_type is NodeType.LIMIT
        # Nothing dangles.
        assert kept.source in pa.nodes and kept.target in pa.nodes


# --- serialization ------------------------------------------------------------------


@PROPERTY_SETTINGS
@given(any_stage_diagrams())
def test_drawio_round_trip(diagram):
    data = emit_drawio(diagram)
    assert emit_drawio(diagram) == data
    assert parse_drawio(data) == diagram


@PROPERTY_SETTINGS
@given(any_stage_diagrams())
def test_json_round_trip(diagram):
    data = emit_json(diagram)
    assert emit_json(diagram) == data
    assert parse_json(data) == diagram


@PROPERTY_SETTINGS
@given(any_stage_diagrams())
def test_formats_share_one_canonical_form(diagram):
    via_drawio = to_canonical_dict(parse_drawio(emit_drawio(diagram)))
    via_json = to_canonical_dict(parse_json(emit_json(diagram)))
    assert via_drawio == via_json == to_canonical_dict(diagram)


# --- the decision rule --------------------------------------------------------------


@settings(deadline=None)
@given(
    flow_metas("f"),
    data_records("f", "d"),
    st.tuples(dates, dates),
)
def test_limit_decisions_are_monotone_in_time(meta, record, clocks):
    """Whatever is forwarded at a later clock is forwarded at any earlier
    one; the business semantics forward unconditionally; the violation
    flag marks exactly withheld personal data."""
    early, late = sorted(clocks)
    fwd_early, entry_early = evaluate_limit(meta, record, early)
    fwd_late, entry_late = evaluate_limit(meta, record, late)
    if fwd_late:
        assert fwd_early
    assert entry_early.v == (meta.pd and not fwd_early)
    assert entry_late.v == (meta.pd and not fwd_late)
    assert simulate_bdfd(meta, record) is True
    if not meta.pd:
        assert fwd_early and fwd_late
    for entry, clock in ((entry_early, early), (entry_late, late)):
        assert entry.d_id == record.d_id
        assert entry.flow_id == record.flow_id
        assert entry.clock == clock
        assert entry.policy.purpose == meta.purpose
        assert entry.policy.consent == record.consent
        assert entry.policy.expiry == record.expiry


@settings(deadline=None)
@given(flow_metas("f"), data_records("f", "d"), dates)
def test_limit_expiry_boundary(meta, record, clock):
    forwarded, _ = evaluate_limit(meta, record, clock)
    if meta.pd and clock > record.expiry:
        assert not forwarded


# --- whole runs ---------------------------------------------------------------------


@PROPERTY_SETTINGS
@given(simulation_scenarios(), st.booleans())
def test_simulation_invariants(scenario, multi_hop):
    pa, metas, records, clock = scenario
    report = run_simulation(pa, metas, records, clock, multi_hop=multi_hop)
    meta_by_flow = {meta.flow_id: meta for meta in metas}

    # One log entry per decision, landing in some gadget's log store.
    assert len(report.entries) == len(report.decisions)
    assert sum(len(entries) for entries in report.logs.values()) == len(
        report.decisions
    )

    for decision in report.decisions:
        # The business diagram forwards everything the rewrite still allows.
        assert decision.forwarded_bdfd is True
        meta = meta_by_flow[decision.flow_id]
        assert decision.entry.v == (meta.pd and not decision.forwarded_padfd)
        if decision.forwarded_padfd:
            assert not decision.entry.v

    # Stores hold only records some forwarded store-write deposited.
    deposited = {
        decision.d_id
        for decision in report.decisions
        if decision.forwarded_padfd
        and pa.flows[decision.flow_id].flow_type is FlowType.LIMDB
    }
    for store, held in report.state.data.items():
        assert set(held) <= deposited
        policy_store = report.state.partners[store]
        assert set(report.state.policies[policy_store]) == set(held)

    # Replays are exact.
    again = run_simulation(pa, metas, records, clock, multi_hop=multi_hop)
    assert again == report


@PROPERTY_SETTINGS
@given(simulation_scenarios())
def test_blocked_everywhere_records_leave_no_trace(scenario):
    pa, metas, records, clock = scenario
    report = run_simulation(pa, metas, records, clock)
    ever_forwarded = {
        decision.d_id for decision in report.decisions if decision.forwarded_padfd
    }
    for decision in report.decisions:
        if decision.d_id in ever_forwarded:
            continue
        for held in report.state.data.values():
            assert decision.d_id not in held


# --- the cleaning pass ----------------------------------------------------------------


@settings(deadline=None)
@given(store_states(), dates)
def test_clean_matches_brute_force(state, clock):
    before = copy.deepcopy(state)
    cleaned, events = run_clean(state, clock)

    removed = set()
    for store, held in state.data.items():
        survivors = {
            d_id for d_id, stored in held.items() if stored.record.expiry >= clock
        }
        assert set(cleaned.data[store]) == survivors
        removed |= {(store, d_id) for d_id in set(held) - survivors}
        policy_store = state.partners[store]
        assert set(cleaned.policies[policy_store]) == survivors

    assert {(e.store, e.d_id) for e in events} == removed
    assert [(e.store, e.d_id) for e in events] == sorted(
        (e.store, e.d_id) for e in events
    )
    assert all(e.clock == clock for e in events)
    # Pure: the input state is untouched.
    assert state == before


@settings(deadline=None)
@given(store_states(), dates)
def test_clean_is_idempotent(state, clock):
    once, _ = run_clean(state, clock)
    twice, events = run_clean(once, clock)
    assert twice == once
    assert events == []
