"""Canonical JSON form.

The canonical form is the package's reference serialization: elements
sorted by id, keys sorted, absent attributes omitted rather than null,
integral coordinates written as integers, UTF-8 with a trailing newline.
Two diagrams are interchangeable exactly when their canonical bytes are
equal. The document carries a schema id so readers can reject files from
a different convention:

    {
      "schema": "padfd-canonical/1",
      "stage": "raw-bdfd" | "wellformed-bdfd" | "pa-dfd",
      "nodes": [{"id", "type"?, "label"?, "partner"?, "position"?, "extra"?}],
      "flows": [{"id", "source", "target", "type"?, "label"?, "partner"?, "extra"?}]
    }
"""

from __future__ import annotations

import json

from .errors import SchemaError
from .graph import Diagram, Flow, Node
from .model import FlowType, NodeType, Stage

SCHEMA_ID = "padfd-canonical/1"

_NODE_KEYS = frozenset({"id", "type", "label", "partner", "position", "extra"})
_FLOW_KEYS = frozenset({"id", "source", "target", "type", "label", "partner", "extra"})


def canonical_number(value: float) -> int | float:
    """Integral floats collapse to ints so 100.0 and 100 serialize alike."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def format_coord(value: float) -> str:
    """Shortest stable text for a coordinate (draw.io geometry attributes)."""
    return str(canonical_number(value))


def _node_entry(node: Node) -> dict:
    entry: dict = {"id": node.id}
    if node.node_type is not None:
        entry["type"] = node.node_type.value
    if node.label is not None:
        entry["label"] = node.label
    if node.partner is not None:
        entry["partner"] = node.partner
    if node.position is not None:
        entry["position"] = [canonical_number(v) for v in node.position]
    if node.extra:
        entry["extra"] = dict(node.extra)
    return entry


def _flow_entry(flow: Flow) -> dict:
    entry: dict = {"id": flow.id, "source": flow.source, "target": flow.target}
    if flow.flow_type is not None:
        entry["type"] = flow.flow_type.value
    if flow.label is not None:
        entry["label"] = flow.label
    if flow.partner is not None:
        entry["partner"] = flow.partner
    if flow.extra:
        entry["extra"] = dict(flow.extra)
    return entry


def to_canonical_dict(diagram: Diagram) -> dict:
    """Canonical document for a diagram; equal documents mean equal models."""
    return {
        "schema": SCHEMA_ID,
        "stage": diagram.stage.value,
        "nodes": [_node_entry(diagram.nodes[k]) for k in sorted(diagram.nodes)],
        "flows": [_flow_entry(diagram.flows[k]) for k in sorted(diagram.flows)],
    }


def emit_json(diagram: Diagram) -> bytes:
    """Canonical JSON bytes: sorted keys, two-space indent, LF, newline at end."""
    text = json.dumps(
        to_canonical_dict(diagram), ensure_ascii=False, indent=2, sort_keys=True
    )
    return (text + "\n").encode("utf-8")


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _read_string(entry: dict, key: str, where: str) -> str | None:
    value = entry.get(key)
    if value is None:
        return None
    _expect(isinstance(value, str), f"{where}: {key} must be a string")
    return value


def _read_extra(entry: dict, where: str) -> dict[str, str]:
    extra = entry.get("extra", {})
    _expect(isinstance(extra, dict), f"{where}: extra must be an object")
    for key, value in extra.items():
        _expect(
            isinstance(key, str) and isinstance(value, str),
            f"{where}: extra entries must map strings to strings",
        )
    return dict(extra)


def _read_type(entry: dict, enum_type, where: str):
    value = entry.get("type")
    if value is None:
        return None
    _expect(isinstance(value, str), f"{where}: type must be a string")
    try:
        return enum_type(value)
    except ValueError:
        raise SchemaError(f"{where}: unknown type {value!r}") from None


def parse_json(data: bytes | str) -> Diagram:
    """Read a canonical JSON document back into a diagram.

    The schema id, stage, element shapes, id uniqueness, and endpoint
    existence are all enforced; violations raise SchemaError.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    _expect(isinstance(doc, dict), "top level must be an object")
    schema = doc.get("schema")
    _expect(
        schema == SCHEMA_ID,
        f"schema must be {SCHEMA_ID!r}, found {schema!r}",
    )
    unknown = set(doc) - {"schema", "stage", "nodes", "flows"}
    _expect(not unknown, f"unknown document keys {sorted(unknown)}")
    try:
        stage = Stage(doc.get("stage"))
    except ValueError:
        raise SchemaError(f"unknown stage {doc.get('stage')!r}") from None

    raw_nodes = doc.get("nodes", [])
    raw_flows = doc.get("flows", [])
    _expect(isinstance(raw_nodes, list), "nodes must be a list")
    _expect(isinstance(raw_flows, list), "flows must be a list")

    nodes: dict[str, Node] = {}
    for entry in raw_nodes:
        _expect(isinstance(entry, dict), "each node must be an object")
        unknown = set(entry) - _NODE_KEYS
        _expect(not unknown, f"node has unknown keys {sorted(unknown)}")
        node_id = entry.get("id")
        _expect(
            isinstance(node_id, str) and node_id != "", "node id must be a non-empty string"
        )
        _expect(node_id not in nodes, f"duplicate node id {node_id!r}")
        where = f"node {node_id!r}"
        position = entry.get("position")
        if position is not None:
            _expect(
                isinstance(position, list)
                and len(position) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in position),
                f"{where}: position must be a pair of numbers",
            )
            position = (float(position[0]), float(position[1]))
        nodes[node_id] = Node(
            id=node_id,
            node_type=_read_type(entry, NodeType, where),
            label=_read_string(entry, "label", where),
            partner=_read_string(entry, "partner", where),
            position=position,
            extra=_read_extra(entry, where),
        )

    flows: dict[str, Flow] = {}
    for entry in raw_flows:
        _expect(isinstance(entry, dict), "each flow must be an object")
        unknown = set(entry) - _FLOW_KEYS
        _expect(not unknown, f"flow has unknown keys {sorted(unknown)}")
        flow_id = entry.get("id")
        _expect(
            isinstance(flow_id, str) and flow_id != "", "flow id must be a non-empty string"
        )
        _expect(flow_id not in flows, f"duplicate flow id {flow_id!r}")
        where = f"flow {flow_id!r}"
        source = _read_string(entry, "source", where)
        target = _read_string(entry, "target", where)
        _expect(
            source is not None and target is not None,
            f"{where}: source and target are required",
        )
        for endpoint in (source, target):
            _expect(
                endpoint in nodes,
                f"{where}: references missing node {endpoint!r}",
            )
        flows[flow_id] = Flow(
            id=flow_id,
            source=source,
            target=target,
            flow_type=_read_type(entry, FlowType, where),
            label=_read_string(entry, "label", where),
            partner=_read_string(entry, "partner", where),
            extra=_read_extra(entry, where),
        )

    return Diagram(stage=stage, nodes=nodes, flows=flows)
