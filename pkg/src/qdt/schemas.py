"""JSON schemas for the CLI's report payloads."""

import jsonschema

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[1-9][0-9]*$"}
DEPTHS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
NAT = {"type": "integer", "minimum": 0}

VERDICT = {
    "type": "object",
    "required": ["name", "law", "verdict", "checked"],
    "properties": {
        "name": {"type": "string"},
        "law": {"type": "string"},
        "verdict": {"enum": ["pass", "fail"]},
        "checked": NAT,
        "violations": NAT,
        "witness": {"type": "array"},
        "lhs": RATIONAL,
        "rhs": RATIONAL,
        "detail": {"type": "object"},
    },
}

COMPLEXITY = {
    "type": "object",
    "required": ["alg", "n", "worst", "average", "epl", "profile"],
    "properties": {
        "alg": {"enum": ["insertion", "merge"]},
        "n": {"type": "integer", "minimum": 1},
        "worst": NAT,
        "average": RATIONAL,
        "epl": NAT,
        "profile": DEPTHS,
        "kraft": RATIONAL,
        "single_child_nodes": NAT,
    },
}

PAYLOADS = {
    "enumerate": {
        "type": "object",
        "required": ["n", "count", "sequences"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "count": NAT,
            "sequences": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["depths", "text", "epl", "kraft"],
                    "properties": {"depths": DEPTHS, "text": {"type": "string"}, "epl": NAT, "kraft": RATIONAL},
                },
            },
        },
    },
    "analyze": COMPLEXITY,
    "lattice": {
        "type": "object",
        "required": ["n", "classes", "antisymmetry_witnesses", "quotient_lattice", "partial_metric", "quasi_metric"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "classes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["rank", "epl", "members"],
                    "properties": {"rank": NAT, "epl": NAT, "members": {"type": "array", "items": DEPTHS}},
                },
            },
            "antisymmetry_witnesses": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "quotient_lattice": {"enum": ["pass", "fail"]},
            "partial_metric": {"type": "object"},
            "quasi_metric": {"type": "object"},
        },
    },
    "topo": {
        "type": "object",
        "required": ["source", "sequence", "orientation", "down_sets", "maximal", "recovered", "base_check"],
        "properties": {
            "source": {"type": "string"},
            "sequence": DEPTHS,
            "orientation": {"enum": ["root-as-bottom", "root-as-top"]},
            "down_sets": NAT,
            "chain_open": NAT,
            "maximal": {"type": "array", "items": {"type": "array", "items": NAT}},
            "recovered": DEPTHS,
            "base_check": {"enum": ["pass", "fail"]},
        },
    },
    "check": {
        "type": "object",
        "required": ["suite"],
        "properties": {"suite": {"type": "string"}},
    },
}

REPORT = {
    "type": "object",
    "required": ["command", "plan", "payload", "verdicts", "exit_code"],
    "properties": {
        "command": {"enum": sorted(PAYLOADS)},
        "plan": {"type": "object"},
        "payload": {"type": "object"},
        "verdicts": {"type": "array", "items": VERDICT},
        "exit_code": {"enum": [0, 1]},
    },
}


def validate_report(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if the report or its payload is malformed."""
    jsonschema.validate(report, REPORT)
    jsonschema.validate(report["payload"], PAYLOADS[report["command"]])
