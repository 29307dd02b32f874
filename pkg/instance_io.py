"""
Instance files: schema, loading and the objects they describe
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from jsonschema import Draft202012Validator

from brauer_formulas import random_standard_setup, standard_setup_from_s
from errors import InvalidInstance
from nerve import build_nerve
from tu_groupoid import cover_from_json, groupoid_from_json
from twist import twist_from_support

logger = logging.getLogger(__name__)

SCALAR = {"type": ["integer", "string"]}
VECTOR = {"type": "array", "items": SCALAR}

INSTANCE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "dimred instance",
    "type": "object",
    "required": ["nerve", "twist"],
    "properties": {
        "name": {"type": "string"},
        "nerve": {
            "type": "object",
            "required": ["facets"],
            "properties": {
                "facets": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "minItems": 1,
                              "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
        "twist": {
            "type": "object",
            "required": ["n"],
            "properties": {
                "n": {"type": "integer", "minimum": 0},
                "support": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["simplex", "value"],
                        "properties": {
                            "simplex": {"type": "array", "minItems": 3, "maxItems": 3,
                                        "items": {"type": "integer", "minimum": 0}},
                            "value": {"type": "array", "items": {"type": "integer"}},
                        },
                    },
                },
            },
        },
        "setup": {
            "oneOf": [
                {"const": "random"},
                {
                    "type": "object",
                    "required": ["s"],
                    "properties": {
                        "s": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["pair", "value"],
                                "properties": {
                                    "pair": {"type": "array", "minItems": 2, "maxItems": 2,
                                             "items": {"type": "integer", "minimum": 0}},
                                    "value": VECTOR,
                                },
                            },
                        },
                        "base": {"type": "object",
                                 "additionalProperties": {"type": "integer", "minimum": 0}},
                    },
                },
            ],
        },
        "groupoid": {
            "type": "object",
            "properties": {
                "group": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "set": {"type": "array", "items": {"type": "string"}},
                "action": {"type": "object"},
                "covers": {"type": "array"},
                "modulus": {"type": "integer", "minimum": 2},
            },
        },
        "compute": {
            "type": "object",
            "properties": {
                "degrees": {"type": "array", "minItems": 1,
                            "items": {"type": "integer", "minimum": 0}},
                "coefficients": {"type": "array", "minItems": 1,
                                 "items": {"enum": ["Z", "Q", "QZ"]}},
            },
        },
        "parameters": {"type": "object"},
    },
}


@dataclass
class Instance:
    name: str
    nerve: object
    twist: object
    raw: dict
    digest: str
    degrees: list = field(default_factory=lambda: [0, 1, 2, 3])
    coefficients: list = field(default_factory=lambda: ["Z"])

    @property
    def has_setup(self):
        return "setup" in self.raw

    @property
    def has_groupoid(self):
        return "groupoid" in self.raw

    def setup(self, rng):
        data = self.raw["setup"]
        if data == "random":
            return random_standard_setup(self.nerve, self.twist, rng)
        pairs = {tuple(entry["pair"]): entry["value"] for entry in data["s"]}
        base = {int(k.removeprefix("component")): v for k, v in data.get("base", {}).items()}
        return standard_setup_from_s(self.nerve, self.twist.n, pairs, base)

    def groupoid_cases(self):
        data = self.raw["groupoid"]
        groupoid = groupoid_from_json(data)
        covers = [cover_from_json(groupoid, c) for c in data.get("covers", ["trivial"])]
        return [(groupoid, covers)]


def digest(data):
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(canonical).hexdigest()


def validate_instance(data):
    errors = sorted(Draft202012Validator(INSTANCE_SCHEMA).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.path) or "<root>"
        raise InvalidInstance(f"instance invalid at {where}: {first.message}")
    return data


def parse_instance(data):
    """Validated instance dict to nerve, twist and request; NotClosed propagates"""
    validate_instance(data)
    nerve = build_nerve(data["nerve"]["facets"])
    n = data["twist"]["n"]
    support = [(entry["simplex"], entry["value"]) for entry in data["twist"].get("support", [])]
    for simplex, _ in support:
        if tuple(sorted(simplex)) not in nerve:
            raise InvalidInstance(f"twist support {simplex} is not a triangle of the nerve")
    twist = twist_from_support(nerve, n, support)
    compute = data.get("compute", {})
    instance = Instance(
        name=data.get("name", "instance"),
        nerve=nerve,
        twist=twist,
        raw=data,
        digest=digest(data),
        degrees=list(compute.get("degrees", [0, 1, 2, 3])),
        coefficients=list(compute.get("coefficients", ["Z"])),
    )
    logger.info("loaded instance", extra={"instance": instance.name, "n": n,
                                          "counts": nerve.counts()})
    return instance


def load_instance(path):
    path = Path(path)
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path} is not valid JSON: {exc}") from None
    return parse_instance(data)


def dump_json(data):
    return json.dumps(data, sort_keys=True, indent=2)
