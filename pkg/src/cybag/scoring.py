"""CVSS-based local probabilities.

The attack/access complexity component of a CVSS vector maps to a local
probability (Low 0.71, Medium 0.61, High 0.35, anything unknown 0.61).
Vulnerability data is ingested from an offline JSON feed file rather than
a live NVD client so runs stay hermetic; leaves are matched to feed
records by the CVE ids embedded in their labels.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import IoError, ParseError
from .graph import AttackGraph, NodeKind

log = logging.getLogger(__name__)

CVE_PATTERN = re.compile(r"CVE-\d{4}-\d{4,}", re.IGNORECASE)


class Complexity(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ComplexityScore:
    value: Complexity
    cvss_version: int | None  # 2, 3 or None for unknown

    def __post_init__(self):
        if self.value is Complexity.MEDIUM and self.cvss_version != 2:
            raise ValueError("Medium complexity exists only in CVSS version 2")


@dataclass(frozen=True)
class CveRecord:
    cve_id: str
    complexity: ComplexityScore

    def __post_init__(self):
        if not CVE_PATTERN.fullmatch(self.cve_id):
            raise ValueError(f"not a CVE id: {self.cve_id!r}")


_LOCAL_PROBABILITY = {
    Complexity.LOW: 0.71,
    Complexity.MEDIUM: 0.61,
    Complexity.UNKNOWN: 0.61,
    Complexity.HIGH: 0.35,
}

_UNKNOWN = ComplexityScore(Complexity.UNKNOWN, None)


def probability_from_complexity(score: ComplexityScore) -> float:
    return _LOCAL_PROBABILITY[score.value]


def parse_cvss_vector(vector: str) -> ComplexityScore:
    """Extract the complexity component of a CVSS v2 or v3 vector.

    Total function: anything that does not parse maps to Unknown.
    """
    text = vector.strip()
    if text.upper().startswith("CVSS:3."):
        body = text.split("/", 1)[1] if "/" in text else ""
        for token in body.split("/"):
            key, _, val = token.partition(":")
            if key.upper() == "AC":
                if val.upper() == "L":
                    return ComplexityScore(Complexity.LOW, 3)
                if val.upper() == "H":
                    return ComplexityScore(Complexity.HIGH, 3)
        return _UNKNOWN
    for token in text.split("/"):
        key, sep, val = token.partition(":")
        if sep and key.upper() == "AC":
            mapped = {
                "L": Complexity.LOW,
                "M": Complexity.MEDIUM,
                "H": Complexity.HIGH,
            }.get(val.upper())
            if mapped is not None:
                return ComplexityScore(mapped, 2)
    return _UNKNOWN


def import_feed(path) -> list[CveRecord]:
    """Read a JSON array of ``{"cve_id": ..., "vector": ...}`` objects.

    Later duplicates of a CVE id win, with a warning.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read feed {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"feed is not valid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, list):
        raise ParseError("feed must be a JSON array of records")

    by_id: dict[str, CveRecord] = {}
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "cve_id" not in item or "vector" not in item:
            raise ParseError(f"record {i} must be an object with cve_id and vector")
        cve_id = str(item["cve_id"]).upper()
        if not CVE_PATTERN.fullmatch(cve_id):
            raise ParseError(f"record {i}: not a CVE id: {item['cve_id']!r}")
        if cve_id in by_id:
            log.warning("duplicate feed entry for %s; keeping the last one", cve_id)
        by_id[cve_id] = CveRecord(cve_id, parse_cvss_vector(str(item["vector"])))
    return list(by_id.values())


def apply_scores(graph: AttackGraph, records: Iterable[CveRecord]) -> AttackGraph:
    """New graph with leaf probabilities set from matching CVE records.

    A leaf matches when its label contains a CVE id present in the
    records; all other nodes are untouched, and the node/edge structure is
    never altered. Records that match no leaf are reported as warnings.
    """
    by_id = {r.cve_id: r for r in records}
    new_probs: dict[int, float] = {}
    used: set[str] = set()
    for node in graph.nodes:
        if node.kind is not NodeKind.LEAF:
            continue
        for match in CVE_PATTERN.finditer(node.label):
            cve_id = match.group(0).upper()
            record = by_id.get(cve_id)
            if record is not None:
                new_probs[node.id] = probability_from_complexity(record.complexity)
                used.add(cve_id)
                break
    for cve_id in sorted(set(by_id) - used):
        log.warning("feed record %s matches no leaf label", cve_id)
    return graph.replace_probs(new_probs)
