"""File formats: instance documents, distribution documents and DIMACS CNF.

Instance and distribution files are JSON. Exact numbers travel as strings
(``"3/5"``, ``"0.6"``, ``"1"``); JSON number literals are accepted too and
read digit-for-digit, so ``0.6`` means ``3/5``. Written rationals are always
in lowest terms.

Instance document::

    {
      "attributes": ["a", "b"],
      "constraints": [
        {"itemset": [], "frequency": "1"},
        {"itemset": ["a"], "frequency": "3/5"},
        {"itemset": ["b"], "frequency": "1/2"}
      ],
      "query": ["a", "b"],
      "threshold": "1/4"
    }

``query`` and ``threshold`` are optional. A state string in a distribution
document has one character per attribute, in the order of ``attributes``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .errors import MalformedInputError
from .model import FrequencyAssignment, Itemset, ItemsetFamily, JointDistribution, \
    to_fraction
from .reduction import CnfFormula, ReductionInstance


@dataclass(frozen=True)
class Instance:
    attributes: tuple
    family: ItemsetFamily
    theta: FrequencyAssignment
    query: Optional[Itemset] = None
    threshold: Optional[Fraction] = None

    @classmethod
    def from_reduction(cls, inst: ReductionInstance) -> "Instance":
        return cls(tuple(inst.attribute_names), inst.family, inst.theta, inst.query,
                   inst.threshold)

    def itemset(self, names: Sequence[str]) -> Itemset:
        return names_to_itemset(names, self.attributes)

    def names(self, itemset: Itemset) -> list:
        return [self.attributes[i] for i in itemset.indices]


def format_rational(value) -> str:
    """Lowest-terms ``"p/q"`` (or ``"p"`` for integers)."""
    return str(to_fraction(value))


def names_to_itemset(names: Sequence[str], attributes: Sequence[str]) -> Itemset:
    lookup = {name: i for i, name in enumerate(attributes)}
    idx = []
    for name in names:
        if not isinstance(name, str):
            raise MalformedInputError(f"attribute names must be strings, got {name!r}")
        if name not in lookup:
            raise MalformedInputError(f"undeclared attribute {name!r}")
        idx.append(lookup[name])
    return Itemset(idx)


def split_names(text: str) -> list:
    """``"a,b c"`` -> ``["a", "b", "c"]``; the empty string is the empty itemset."""
    return [tok for tok in text.replace(",", " ").split() if tok]


def _loads(text: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None


def _rational(value, what: str) -> Fraction:
    if not isinstance(value, (str, int, Decimal)) or isinstance(value, bool):
        raise MalformedInputError(f"{what}: expected a rational string, got {value!r}")
    return to_fraction(value)


def _attributes(doc) -> tuple:
    attrs = doc.get("attributes")
    if not isinstance(attrs, list) or not attrs:
        raise MalformedInputError("'attributes' must be a non-empty list of names")
    if any(not isinstance(a, str) or not a for a in attrs):
        raise MalformedInputError("attribute names must be non-empty strings")
    if len(set(attrs)) != len(attrs):
        raise MalformedInputError("attribute names must be unique")
    return tuple(attrs)


def parse_instance(text: str) -> Instance:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise MalformedInputError("instance document must be a JSON object")
    attrs = _attributes(doc)
    constraints = doc.get("constraints")
    if not isinstance(constraints, list):
        raise MalformedInputError("'constraints' must be a list")
    items, values = [], []
    for n, entry in enumerate(constraints):
        if not isinstance(entry, dict) or "itemset" not in entry or "frequency" not in entry:
            raise MalformedInputError(
                f"constraint #{n} must be an object with 'itemset' and 'frequency'")
        if not isinstance(entry["itemset"], list):
            raise MalformedInputError(f"constraint #{n}: 'itemset' must be a list of names")
        items.append(names_to_itemset(entry["itemset"], attrs))
        value = _rational(entry["frequency"], f"constraint #{n}")
        if not 0 <= value <= 1:
            raise MalformedInputError(
                f"constraint #{n} ({', '.join(entry['itemset']) or 'empty itemset'}): "
                f"frequency {value} outside [0, 1]")
        values.append(value)
    family = ItemsetFamily(items, len(attrs))
    theta = FrequencyAssignment(values)
    query = doc.get("query")
    if query is not None:
        if not isinstance(query, list):
            raise MalformedInputError("'query' must be a list of names")
        query = names_to_itemset(query, attrs)
    threshold = doc.get("threshold")
    if threshold is not None:
        threshold = _rational(threshold, "threshold")
    return Instance(attrs, family, theta, query, threshold)


def dump_instance(inst: Instance) -> str:
    doc = {
        "attributes": list(inst.attributes),
        "constraints": [
            {"itemset": inst.names(member), "frequency": format_rational(value)}
            for member, value in zip(inst.family, inst.theta)
        ],
    }
    if inst.query is not None:
        doc["query"] = inst.names(inst.query)
    if inst.threshold is not None:
        doc["threshold"] = format_rational(inst.threshold)
    return json.dumps(doc, indent=2) + "\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def dump_distribution(p: JointDistribution, attributes: Sequence[str]) -> str:
    if len(attributes) != p.attribute_count:
        raise MalformedInputError("attribute names do not match the distribution")
    K = p.attribute_count
    entries = []
    for state, mass in p.items():
        bits = "".join("1" if state >> j & 1 else "0" for j in range(K))
        entries.append({"state": bits,
                        "mass": format_rational(mass) if p.exact else repr(float(mass))})
    doc = {"attributes": list(attributes), "mode": "exact" if p.exact else "float",
           "entries": entries}
    return json.dumps(doc, indent=2) + "\n"


def parse_distribution(text: str) -> tuple:
    """``(distribution, attribute_names)`` from a distribution document."""
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise MalformedInputError("distribution document must be a JSON object")
    attrs = _attributes(doc)
    mode = doc.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise MalformedInputError(f"mode must be 'exact' or 'float', got {mode!r}")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise MalformedInputError("'entries' must be a list")
    K = len(attrs)
    mass = {}
    for n, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise MalformedInputError(f"entry #{n} must be an object")
        bits = entry.get("state")
        if not isinstance(bits, str) or len(bits) != K or set(bits) - {"0", "1"}:
            raise MalformedInputError(f"entry #{n}: state must be a {K}-character 0/1 string")
        state = sum(1 << j for j, ch in enumerate(bits) if ch == "1")
        if state in mass:
            raise MalformedInputError(f"entry #{n}: state {bits} listed twice")
        value = _rational(entry.get("mass"), f"entry #{n}")
        mass[state] = value if mode == "exact" else float(value)
    if mode == "exact":
        return JointDistribution(mass, K, exact=True), attrs
    total = sum(mass.values())
    if abs(total - 1.0) > 1e-9:
        raise MalformedInputError(f"masses sum to {total!r}, not 1")
    scaled = {s: v / total for s, v in mass.items()}
    return JointDistribution(scaled, K, exact=False), attrs


def parse_dimacs(text: str) -> CnfFormula:
    """Read the ``p cnf L M`` subset of DIMACS."""
    header = None
    literals = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise MalformedInputError(f"line {lineno}: bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedInputError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if header is None:
            raise MalformedInputError(f"line {lineno}: clause before the 'p cnf' line")
        try:
            literals.extend(int(tok) for tok in line.split())
        except ValueError:
            raise MalformedInputError(f"line {lineno}: non-integer literal") from None
    if header is None:
        raise MalformedInputError("missing 'p cnf' problem line")
    clauses, current = [], []
    for lit in literals:
        if lit == 0:
            clauses.append(current)
            current = []
        else:
            current.append(lit)
    if current:
        raise MalformedInputError("last clause is not terminated by 0")
    L, M = header
    if len(clauses) != M:
        raise MalformedInputError(f"header announces {M} clauses, found {len(clauses)}")
    return CnfFormula(L, clauses)


def dump_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.variable_count} {formula.clause_count}"]
    lines += [" ".join(map(str, clause)) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"
