"""Text interchange: poset documents, DOT Hasse diagrams, result JSON."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import CycleError, DuplicateElementError, EmptyPosetError, ParseError, UnknownElementError
from .poset import Poset, from_covers, natural_key

RESULT_VERSION = "latcal-result/1"
HEADER = "elements:"


def parse_poset_document(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    """Parse ``elements: a b c`` followed by ``lower < upper`` lines."""
    elements = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if elements is None:
            if not line.startswith(HEADER):
                raise ParseError(lineno, f"expected '{HEADER} <id> ...' header, got {line!r}")
            elements = line[len(HEADER) :].split()
            if not elements:
                raise ParseError(lineno, "header lists no elements")
            seen = set()
            for e in elements:
                if "<" in e:
                    raise ParseError(lineno, f"identifier {e!r} contains '<'")
                if e in seen:
                    raise ParseError(lineno, f"duplicate element {e!r}")
                seen.add(e)
            continue
        if line.startswith(HEADER):
            raise ParseError(lineno, "second header line")
        parts = line.split("<")
        if len(parts) != 2:
            raise ParseError(lineno, f"expected '<lower> < <upper>', got {line!r}")
        lo, hi = (p.split() for p in parts)
        if len(lo) != 1 or len(hi) != 1:
            raise ParseError(lineno, f"expected exactly one identifier on each side of '<' in {line!r}")
        pair = (lo[0], hi[0])
        for e in pair:
            if e not in seen:
                raise ParseError(lineno, f"unknown element {e!r}")
        covers.append(pair)
    if elements is None:
        raise ParseError(0, "empty document")
    return elements, covers


def poset_from_text(text: str) -> Poset:
    elements, covers = parse_poset_document(text)
    try:
        return from_covers(elements, covers)
    except (CycleError, DuplicateElementError, UnknownElementError, EmptyPosetError) as exc:
        raise ParseError(0, str(exc)) from exc


def read_poset(path) -> Poset:
    return poset_from_text(Path(path).read_text(encoding="utf-8"))


def serialize_poset(p: Poset) -> str:
    """Canonical document: naturally sorted elements, then sorted cover lines."""
    elements = sorted(p.elements, key=natural_key)
    covers = sorted(p.covers, key=lambda c: (natural_key(c[0]), natural_key(c[1])))
    lines = [HEADER + " " + " ".join(elements)]
    lines += [f"{lo} < {hi}" for lo, hi in covers]
    return "\n".join(lines) + "\n"


def to_dot(p: Poset, name: str = "hasse") -> str:
    """Hasse diagram, bottom-to-top, one rank per height."""
    heights = p.heights()
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for h in range(int(heights.max()) + 1 if len(p) else 0):
        members = " ".join(json.dumps(p.elements[i]) + ";" for i in np.flatnonzero(heights == h))
        lines.append(f"  {{ rank=same; {members} }}")
    lo, hi = np.nonzero(p.cover_matrix)
    for a, b in zip(lo, hi):
        lines.append(f"  {json.dumps(p.elements[a])} -> {json.dumps(p.elements[b])} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _encode(obj, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if text in ("-0", "0"):
            return "0.0"
        if "e" not in text and "." not in text:
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_result(doc: dict, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys and 17 significant digits for floats."""
    return _encode(doc, indent, 0) + "\n"


def result_document(command: str, input: dict, *, lattice=None, valuation=None, reports=(), results=None) -> dict:
    return {
        "command": command,
        "input": input,
        "lattice": lattice,
        "valuation": valuation,
        "reports": [r.to_dict() for r in reports],
        "results": results or {},
        "version": RESULT_VERSION,
    }


def lattice_section(p: Poset, diagnostic) -> dict:
    from .poset import classify

    section = {
        "elementCount": len(p),
        "coverCount": int(p.cover_matrix.sum()),
        "classification": classify(p),
        "isLattice": diagnostic.is_lattice,
        "isDistributive": diagnostic.is_distributive,
        "bottom": None,
        "top": None,
        "failureWitness": None,
        "distributivityWitness": None,
        "notices": list(p.notices),
    }
    if diagnostic.is_lattice:
        leq = p.leq_matrix
        section["bottom"] = p.elements[int(np.flatnonzero(leq.all(axis=1))[0])]
        section["top"] = p.elements[int(np.flatnonzero(leq.all(axis=0))[0])]
    if diagnostic.failure_witness is not None:
        f = diagnostic.failure_witness
        section["failureWitness"] = {
            "pair": list(f.pair),
            "kind": f.kind,
            "bounds": list(f.bounds),
            "message": f.describe(),
        }
    if diagnostic.distributivity_witness is not None:
        section["distributivityWitness"] = list(diagnostic.distributivity_witness)
    return section


def valuation_section(v, conditional=None) -> dict:
    return {
        "values": v.as_dict(),
        "increments": dict(v.increments),
        "flags": {"monotone": v.monotone, "nonnegativeIncrements": v.nonnegative_increments},
        "conditional": conditional,
    }
