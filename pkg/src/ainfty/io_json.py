"""Algebra file parsing and canonical JSON emission.

One file describes one algebra.  The `kind` field selects exactly one of:

  dga          free graded-commutative presentation: generators, polynomial
               differential, optional truncation / omega / level,
  symplectic   the same with all generators in degree one plus a required
               nondegenerate omega,
  ainf         an explicit graded basis with operation tables and an optional
               Poincare-duality block.

Scalars are serialized as exact strings "p/q"; all emitted JSON uses sorted
keys and no timestamps, so a rerun reproduces the bytes.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ainf import AInfStructure, PDStructure, make_pd_structure
from .dga import Dga, make_free_graded_commutative_dga
from .graded import (GradedSpace, MalformedInput, MultiLinearMap, Vector,
                     format_scalar, parse_scalar)
from .symplectic import SymplecticModel, build_symplectic_model

SCHEMA_ALGEBRA = "ainfty.algebra/1"
SCHEMA_CERTIFICATE = "ainfty.certificate/1"
TOOL_VERSION = "ainfty 0.1.0"

_TOKEN = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*(\^[0-9]+)?$")


def parse_terms(text: str) -> list[tuple[Fraction, list[str]]]:
    """'1/2*e1*e2 - e3*w^2' -> [(1/2, [e1, e2]), (-1, [e3, w, w])].

    Purely syntactic; products and signs are resolved by the algebra later.
    """
    if not isinstance(text, str):
        raise MalformedInput(f"expression must be a string, got {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise MalformedInput("empty expression")
    if s == "0":
        return []
    terms = []
    buf = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-/*^":
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    out = []
    for term in terms:
        if not term or term in "+-":
            raise MalformedInput(f"bad term in expression {text!r}")
        sign = Fraction(1)
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        factors = term.split("*") if term else []
        coeff = sign
        gens: list[str] = []
        for f in factors:
            if not f:
                raise MalformedInput(f"empty factor in {text!r}")
            if re.fullmatch(r"[0-9]+(/[0-9]+)?", f):
                coeff *= parse_scalar(f)
            elif f == "1":
                continue
            elif _TOKEN.match(f):
                if "^" in f:
                    g, e = f.split("^")
                    gens.extend([g] * int(e))
                else:
                    gens.append(f)
            else:
                raise MalformedInput(f"bad factor {f!r} in {text!r}")
        out.append((coeff, gens))
    return out


def terms_to_vector(dga: Dga, terms: list[tuple[Fraction, list[str]]]) -> Vector:
    if dga.unit is None:
        raise MalformedInput("expression evaluation needs a unital algebra")
    acc = Vector.zero()
    for coeff, gens in terms:
        v = Vector.basis(dga.unit, coeff)
        for g in gens:
            if not dga.space.has(g):
                raise MalformedInput(f"unknown generator {g!r}")
            v = dga.mul(v, Vector.basis(g))
        acc = acc + v
    return acc


def parse_vector_expr(dga: Dga, text: str) -> Vector:
    return terms_to_vector(dga, parse_terms(text))


@dataclass
class ParsedAlgebra:
    kind: str
    dga: Optional[Dga] = None
    model: Optional[SymplecticModel] = None
    structure: Optional[AInfStructure] = None
    pd: Optional[PDStructure] = None
    omega: Optional[Vector] = None
    level: Optional[int] = None
    raw: Optional[dict] = None


def _parse_generators(data) -> list[tuple[str, int]]:
    gens = []
    for item in data:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise MalformedInput(f"generator entry must be [label, degree], got {item!r}")
        gens.append((str(item[0]), int(item[1])))
    return gens


def load_algebra(data: dict) -> ParsedAlgebra:
    if not isinstance(data, dict):
        raise MalformedInput("top-level JSON must be an object")
    if data.get("schema") != SCHEMA_ALGEBRA:
        raise MalformedInput(f"unsupported schema {data.get('schema')!r}; "
                             f"expected {SCHEMA_ALGEBRA!r}")
    if data.get("field", "rational") != "rational":
        raise MalformedInput("only the rational field is supported")
    kind = data.get("kind")
    if kind == "dga":
        gens = _parse_generators(data.get("generators", []))
        d_terms = {g: parse_terms(expr)
                   for g, expr in (data.get("differential") or {}).items()}
        trunc = data.get("truncation")
        dga = make_free_graded_commutative_dga(gens, d_terms,
                                               truncation=trunc)
        out = ParsedAlgebra(kind="dga", dga=dga, raw=data)
        if data.get("omega") is not None:
            out.omega = parse_vector_expr(dga, data["omega"])
        if data.get("level") is not None:
            out.level = int(data["level"])
        return out
    if kind == "symplectic":
        gens = _parse_generators(data.get("generators", []))
        d_terms = {g: parse_terms(expr)
                   for g, expr in (data.get("differential") or {}).items()}
        if data.get("omega") is None:
            raise MalformedInput("symplectic models need omega")
        model = build_symplectic_model(gens, d_terms, parse_terms(data["omega"]))
        out = ParsedAlgebra(kind="symplectic", dga=model.dga, model=model,
                            omega=model.omega, raw=data)
        if data.get("level") is not None:
            out.level = int(data["level"])
        return out
    if kind == "ainf":
        basis_block = data.get("basis")
        if not isinstance(basis_block, dict):
            raise MalformedInput("ainf files need a basis block")
        labeled = []
        for deg_str in sorted(basis_block, key=lambda s: int(s)):
            for lbl in basis_block[deg_str]:
                labeled.append((str(lbl), int(deg_str)))
        space = GradedSpace(labeled)
        ops = {}
        for p_str, entries in (data.get("operations") or {}).items():
            p = int(p_str)
            m = MultiLinearMap(space, space, p, 2 - p)
            for entry in entries:
                if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
                    raise MalformedInput(f"operation entry must be [key, value], got {entry!r}")
                key, value = entry
                vec = Vector({str(l): parse_scalar(c) for l, c in value.items()})
                m.set(tuple(str(k) for k in key), vec)
            ops[p] = m
        unit = data.get("unit")
        struct = AInfStructure(space=space, ops=ops,
                               p_max=int(data.get("pmax", 6)), unit=unit)
        out = ParsedAlgebra(kind="ainf", structure=struct, raw=data)
        pd_block = data.get("pd")
        if pd_block:
            duals = None
            if "duals" in pd_block:
                duals = {int(d): [Vector({l: parse_scalar(c) for l, c in dv.items()})
                                  for dv in vecs]
                         for d, vecs in pd_block["duals"].items()}
            out.pd = make_pd_structure(struct, mu=str(pd_block["mu"]),
                                       connectivity=int(pd_block.get("connectivity", 0)),
                                       duals=duals)
        return out
    raise MalformedInput(f"unknown kind {kind!r}; expected dga, symplectic or ainf")


def load_algebra_file(path: str) -> tuple[ParsedAlgebra, str]:
    """Parse the file; returns (algebra, sha256 hex digest of the bytes)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    digest = hashlib.sha256(blob).hexdigest()
    try:
        data = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from None
    return load_algebra(data), digest


# ---------------------------------------------------------------------------
# Canonical serialization.
# ---------------------------------------------------------------------------

def vector_json(v: Vector) -> dict:
    return {l: format_scalar(c) for l, c in sorted(v.items())}


def multilinear_json(space: GradedSpace, m: MultiLinearMap) -> list:
    return [[list(key), vector_json(m.table[key])] for key in m.sorted_keys()]


def structure_json(struct: AInfStructure) -> dict:
    space = struct.space
    return {
        "basis": {str(k): space.basis(k) for k in space.degrees() if space.dim(k)},
        "unit": struct.unit,
        "pmax": struct.p_max,
        "operations": {str(p): multilinear_json(space, struct.op(p))
                       for p in sorted(struct.ops) if not struct.op(p).is_zero()},
    }


def morphism_json(f) -> dict:
    return {
        "pmax": f.p_max,
        "maps": {str(p): multilinear_json(f.source.space, f.f(p))
                 for p in sorted(f.maps) if not f.f(p).is_zero()},
    }


def certificate(command: str, digest: Optional[str], pmax: Optional[int],
                payload: dict) -> dict:
    out = {
        "schema": SCHEMA_CERTIFICATE,
        "tool": TOOL_VERSION,
        "command": command,
        "input_digest": digest,
    }
    if pmax is not None:
        out["pmax"] = pmax
    out.update(payload)
    return out


def to_canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
