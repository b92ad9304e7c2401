"""Inductive construction of A-infinity minimal models by homotopy transfer.

Given a structure (A, m^A) and a splitting A = E (+) C (+) P with homotopy Q,
the minimal model on H = span(C) is built arity by arity:

    f_1 = inclusion of the C representatives,
    F_p = sum over compositions of m^A_r(f_{i_1} (x) ... (x) f_{i_r})
          minus the lower-operation terms f_{r+t+1}(1 (x) m_s (x) 1),
    m_p = class of F_p,          f_p = Q(f_1 m_p - F_p).

The construction is deterministic for a fixed splitting.  A strictly unital
refinement seeds the unit into C, after which every m_p and f_p vanishes on
tuples containing the unit (verified, not assumed).

`vanishing_profile` certifies "m_p = 0 for all p >= l" statements: arities up
to p_max by table inspection, all higher arities by the degree argument (each
non-unit suspended argument has degree >= k, so a nonzero b_p would need
p*k + 1 <= N - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .ainf import (AInfMorphism, AInfStructure, DEFAULT_P_MAX, check_morphism,
                   check_stasheff, check_strict_unitality, compose_inner,
                   compose_tensor, compositions, dga_to_ainf,
                   _rhs_sign_exponent)
from .dga import Dga
from .graded import (AlgebraError, BudgetExceeded, DependencyError,
                     GradedLinearMap, GradedSpace, MalformedInput,
                     MultiLinearMap, NotExact, SplittingData, Vector,
                     compute_splitting)
from .report import Report

DEFAULT_TUPLE_BUDGET = 2_000_000


def cohomology_basis(space: GradedSpace, splitting: SplittingData):
    """(H, proj, reps): the graded cohomology space on class labels, the class
    projection A -> H (defined via the splitting), and the representative
    embedding H -> A."""
    flat = splitting.c_basis_flat()
    h_labels = [(f"[{space.format_vector(v)}]", k) for k, _, v in flat]
    H = GradedSpace(h_labels)
    label_list = [l for l, _ in h_labels]
    index_of = {(k, i): j for j, (k, i, _) in enumerate(flat)}

    reps = GradedLinearMap(H, space, 0)
    for (lbl, _), (_, _, v) in zip(h_labels, flat):
        reps.set_column(lbl, v)
    proj = GradedLinearMap(space, H, 0)
    for a_lbl in space.labels():
        coords = splitting.c_coordinates(Vector.basis(a_lbl))
        proj.set_column(a_lbl, Vector({label_list[index_of[ki]]: c
                                       for ki, c in coords.items()}))
    return H, proj, reps


@dataclass
class TransferResult:
    """Minimal model on H with the transferring quasi-isomorphism f: H -> A."""
    structure: AInfStructure
    morphism: AInfMorphism
    splitting: SplittingData
    projection: GradedLinearMap      # A -> H (classes of cocycles)
    representatives: GradedLinearMap  # H -> A (= f_1)
    p_max: int


def compute_F_p(f_maps: dict[int, MultiLinearMap], source: AInfStructure,
                target: AInfStructure, p: int,
                tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> MultiLinearMap:
    """The arity-p obstruction built from the lower-arity data: composition
    terms m^A_r(f_{i_1} (x) ... (x) f_{i_r}) minus the lower-operation terms
    f_{r+t+1}(1 (x) m_s (x) 1).

    f_maps must contain arities 1..p-1; source carries the minimal operations
    built so far, target the ambient operations.
    """
    if p < 2:
        raise MalformedInput("F_p is defined for p >= 2")
    for i in range(1, p):
        if i not in f_maps:
            raise DependencyError(f"missing f_{i} while building F_{p}")
    acc: dict[tuple, Vector] = {}
    for r in range(2, p + 1):
        outer = target.op(r)
        if not outer.table:
            continue
        for parts in compositions(p, parts=r):
            fs = [f_maps[i] for i in parts]
            conv = -1 if _rhs_sign_exponent(parts) % 2 else 1
            compose_tensor(acc, outer, fs, conv)
            if len(acc) > tuple_budget:
                raise BudgetExceeded(f"F_{p} table exceeded {tuple_budget} entries")
    for r in range(p):
        for s in range(2, p):
            t = p - r - s
            if t < 0:
                continue
            outer = f_maps.get(r + t + 1)
            if outer is None or not outer.table:
                continue
            inner = source.op(s)
            conv = -1 if (r + s * t) % 2 else 1
            compose_inner(acc, outer, inner, r, -conv)
            if len(acc) > tuple_budget:
                raise BudgetExceeded(f"F_{p} table exceeded {tuple_budget} entries")
    F = MultiLinearMap(source.space, target.space, p, 2 - p)
    for key, v in acc.items():
        F.set(key, v)
    return F


def kadeishvili_transfer(A: Union[Dga, AInfStructure],
                         splitting: Optional[SplittingData] = None,
                         p_max: int = DEFAULT_P_MAX,
                         tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                         _seed_C: Optional[dict] = None,
                         validate: bool = True) -> TransferResult:
    """Minimal model of A with transferring morphism, deterministic for a
    fixed splitting.  m_p is the class of F_p and f_p = Q(f_1 m_p - F_p)."""
    src = dga_to_ainf(A, p_max) if isinstance(A, Dga) else A
    space = src.space
    d = GradedLinearMap(space, space, 1)
    m1 = src.op(1)
    for (lbl,), v in m1.table.items():
        d.set_column(lbl, v)
    s = splitting or compute_splitting(space, d, seed_C=_seed_C)

    H, proj, reps = cohomology_basis(space, s)
    unit_label = None
    if src.unit is not None:
        u = proj.apply(Vector.basis(src.unit))
        items = list(u.items())
        if len(items) == 1 and items[0][1] == 1 and \
                reps.apply_label(items[0][0]) == Vector.basis(src.unit):
            unit_label = items[0][0]

    minimal = AInfStructure(space=H, ops={}, p_max=p_max, unit=unit_label)
    f1 = MultiLinearMap(H, space, 1, 0)
    for lbl in H.labels():
        f1.set((lbl,), reps.apply_label(lbl))
    f_maps: dict[int, MultiLinearMap] = {1: f1}

    for p in range(2, p_max + 1):
        F = compute_F_p(f_maps, minimal, src, p, tuple_budget)
        m_p = MultiLinearMap(H, H, p, 2 - p)
        f_p = MultiLinearMap(H, space, p, 1 - p)
        for key in F.sorted_keys():
            val = F.table[key]
            if validate and not d.apply(val).is_zero():
                raise AlgebraError(f"F_{p} value at {key} is not closed")
            cls = proj.apply(val)
            if cls:
                m_p.set(key, cls)
            residue = f1.eval_vectors([cls]) - val
            if residue:
                if validate and s.proj_E.apply(residue) != residue:
                    raise AlgebraError(f"f_1 m_{p} - F_{p} not exact at {key}")
                f_p.set(key, s.Q.apply(residue))
        minimal.set_op(p, m_p)
        f_maps[p] = f_p

    morphism = AInfMorphism(source=minimal, target=src, maps=f_maps, p_max=p_max)
    return TransferResult(structure=minimal, morphism=morphism, splitting=s,
                          projection=proj, representatives=reps, p_max=p_max)


def strictly_unital_transfer(A: Union[Dga, AInfStructure],
                             splitting: Optional[SplittingData] = None,
                             p_max: int = DEFAULT_P_MAX,
                             tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                             validate: bool = True) -> TransferResult:
    """Transfer with the unit representative forced into C; the output and the
    morphism are strictly unital (checked by the caller-facing reports)."""
    src = dga_to_ainf(A, p_max) if isinstance(A, Dga) else A
    if src.unit is None:
        raise MalformedInput("strictly unital transfer needs a unit")
    unit_rep = check_strict_unitality(src)
    if not unit_rep.ok:
        fail = unit_rep.first_failure()
        raise MalformedInput(f"input is not strictly unital: {fail.name} "
                             f"witness={fail.witness}")
    if splitting is not None:
        raise MalformedInput("strictly unital transfer chooses its own splitting")
    udeg = src.space.degree_of(src.unit)
    try:
        result = kadeishvili_transfer(
            src, None, p_max, tuple_budget,
            _seed_C={udeg: [Vector.basis(src.unit)]}, validate=validate)
    except NotExact:
        raise MalformedInput("the unit is exact; no strictly unital minimal "
                             "model exists over this splitting") from None
    if result.structure.unit is None:
        raise AlgebraError("unit class not found after seeded splitting")
    return result


def verify_transfer(result: TransferResult, up_to: Optional[int] = None) -> Report:
    """Stasheff + morphism identities for a transfer output."""
    up_to = up_to or result.p_max
    rep = Report(f"transfer verification up to arity {up_to}")
    rep.merge(check_stasheff(result.structure, up_to))
    rep.merge(check_morphism(result.morphism, up_to))
    return rep


# ---------------------------------------------------------------------------
# Degree-forced vanishing certificates.
# ---------------------------------------------------------------------------

@dataclass
class VanishingCertificate:
    connectivity: int
    top: int
    p_max: int
    per_arity: dict[int, dict] = field(default_factory=dict)
    degree_forced_from: Optional[int] = None
    certified_from: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "connectivity": self.connectivity,
            "top_degree": self.top,
            "pmax": self.p_max,
            "per_arity": {str(p): row for p, row in sorted(self.per_arity.items())},
            "degree_forced_from": self.degree_forced_from,
            "certified_vanishing_from": self.certified_from,
            "notes": list(self.notes),
        }


def vanishing_profile(T: Union[TransferResult, AInfStructure],
                      connectivity: Optional[int] = None,
                      top: Optional[int] = None) -> VanishingCertificate:
    """Certify m_p = 0 per arity: inspected tables for p <= p_max, and the
    degree argument (suspended arguments of degree >= k cannot reach the top
    line) for every arity above the computed threshold."""
    A = T.structure if isinstance(T, TransferResult) else T
    space = A.space
    notes = []
    if not A.minimal:
        raise MalformedInput("vanishing profile needs a minimal structure")
    su = check_strict_unitality(A)
    strictly_unital = su.ok

    degrees = [k for k in space.degrees() if space.dim(k)]
    N = top if top is not None else max(degrees)
    if top is not None and max(degrees) > top:
        raise MalformedInput(f"classes above the declared top degree {top}")

    detected_k = 0
    while space.dim(detected_k + 1) == 0 and detected_k + 1 < N:
        detected_k += 1
    k = connectivity if connectivity is not None else detected_k
    if connectivity is not None:
        for i in range(1, connectivity + 1):
            if space.dim(i):
                raise MalformedInput(f"H^{i} != 0 contradicts connectivity {connectivity}")

    unit_ok = A.unit is not None and space.dim(0) == 1 and strictly_unital
    if not unit_ok:
        notes.append("no strict unit isolated in degree 0; "
                     "degree forcing disabled")

    # suspended degrees of the non-unit classes
    D = sorted({d - 1 for d in degrees if d != 0})
    if space.dim(0) > 1:
        D = sorted(set(D) | {-1})
    cert = VanishingCertificate(connectivity=k, top=N, p_max=A.p_max, notes=notes)

    forcing_possible = unit_ok and D and min(D) >= 1
    if unit_ok and D and min(D) < 1:
        notes.append("suspended class degrees reach 0; no arity is degree forced")

    max_out = max(D) if D else -1
    dp_forced: dict[int, bool] = {}
    p_star = None
    if forcing_possible:
        min_d = min(D)
        p_star = 3
        while p_star * min_d + 1 <= max_out:
            p_star += 1
        sums = {0}
        for p in range(1, p_star + 1):
            sums = {a + b for a in sums for b in D if a + b <= max_out + 1}
            if p >= 3:
                dp_forced[p] = all(s + 1 not in set(D) for s in sums)
        forced_from = None
        for l in range(3, p_star + 2):
            if all(dp_forced.get(p, True) for p in range(l, p_star + 1)):
                forced_from = l
                break
        cert.degree_forced_from = forced_from

    for p in range(3, A.p_max + 1):
        row = {"table_zero": A.op(p).is_zero()}
        if forcing_possible:
            row["degree_forced"] = dp_forced.get(p, True) if p >= 3 else False
            if row["degree_forced"] and not row["table_zero"]:
                notes.append(f"inconsistency: m_{p} degree forced to vanish "
                             f"but its table is nonzero")
        cert.per_arity[p] = row

    certified = None
    if cert.degree_forced_from is not None and cert.degree_forced_from <= A.p_max + 1:
        for l in range(3, A.p_max + 2):
            if all(cert.per_arity[p]["table_zero"] or
                   cert.per_arity[p].get("degree_forced", False)
                   for p in range(l, A.p_max + 1)):
                certified = l
                break
    cert.certified_from = certified
    return cert
