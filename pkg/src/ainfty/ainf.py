"""A-infinity structures, morphisms, and identity checkers.

Operations m_p (arity p, degree 2-p) live in sparse MultiLinearMap tables.
Every structure also exposes its suspension: maps b_p of degree +1 on the
shifted space SA with (SA)^i = A^{i+1}, related to m_p by the commuting
square b_p o s^{(x)p} = s o m_p, i.e.

    b_p(s x_1, ..., s x_p) = (-1)^{sum_{j<p} (p-j)|x_j|} s m_p(x_1, ..., x_p).

Tensor expressions are evaluated with the Koszul rule: applying
g_1 (x) ... (x) g_r to a tuple inserts (-1)^{|g_c| * (degree of everything
to the left of block c)}.  The defect of each identity is materialised as a
sparse table so that zero maps cost nothing and enumeration is support
driven; witnesses are the lexicographically first nonzero tuples in basis
order.

Two independent evaluation paths are kept for the Stasheff identities: the
unsuspended convention with the printed signs (-1)^{r+st}, and the sign-free
suspended convention.  Checkers run both and require identical verdicts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graded import (ONE, ZERO, GradedLinearMap, GradedSpace, MalformedInput,
                     MultiLinearMap, Vector)
from .report import Report

DEFAULT_P_MAX = 6


def compositions(p: int, parts: Optional[int] = None):
    """Ordered tuples of positive integers summing to p (optionally with a
    fixed number of parts), in lexicographic order."""
    out = []

    def rec(rest, acc):
        if rest == 0:
            if parts is None or len(acc) == parts:
                out.append(tuple(acc))
            return
        if parts is not None and len(acc) >= parts:
            return
        for i in range(1, rest + 1):
            acc.append(i)
            rec(rest - i, acc)
            acc.pop()

    rec(p, [])
    return out


def linear_as_multilinear(L: GradedLinearMap) -> MultiLinearMap:
    m = MultiLinearMap(L.source, L.target, 1, L.degree)
    for label, col in L.columns.items():
        m.set((label,), col)
    return m


def suspension_sign(space: GradedSpace, key: tuple[str, ...]) -> int:
    """(-1)^{sum_{j<p} (p-j)|x_j|} with unsuspended degrees from `space`."""
    p = len(key)
    e = sum((p - j) * space.degree_of(l) for j, l in enumerate(key, start=1))
    return -1 if e % 2 else 1


def suspend_multilinear(m: MultiLinearMap, s_source: GradedSpace,
                        s_target: GradedSpace) -> MultiLinearMap:
    """Transport m_p to b_p on the suspended spaces (same labels)."""
    b = MultiLinearMap(s_source, s_target, m.arity, m.degree + m.arity - 1)
    for key, val in m.table.items():
        b.set(key, val.scale(suspension_sign(m.source, key)))
    return b


def desuspend_multilinear(b: MultiLinearMap, source: GradedSpace,
                          target: GradedSpace) -> MultiLinearMap:
    """Inverse transport; the sign is computed from the unsuspended degrees."""
    m = MultiLinearMap(source, target, b.arity, b.degree - b.arity + 1)
    for key, val in b.table.items():
        m.set(key, val.scale(suspension_sign(source, key)))
    return m


@dataclass
class AInfStructure:
    """Family {m_p : 1 <= p <= p_max} with degree 2-p, stored sparsely.

    Absent arities are zero.  The suspended family is derived on demand and
    memoized.  `minimal` means m_1 is absent or empty.
    """
    space: GradedSpace
    ops: dict[int, MultiLinearMap] = field(default_factory=dict)
    p_max: int = DEFAULT_P_MAX
    unit: Optional[str] = None
    _s_space: Optional[GradedSpace] = None
    _b_ops: dict = field(default_factory=dict)

    def __post_init__(self):
        for p, m in self.ops.items():
            if m.arity != p or m.degree != 2 - p:
                raise MalformedInput(f"m_{p} must have arity {p} and degree {2 - p}")

    @property
    def minimal(self) -> bool:
        return 1 not in self.ops or self.ops[1].is_zero()

    def op(self, p: int) -> MultiLinearMap:
        m = self.ops.get(p)
        if m is None:
            m = MultiLinearMap(self.space, self.space, p, 2 - p)
        return m

    def set_op(self, p: int, m: MultiLinearMap):
        if m.arity != p or m.degree != 2 - p:
            raise MalformedInput(f"m_{p} must have arity {p} and degree {2 - p}")
        self.ops[p] = m
        self._b_ops.pop(p, None)

    def suspended_space(self) -> GradedSpace:
        if self._s_space is None:
            self._s_space = self.space.suspended()
        return self._s_space

    def b_op(self, p: int) -> MultiLinearMap:
        if p not in self._b_ops:
            ss = self.suspended_space()
            self._b_ops[p] = suspend_multilinear(self.op(p), ss, ss)
        return self._b_ops[p]

    def nonzero_arities(self) -> list[int]:
        return sorted(p for p, m in self.ops.items() if not m.is_zero())


@dataclass
class AInfMorphism:
    """Family {f_p : A -> B} of degree 1-p satisfying the morphism identity."""
    source: AInfStructure
    target: AInfStructure
    maps: dict[int, MultiLinearMap] = field(default_factory=dict)
    p_max: int = DEFAULT_P_MAX
    _sf: dict = field(default_factory=dict)

    def __post_init__(self):
        for p, f in self.maps.items():
            if f.arity != p or f.degree != 1 - p:
                raise MalformedInput(f"f_{p} must have arity {p} and degree {1 - p}")

    def f(self, p: int) -> MultiLinearMap:
        m = self.maps.get(p)
        if m is None:
            m = MultiLinearMap(self.source.space, self.target.space, p, 1 - p)
        return m

    def set_f(self, p: int, m: MultiLinearMap):
        self.maps[p] = m
        self._sf.pop(p, None)

    def sf(self, p: int) -> MultiLinearMap:
        if p not in self._sf:
            self._sf[p] = suspend_multilinear(
                self.f(p), self.source.suspended_space(), self.target.suspended_space())
        return self._sf[p]


def dga_to_ainf(dga, p_max: int = DEFAULT_P_MAX) -> AInfStructure:
    ops = {2: dga.product}
    if not dga.d.is_zero():
        ops[1] = linear_as_multilinear(dga.d)
    return AInfStructure(space=dga.space, ops=ops, p_max=p_max, unit=dga.unit)


def identity_morphism(A: AInfStructure, p_max: Optional[int] = None) -> AInfMorphism:
    f1 = MultiLinearMap(A.space, A.space, 1, 0)
    for l in A.space.labels():
        f1.set((l,), Vector.basis(l))
    return AInfMorphism(source=A, target=A, maps={1: f1},
                        p_max=p_max or A.p_max)


# ---------------------------------------------------------------------------
# Support-driven evaluation of tensor expressions.
# ---------------------------------------------------------------------------

def _acc_add(acc: dict, key: tuple, v: Vector):
    cur = acc.get(key)
    s = v if cur is None else cur + v
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def compose_inner(acc: dict, outer: MultiLinearMap, inner: MultiLinearMap,
                  r: int, conv_sign: int):
    """acc += conv_sign * outer(1^{(x)r} (x) inner (x) 1^{(x)t}).

    Koszul: applying `inner` (of degree |inner|) past the first r slots costs
    (-1)^{|inner| * (their degree sum)}.  Enumeration runs over the support of
    `inner` times the label choices compatible with the degree support of
    `outer`, so zero maps cost nothing.
    """
    if not outer.table or not inner.table:
        return
    space = inner.source
    t = outer.arity - 1 - r
    out_support = outer.degree_support()
    basis = space.basis
    for key_mid, val_mid in inner.table.items():
        mid_deg = sum(space.degree_of(l) for l in key_mid) + inner.degree
        for degs in out_support:
            if degs[r] != mid_deg:
                continue
            pre_lists = [basis(d) for d in degs[:r]]
            post_lists = [basis(d) for d in degs[r + 1:]]
            if any(not bl for bl in pre_lists + post_lists):
                continue
            for pre in itertools.product(*pre_lists):
                koszul = conv_sign
                if inner.degree % 2 and sum(degs[:r]) % 2:
                    koszul = -koszul
                for post in itertools.product(*post_lists):
                    out = Vector.zero()
                    for mid_label, c in val_mid.items():
                        hit = outer.table.get(pre + (mid_label,) + post)
                        if hit is not None:
                            out = out + hit.scale(c)
                    if out:
                        _acc_add(acc, pre + key_mid + post, out.scale(koszul))


def compose_tensor(acc: dict, outer: MultiLinearMap, fs: list[MultiLinearMap],
                   conv_sign: int):
    """acc += conv_sign * outer(f_1 (x) ... (x) f_r), support-driven.

    Koszul: block c contributes (-1)^{|f_c| * (input degree of blocks < c)}.
    """
    if not outer.table or any(not f.table for f in fs):
        return
    space = fs[0].source
    out_support = outer.degree_support()
    prefixes = [set() for _ in range(len(fs) + 1)]
    for degs in out_support:
        for c in range(len(fs) + 1):
            prefixes[c].add(tuple(degs[:c]))

    f_keys = [f.sorted_keys() for f in fs]

    def rec(c, key_acc, out_degs, in_deg_sum, sign, vecs):
        if tuple(out_degs) not in prefixes[c]:
            return
        if c == len(fs):
            val = outer.eval_vectors(vecs)
            if val:
                _acc_add(acc, tuple(key_acc), val.scale(sign))
            return
        f = fs[c]
        for key in f_keys[c]:
            v = f.table[key]
            block_in = sum(space.degree_of(l) for l in key)
            s = sign
            if f.degree % 2 and in_deg_sum % 2:
                s = -s
            out_degs.append(block_in + f.degree)
            rec(c + 1, key_acc + list(key), out_degs, in_deg_sum + block_in, s,
                vecs + [v])
            out_degs.pop()

    rec(0, [], [], 0, conv_sign, [])


def _first_key(space: GradedSpace, keys) -> Optional[tuple]:
    keys = list(keys)
    return min(keys, key=space.tuple_key) if keys else None


# ---------------------------------------------------------------------------
# Stasheff identities.
# ---------------------------------------------------------------------------

def stasheff_defects(A: AInfStructure, p: int, suspended: bool = False) -> dict:
    """Nonzero entries of the arity-p Stasheff identity (empty means it holds)."""
    acc: dict[tuple, Vector] = {}
    for r in range(p):
        for s in range(1, p - r + 1):
            t = p - r - s
            outer = A.b_op(r + t + 1) if suspended else A.op(r + t + 1)
            inner = A.b_op(s) if suspended else A.op(s)
            conv = 1 if suspended else (-1 if (r + s * t) % 2 else 1)
            compose_inner(acc, outer, inner, r, conv)
    return acc


def check_stasheff(A: AInfStructure, up_to: int) -> Report:
    """Evaluate the Stasheff identities for every arity <= up_to, in both the
    printed-sign convention and the sign-free suspended convention."""
    if up_to > A.p_max:
        raise MalformedInput(f"up_to {up_to} exceeds p_max {A.p_max}")
    rep = Report(f"Stasheff identities up to arity {up_to}")
    for p in range(1, up_to + 1):
        bad_m = stasheff_defects(A, p, suspended=False)
        bad_b = stasheff_defects(A, p, suspended=True)
        w = _first_key(A.space, bad_m)
        rep.add(f"stasheff_p{p}", not bad_m,
                witness=str(w) if w else None, failures=len(bad_m))
        rep.add(f"stasheff_p{p}_conventions_agree",
                set(bad_m) == set(bad_b),
                witness=str(_first_key(A.space, set(bad_m) ^ set(bad_b)))
                if set(bad_m) != set(bad_b) else None)
    return rep


# ---------------------------------------------------------------------------
# Morphism identity.
# ---------------------------------------------------------------------------

def _rhs_sign_exponent(parts: tuple[int, ...]) -> int:
    r = len(parts)
    return sum((r - c) * (parts[c - 1] - 1) for c in range(1, r))


def morphism_defects(f: AInfMorphism, p: int) -> dict:
    """Nonzero entries of the arity-p morphism identity (LHS minus RHS)."""
    acc: dict[tuple, Vector] = {}
    for r in range(p):
        for s in range(1, p - r + 1):
            t = p - r - s
            outer = f.f(r + t + 1)
            inner = f.source.op(s)
            conv = -1 if (r + s * t) % 2 else 1
            compose_inner(acc, outer, inner, r, conv)
    for r in range(1, p + 1):
        outer = f.target.op(r)
        if not outer.table:
            continue
        for parts in compositions(p, parts=r):
            fs = [f.f(i) for i in parts]
            conv = -1 if _rhs_sign_exponent(parts) % 2 else 1
            compose_tensor(acc, outer, fs, -conv)
    return acc


def check_morphism(f: AInfMorphism, up_to: int) -> Report:
    if up_to > f.p_max:
        raise MalformedInput(f"up_to {up_to} exceeds p_max {f.p_max}")
    rep = Report(f"A-infinity morphism identities up to arity {up_to}")
    for p in range(1, up_to + 1):
        bad = morphism_defects(f, p)
        w = _first_key(f.source.space, bad)
        rep.add(f"morphism_p{p}", not bad, witness=str(w) if w else None,
                failures=len(bad))
    return rep


# ---------------------------------------------------------------------------
# Strict unitality.
# ---------------------------------------------------------------------------

def check_strict_unitality(A: AInfStructure, unit: Optional[str] = None) -> Report:
    unit = unit if unit is not None else A.unit
    rep = Report("strict unitality (structure)")
    if unit is None or not A.space.has(unit):
        rep.add("unit_present", False, witness=repr(unit))
        return rep
    rep.add("unit_degree_zero", A.space.degree_of(unit) == 0, witness=unit)
    rep.add("m1_kills_unit", A.op(1).get((unit,)).is_zero(), witness=unit)
    first = None
    count = 0
    m2 = A.op(2)
    for x in A.space.labels():
        if m2.get((unit, x)) != Vector.basis(x) or m2.get((x, unit)) != Vector.basis(x):
            count += 1
            first = first or (x,)
    rep.add("m2_unit_law", count == 0, witness=str(first) if first else None,
            failures=count)
    for p in range(3, A.p_max + 1):
        bad = [k for k in A.op(p).sorted_keys() if unit in k]
        rep.add(f"m{p}_vanishes_on_unit", not bad,
                witness=str(bad[0]) if bad else None, failures=len(bad))
    return rep


def check_strict_unitality_morphism(f: AInfMorphism) -> Report:
    rep = Report("strict unitality (morphism)")
    ua, ub = f.source.unit, f.target.unit
    if ua is None or ub is None:
        rep.add("units_present", False)
        return rep
    rep.add("f1_maps_unit_to_unit", f.f(1).get((ua,)) == Vector.basis(ub),
            witness=ua)
    for p in range(2, f.p_max + 1):
        bad = [k for k in f.f(p).sorted_keys() if ua in k]
        rep.add(f"f{p}_vanishes_on_unit", not bad,
                witness=str(bad[0]) if bad else None, failures=len(bad))
    return rep


# ---------------------------------------------------------------------------
# Cyclic permutation, the top-class functional, and Poincare duality data.
# ---------------------------------------------------------------------------

def sigma_permute(space: GradedSpace, key: tuple[str, ...]) -> tuple[int, tuple]:
    """One cyclic rotation of a suspended tuple with its Koszul sign.

    sigma(s a_1, ..., s a_p) = (-1)^{|s a_1| (n - |s a_1|)} (s a_2, ..., s a_1)
    where n is the total degree of the tuple and degrees are taken in `space`
    (pass the suspended space for the cyclic-sum convention).
    """
    if not key:
        raise MalformedInput("empty tuple")
    n = sum(space.degree_of(l) for l in key)
    d1 = space.degree_of(key[0])
    sign = -1 if (d1 * (n - d1)) % 2 else 1
    return sign, key[1:] + (key[0],)


def sigma_power(space: GradedSpace, key: tuple[str, ...], j: int) -> tuple[int, tuple]:
    sign = 1
    for _ in range(j):
        s, key = sigma_permute(space, key)
        sign *= s
    return sign, key


def star_coefficient(space: GradedSpace, mu: str, v: Vector) -> Fraction:
    """Extract c from v = c * mu; rejects vectors outside the top line."""
    mu_deg = space.degree_of(mu)
    for label in v.coeffs:
        if label != mu:
            raise MalformedInput(
                f"vector has component {label!r}; expected a multiple of {mu!r} "
                f"(degree {mu_deg})")
    return v.get(mu)


@dataclass
class PDStructure:
    """Minimal structure + Poincare duality pairing data (conditions 1-4).

    duals[i][u] is the vector y in degree N-i with b_2(s y, s x^i_u) = s mu,
    aligned with the basis order of degree i.
    """
    structure: AInfStructure
    mu: str
    top: int
    connectivity: int
    duals: dict[int, list[Vector]] = field(default_factory=dict)

    @property
    def unit(self) -> Optional[str]:
        return self.structure.unit


def compute_dual_bases(structure: AInfStructure, mu: str) -> dict[int, list[Vector]]:
    """Dual bases from the b_2 pairing; raises MalformedInput when the pairing
    is not square or not invertible in some degree (condition 3 failure)."""
    from .graded import rref, solve_rref

    space = structure.space
    N = space.degree_of(mu)
    b2 = structure.b_op(2)
    duals: dict[int, list[Vector]] = {}
    for i in space.degrees():
        basis_i = space.basis(i)
        basis_d = space.basis(N - i)
        if len(basis_i) != len(basis_d):
            raise MalformedInput(
                f"duality pairing not square in degree {i}: "
                f"{len(basis_i)} vs {len(basis_d)}")
        n = len(basis_i)
        if n == 0:
            continue
        M = [[star_coefficient(space, mu, b2.get((z, x))) for x in basis_i]
             for z in basis_d]
        dual_vecs = []
        for v in range(n):
            rows = [[M[w][u] for w in range(n)] for u in range(n)]
            rhs = [ONE if u == v else ZERO for u in range(n)]
            sol = solve_rref(rows, rhs)
            if sol is None:
                raise MalformedInput(f"duality pairing singular in degree {i}")
            dual_vecs.append(Vector({basis_d[w]: c for w, c in enumerate(sol) if c}))
        duals[i] = dual_vecs
    return duals


def make_pd_structure(structure: AInfStructure, mu: str, connectivity: int,
                      duals: Optional[dict[int, list[Vector]]] = None) -> PDStructure:
    N = structure.space.degree_of(mu)
    if duals is None:
        duals = compute_dual_bases(structure, mu)
    return PDStructure(structure=structure, mu=mu, top=N,
                       connectivity=connectivity, duals=duals)


def check_pd_cyclic(pd: PDStructure, up_to: int) -> Report:
    """Verify the four duality/cyclicity conditions plus sigma^p = 1."""
    A = pd.structure
    space = A.space
    N = pd.top
    rep = Report(f"cyclic Poincare duality conditions up to arity {up_to}")

    bad_deg = [d for d in space.degrees() if (d < 0 or d > N) and space.dim(d)]
    rep.add("condition1_degree_window", not bad_deg,
            witness=str(bad_deg[0]) if bad_deg else None)

    rep.add("condition2_one_dim_ends",
            space.dim(0) == 1 and space.dim(N) == 1,
            detail=f"dim H^0 = {space.dim(0)}, dim H^{N} = {space.dim(N)}")

    ss = A.suspended_space()
    b2 = A.b_op(2)
    try:
        duals = pd.duals or compute_dual_bases(A, pd.mu)
        first = None
        count = 0
        for i, dvecs in duals.items():
            basis_i = space.basis(i)
            for v, y in enumerate(dvecs):
                for u, x in enumerate(basis_i):
                    val = b2.eval_vectors([y, Vector.basis(x)])
                    want = Vector.basis(pd.mu) if u == v else Vector.zero()
                    if val != want:
                        count += 1
                        first = first or (i, u, v)
        rep.add("condition3_dual_basis", count == 0,
                witness=str(first) if first else None, failures=count)
    except MalformedInput as exc:
        rep.add("condition3_dual_basis", False, detail=str(exc))

    first = None
    count = 0
    for p in range(2, up_to + 1):
        bp = A.b_op(p)
        seeds = set(bp.table)
        if p == 2:
            seeds |= {(x, y) for x in space.labels() for y in space.labels()}
        for key in sorted(seeds, key=space.tuple_key):
            k = key
            sgn = 1
            total = Vector.zero()
            for j in range(p):
                val = bp.get(k)
                if val:
                    total = total + val.scale(sgn)
                s, k = sigma_permute(ss, k)
                sgn *= s
            if (k, sgn) != (key, 1) or total:
                count += 1
                first = first or key
    rep.add("condition4_cyclic_sums_and_sigma_order", count == 0,
            witness=str(first) if first else None, failures=count)
    return rep
