"""Symplectic operator calculus and the filtered two-row A-infinity structure.

Models are Chevalley-Eilenberg complexes: exterior algebras on degree-one
generators e_1 .. e_2n with constant structure coefficients and a closed
nondegenerate omega.  On such a model the sl_2 triple acts:

    L = omega ^ - ,   Lam = 1/2 (Omega^{-1})^{ij} i_i i_j ,   H = (n - k) id,

and every form decomposes uniquely as a sum of L^j beta with beta primitive
(Lam beta = 0).  The reverse star, L^{-l} and the filtration projection Pi^l
act componentwise on that decomposition.

The level-l filtered complex is the two-row object

    0 -> F^l O^0_+ -> ... -> F^l O^{n+l}_+ -> F^l O^{n+l}_- -> ... -> F^l O^0_- -> 0

with d_+ = Pi^l d on the plus row, the turn map -del_+ del_-, and -d_- =
- *r d *r on the minus row.  Total degrees: a plus-row form of degree k sits
in total degree k; a minus-row form of degree k sits in 2(n+l)+1-k.  This is
the unique grading that makes every structure map degree-correct and matches
the theta-extension (top degree 2n+2l+1).

The products: for plus-row forms a_1, a_2 of degrees k_1, k_2,

  m_2 = Pi^l(a_1^a_2) + Pi^l *r(-d L^{-(l+1)}(a_1^a_2)
          + (L^{-(l+1)}a_1)^a_2 + (-1)^{k_1} a_1^(L^{-(l+1)}a_2)),

(one of the two groups always vanishes; both are computed and the arithmetic
does the vanishing); mixed rows use the star twists, minus-minus is zero, and

  m_3 = Pi^l *r( a_1 ^ L^{-(l+1)}(a_2^a_3) - L^{-(l+1)}(a_1^a_2) ^ a_3 )

on plus-row triples with k_1+k_2+k_3 >= n+l+2, all other cases zero, with
m_p = 0 for p >= 4.  The Stasheff checker is run over the full basis; a
failure is reported as a finding, never patched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .ainf import AInfStructure, check_stasheff, linear_as_multilinear
from .dga import Dga, make_free_graded_commutative_dga
from .graded import (ONE, ZERO, AlgebraError, GradedLinearMap, GradedSpace,
                     MalformedInput, MultiLinearMap, Vector, compute_splitting,
                     rref, solve_rref)
from .report import Report
from .transfer import strictly_unital_transfer

PLUS = "+|"
MINUS = "-|"


@dataclass
class SymplecticModel:
    dga: Dga
    generators: list[str]
    n: int
    omega: Vector

    def monomial_factors(self, label: str) -> list[str]:
        return [] if label == "1" else label.split("*")


def build_symplectic_model(generators: list[tuple[str, int]], d_terms: dict,
                           omega_terms: list) -> SymplecticModel:
    """CE model with verified symplectic data.  omega_terms uses the same
    term format as the differential: (coefficient, [gen, gen])."""
    if any(deg != 1 for _, deg in generators):
        raise MalformedInput("symplectic models need all generators in degree 1")
    if len(generators) % 2 or not generators:
        raise MalformedInput("need an even number 2n of generators")
    n = len(generators) // 2
    dga = make_free_graded_commutative_dga(generators, d_terms)
    omega = Vector.zero()
    for coeff, gens_list in omega_terms:
        term = Vector.basis("1", coeff)
        for g in gens_list:
            term = dga.mul(term, Vector.basis(g))
        omega = omega + term
    if dga.space.degree_of_vector(omega) != 2:
        raise MalformedInput("omega must be homogeneous of degree 2")
    if not dga.d.apply(omega).is_zero():
        raise MalformedInput("omega is not closed")
    model = SymplecticModel(dga=dga, generators=[g for g, _ in generators],
                            n=n, omega=omega)
    if _omega_matrix_inverse(model) is None:
        raise MalformedInput("omega is degenerate")
    if dga.power(omega, n).is_zero():
        raise MalformedInput("omega^n = 0; omega is degenerate")
    return model


def _omega_matrix_inverse(model: SymplecticModel):
    gens = model.generators
    idx = {g: i for i, g in enumerate(gens)}
    m = len(gens)
    Om = [[ZERO] * m for _ in range(m)]
    for label, c in model.omega.items():
        f = model.monomial_factors(label)
        i, j = idx[f[0]], idx[f[1]]
        Om[i][j] = c
        Om[j][i] = -c
    inv = []
    for col in range(m):
        rhs = [ONE if r == col else ZERO for r in range(m)]
        sol = solve_rref(Om, rhs)
        if sol is None:
            return None
        inv.append(sol)
    # inv[col][row] holds (Omega^{-1})[row][col]
    return [[inv[c][r] for c in range(m)] for r in range(m)]


def _interior(model: SymplecticModel, gen: str, label: str) -> Vector:
    """Contraction with the vector dual to `gen` on a basis monomial."""
    factors = model.monomial_factors(label)
    out = Vector.zero()
    for pos, f in enumerate(factors):
        if f == gen:
            rest = factors[:pos] + factors[pos + 1:]
            rest_label = "*".join(rest) if rest else "1"
            out = out + Vector.basis(rest_label, -1 if pos % 2 else 1)
    return out


@dataclass
class LefschetzContext:
    """sl_2 operators with the cached primitive decomposition per degree."""
    model: SymplecticModel
    L: GradedLinearMap
    Lam: GradedLinearMap
    H: GradedLinearMap
    primitive_bases: dict[int, list[Vector]] = field(default_factory=dict)
    # per degree: ordered components (j, s, index into P^s basis)
    components: dict[int, list[tuple[int, int, int]]] = field(default_factory=dict)
    _solvers: dict[int, list[list[Fraction]]] = field(default_factory=dict)
    del_plus: GradedLinearMap = None
    del_minus: GradedLinearMap = None


def build_lefschetz_context(model: SymplecticModel, validate: bool = True) -> LefschetzContext:
    dga = model.dga
    space = dga.space
    n = model.n

    L = GradedLinearMap(space, space, 2)
    for l in space.labels():
        img = dga.mul(model.omega, Vector.basis(l))
        if img:
            L.set_column(l, img)

    inv = _omega_matrix_inverse(model)
    Lam = GradedLinearMap(space, space, -2)
    gens = model.generators
    for l in space.labels():
        acc = Vector.zero()
        for i, gi in enumerate(gens):
            for j, gj in enumerate(gens):
                w = inv[i][j]
                if not w:
                    continue
                inner = _interior(model, gj, l)
                for lbl2, c2 in list(inner.items()):
                    acc = acc + _interior(model, gi, lbl2).scale(w * c2 / 2)
        if acc:
            Lam.set_column(l, acc)

    Hop = GradedLinearMap(space, space, 0)
    for l in space.labels():
        k = space.degree_of(l)
        if n - k:
            Hop.set_column(l, Vector.basis(l, n - k))

    ctx = LefschetzContext(model=model, L=L, Lam=Lam, H=Hop)

    if validate:
        for l in space.labels():
            x = Vector.basis(l)
            if Hop.apply(Lam.apply(x)) - Lam.apply(Hop.apply(x)) != Lam.apply(x).scale(2):
                raise AlgebraError(f"[H, Lam] != 2 Lam at {l!r}")
            if Hop.apply(L.apply(x)) - L.apply(Hop.apply(x)) != L.apply(x).scale(-2):
                raise AlgebraError(f"[H, L] != -2 L at {l!r}")
            if Lam.apply(L.apply(x)) - L.apply(Lam.apply(x)) != Hop.apply(x):
                raise AlgebraError(f"[Lam, L] != H at {l!r}")

    # primitive bases: kernel of Lam per degree (P^s = 0 for s > n)
    for s in space.degrees():
        basis = space.basis(s)
        tgt = space.basis(s - 2)
        tidx = {l: i for i, l in enumerate(tgt)}
        rows = [[ZERO] * len(basis) for _ in tgt]
        for j, l in enumerate(basis):
            for ol, c in Lam.apply_label(l).items():
                rows[tidx[ol]][j] = c
        from .graded import kernel_basis
        kb = kernel_basis(rows, len(basis))
        red, _ = rref(kb) if kb else ([], [])
        vecs = [Vector({b: c for b, c in zip(basis, row) if c}) for row in red]
        if s > n and vecs:
            raise AlgebraError(f"nonzero primitive forms in degree {s} > n")
        ctx.primitive_bases[s] = vecs

    # decomposition solver per degree: columns L^j beta
    for k in space.degrees():
        basis = space.basis(k)
        comps = []
        cols = []
        for j in range((k // 2) + 1):
            s = k - 2 * j
            if s < 0 or j + s > n:
                continue
            for idx, beta in enumerate(ctx.primitive_bases.get(s, [])):
                v = beta
                for _ in range(j):
                    v = L.apply(v)
                comps.append((j, s, idx))
                cols.append([v.get(l) for l in basis])
        if len(comps) != len(basis):
            raise AlgebraError(
                f"Lefschetz decomposition dimension mismatch in degree {k}: "
                f"{len(comps)} components for dim {len(basis)}")
        ctx.components[k] = comps
        ctx._solvers[k] = [[cols[j2][i] for j2 in range(len(cols))]
                           for i in range(len(basis))]

    ctx.del_plus, ctx.del_minus = _build_del_pm(ctx)
    if validate:
        _validate_del_pm(ctx)
    return ctx


def lefschetz_decompose(ctx: LefschetzContext, alpha: Vector) -> list[tuple[int, Vector]]:
    """[(j, beta_j)] with alpha = sum L^j beta_j and each beta_j primitive."""
    if alpha.is_zero():
        return []
    space = ctx.model.dga.space
    k = space.degree_of_vector(alpha)
    basis = space.basis(k)
    sol = solve_rref(ctx._solvers[k], [alpha.get(l) for l in basis])
    if sol is None:
        raise AlgebraError("decomposition solver failed (not spanning)")
    by_j: dict[int, Vector] = {}
    for (j, s, idx), c in zip(ctx.components[k], sol):
        if c:
            by_j[j] = by_j.get(j, Vector.zero()) + ctx.primitive_bases[s][idx].scale(c)
    out = sorted(by_j.items())
    # reassembly check keeps the cache honest
    acc = Vector.zero()
    for j, beta in out:
        v = beta
        for _ in range(j):
            v = ctx.L.apply(v)
        acc = acc + v
    if acc != alpha:
        raise AlgebraError("Lefschetz reassembly failed")
    return out


def _componentwise(ctx, alpha: Vector, fn) -> Vector:
    """Apply fn(j, beta) -> Vector summed over the decomposition of each
    homogeneous part of alpha."""
    space = ctx.model.dga.space
    parts: dict[int, Vector] = {}
    for l, c in alpha.items():
        k = space.degree_of(l)
        parts[k] = parts.get(k, Vector.zero()) + Vector.basis(l, c)
    out = Vector.zero()
    for k, part in sorted(parts.items()):
        for j, beta in lefschetz_decompose(ctx, part):
            out = out + fn(j, beta)
    return out


def _L_power(ctx, v: Vector, j: int) -> Vector:
    for _ in range(j):
        v = ctx.L.apply(v)
    return v


def apply_operator(ctx: LefschetzContext, which: str, alpha: Vector,
                   level: int = 0) -> Vector:
    """which in {'L', 'Lam', 'H', 'Linv', 'star', 'Pi'}; `level` is the l of
    L^{-l} / Pi^l."""
    n = ctx.model.n
    if which == "L":
        return ctx.L.apply(alpha)
    if which == "Lam":
        return ctx.Lam.apply(alpha)
    if which == "H":
        return ctx.H.apply(alpha)
    if level < 0:
        raise MalformedInput("level must be >= 0")
    if which == "Linv":
        return _componentwise(ctx, alpha,
                              lambda j, b: _L_power(ctx, b, j - level)
                              if j >= level else Vector.zero())
    if which == "star":
        def star(j, b):
            s = ctx.model.dga.space.degree_of_vector(b)
            return _L_power(ctx, b, n - j - s)
        return _componentwise(ctx, alpha, star)
    if which == "Pi":
        return _componentwise(ctx, alpha,
                              lambda j, b: _L_power(ctx, b, j)
                              if j <= level else Vector.zero())
    raise MalformedInput(f"unknown operator {which!r}")


def _build_del_pm(ctx: LefschetzContext):
    """d = del_+ + L del_- : for primitive beta, d beta = beta0 + L beta1 with
    no higher Lefschetz components (checked), extended over L^j beta."""
    space = ctx.model.dga.space
    d = ctx.model.dga.d
    dp = GradedLinearMap(space, space, 1)
    dm = GradedLinearMap(space, space, -1)
    for l in space.labels():
        x = Vector.basis(l)

        def plus_part(j, beta):
            dec = lefschetz_decompose(ctx, d.apply(beta))
            for jj, _ in dec:
                if jj > 1:
                    raise AlgebraError(
                        f"d of a primitive form has an L^{jj} component at {l!r}")
            b0 = next((b for jj, b in dec if jj == 0), Vector.zero())
            return _L_power(ctx, b0, j)

        def minus_part(j, beta):
            dec = lefschetz_decompose(ctx, d.apply(beta))
            b1 = next((b for jj, b in dec if jj == 1), Vector.zero())
            return _L_power(ctx, b1, j)

        vp = _componentwise(ctx, x, plus_part)
        vm = _componentwise(ctx, x, minus_part)
        if vp:
            dp.set_column(l, vp)
        if vm:
            dm.set_column(l, vm)
    return dp, dm


def _validate_del_pm(ctx: LefschetzContext):
    space = ctx.model.dga.space
    d = ctx.model.dga.d
    for l in space.labels():
        x = Vector.basis(l)
        if ctx.del_plus.apply(x) + ctx.L.apply(ctx.del_minus.apply(x)) != d.apply(x):
            raise AlgebraError(f"d != del_+ + L del_- at {l!r}")
        if ctx.del_plus.apply(ctx.del_plus.apply(x)):
            raise AlgebraError(f"del_+^2 != 0 at {l!r}")
        if ctx.del_minus.apply(ctx.del_minus.apply(x)):
            raise AlgebraError(f"del_-^2 != 0 at {l!r}")
        lhs = ctx.L.apply(ctx.del_plus.apply(ctx.del_minus.apply(x)))
        rhs = ctx.L.apply(ctx.del_minus.apply(ctx.del_plus.apply(x)))
        if lhs != rhs.scale(-1):
            raise AlgebraError(f"L del_+ del_- != -L del_- del_+ at {l!r}")


# ---------------------------------------------------------------------------
# The filtered two-row complex.
# ---------------------------------------------------------------------------

@dataclass
class FilteredComplex:
    model: SymplecticModel
    ctx: LefschetzContext
    level: int
    turn: int                      # n + l, the form degree of the row turn
    space: GradedSpace = None
    m1: GradedLinearMap = None
    # per (row, form degree): list of basis form vectors
    row_bases: dict[tuple[str, int], list[Vector]] = field(default_factory=dict)

    def total_degree(self, row: str, k: int) -> int:
        return k if row == PLUS else 2 * self.turn + 1 - k

    def label(self, row: str, v: Vector) -> str:
        return row + self.model.dga.space.format_vector(v)

    def realize(self, label: str) -> tuple[str, Vector]:
        """(row, underlying form) of a complex basis vector, by index."""
        return self._realize[label]

    def embed(self, row: str, v: Vector) -> Vector:
        """Express an l-filtered form as a complex vector in the given row."""
        if v.is_zero():
            return Vector.zero()
        space = self.model.dga.space
        out = Vector.zero()
        parts: dict[int, Vector] = {}
        for l, c in v.items():
            k = space.degree_of(l)
            parts[k] = parts.get(k, Vector.zero()) + Vector.basis(l, c)
        for k, part in sorted(parts.items()):
            basis = self.row_bases.get((row, k))
            if basis is None:
                raise AlgebraError(f"no {row} row in form degree {k}")
            rows = [[bv.get(lbl) for bv in basis] for lbl in space.basis(k)]
            sol = solve_rref(rows, [part.get(lbl) for lbl in space.basis(k)])
            if sol is None:
                raise AlgebraError(f"form is not {self.level}-filtered in degree {k}")
            for bv, c in zip(basis, sol):
                if c:
                    out = out + Vector.basis(self.label(row, bv), c)
        return out


def build_filtered_complex(model: SymplecticModel, level: int,
                           ctx: Optional[LefschetzContext] = None,
                           validate: bool = True) -> FilteredComplex:
    n = model.n
    if not 0 <= level <= n:
        raise MalformedInput(f"level must lie in [0, {n}]")
    ctx = ctx or build_lefschetz_context(model, validate=validate)
    turn = n + level
    fc = FilteredComplex(model=model, ctx=ctx, level=level, turn=turn)

    # filtered bases per form degree: L^j beta with j <= level
    for k in range(turn + 1):
        vecs = []
        for (j, s, idx) in ctx.components.get(k, []):
            if j <= level:
                vecs.append(_L_power(ctx, ctx.primitive_bases[s][idx], j))
        fc.row_bases[(PLUS, k)] = vecs
        fc.row_bases[(MINUS, k)] = vecs

    labeled = []
    realize = {}
    for t in range(2 * turn + 2):
        row = PLUS if t <= turn else MINUS
        k = t if t <= turn else 2 * turn + 1 - t
        for v in fc.row_bases.get((row, k), []):
            lbl = fc.label(row, v)
            labeled.append((lbl, t))
            realize[lbl] = (row, v)
    fc.space = GradedSpace(labeled)
    fc._realize = realize

    d = model.dga.d
    m1 = GradedLinearMap(fc.space, fc.space, 1)
    for lbl, (row, v) in realize.items():
        k = model.dga.space.degree_of_vector(v)
        if row == PLUS and k < turn:
            img = apply_operator(ctx, "Pi", d.apply(v), level)
            if img:
                m1.set_column(lbl, fc.embed(PLUS, img))
        elif row == PLUS:
            img = ctx.del_plus.apply(ctx.del_minus.apply(v)).scale(-1)
            if img:
                m1.set_column(lbl, fc.embed(MINUS, img))
        else:
            img = apply_operator(ctx, "star",
                                 d.apply(apply_operator(ctx, "star", v)))
            if img:
                m1.set_column(lbl, fc.embed(MINUS, img).scale(-1))
    fc.m1 = m1

    if validate:
        rep = check_filtered_complex(fc)
        if not rep.ok:
            raise AlgebraError("filtered complex failed verification:\n" + rep.summary())
    return fc


def check_filtered_complex(fc: FilteredComplex) -> Report:
    rep = Report(f"filtered complex, level {fc.level}")
    bad = [l for l in fc.space.labels()
           if not fc.m1.apply(fc.m1.apply_label(l)).is_zero()]
    rep.add("m1_squared_zero", not bad, witness=bad[0] if bad else None,
            failures=len(bad))
    ctx, model, level = fc.ctx, fc.model, fc.level
    d = model.dga.d
    ok_dpp = True
    ok_dmm = True
    w1 = w2 = None
    # (del+ del-) d_+ = 0 and d_- (del+ del-) = 0 at the turn
    for v in fc.row_bases.get((PLUS, fc.turn - 1), []):
        dp = apply_operator(ctx, "Pi", d.apply(v), level)
        if ctx.del_plus.apply(ctx.del_minus.apply(dp)):
            ok_dpp = False
            w1 = w1 or fc.label(PLUS, v)
    for v in fc.row_bases.get((PLUS, fc.turn), []):
        img = ctx.del_plus.apply(ctx.del_minus.apply(v))
        dm = apply_operator(ctx, "star", d.apply(apply_operator(ctx, "star", img)))
        if dm:
            ok_dmm = False
            w2 = w2 or fc.label(PLUS, v)
    rep.add("turn_after_dplus_zero", ok_dpp, witness=w1)
    rep.add("dminus_after_turn_zero", ok_dmm, witness=w2)
    return rep


# ---------------------------------------------------------------------------
# The A-infinity structure on the filtered complex.
# ---------------------------------------------------------------------------

@dataclass
class TTYStructure:
    complex: FilteredComplex
    structure: AInfStructure
    report: Report


def build_tty_structure(fc: FilteredComplex, p_max: int = 6,
                        check_up_to: int = 5) -> TTYStructure:
    ctx, model, level = fc.ctx, fc.model, fc.level
    dga = model.dga
    space = fc.space
    l1 = level + 1

    def linv1(v):
        return apply_operator(ctx, "Linv", v, l1)

    def star(v):
        return apply_operator(ctx, "star", v)

    def pi(v):
        return apply_operator(ctx, "Pi", v, level)

    m2 = MultiLinearMap(space, space, 2, 0)
    for la in space.labels():
        row_a, va = fc.realize(la)
        ka = dga.space.degree_of_vector(va)
        sa = -1 if ka % 2 else 1
        for lb in space.labels():
            row_b, vb = fc.realize(lb)
            if row_a == PLUS and row_b == PLUS:
                wedge = dga.mul(va, vb)
                first = pi(wedge)
                second = pi(star(
                    dga.d.apply(linv1(wedge)).scale(-1)
                    + dga.mul(linv1(dga.d.apply(va)), vb)
                    + dga.mul(va, linv1(dga.d.apply(vb))).scale(sa)))
                if first and second:
                    raise AlgebraError(
                        f"both m2 groups nonzero at ({la!r}, {lb!r})")
                val = Vector.zero()
                if first:
                    val = fc.embed(PLUS, first)
                if second:
                    val = val + fc.embed(MINUS, second)
            elif row_a == PLUS and row_b == MINUS:
                out = star(dga.mul(va, star(vb))).scale(sa)
                val = fc.embed(MINUS, out) if out else Vector.zero()
            elif row_a == MINUS and row_b == PLUS:
                out = star(dga.mul(star(va), vb))
                val = fc.embed(MINUS, out) if out else Vector.zero()
            else:
                val = Vector.zero()
            if val:
                m2.set((la, lb), val)

    m3 = MultiLinearMap(space, space, 3, -1)
    plus_labels = [l for l in space.labels() if fc.realize(l)[0] == PLUS]
    for la in plus_labels:
        _, va = fc.realize(la)
        ka = dga.space.degree_of_vector(va)
        for lb in plus_labels:
            _, vb = fc.realize(lb)
            kb = dga.space.degree_of_vector(vb)
            ab = dga.mul(va, vb)
            for lc in plus_labels:
                _, vc = fc.realize(lc)
                kc = dga.space.degree_of_vector(vc)
                if ka + kb + kc < model.n + level + 2:
                    continue
                out = pi(star(dga.mul(va, linv1(dga.mul(vb, vc)))
                              - dga.mul(linv1(ab), vc)))
                if out:
                    m3.set((la, lb, lc), fc.embed(MINUS, out))

    ops = {2: m2}
    if not fc.m1.is_zero():
        ops[1] = linear_as_multilinear(fc.m1)
    if not m3.is_zero():
        ops[3] = m3
    struct = AInfStructure(space=space, ops=ops, p_max=p_max, unit=PLUS + "1")

    rep = Report(f"TTY structure, level {level}")
    first = None
    count = 0
    for la in space.labels():
        da = space.degree_of(la)
        for lb in space.labels():
            db = space.degree_of(lb)
            sign = -1 if (da * db) % 2 else 1
            if m2.get((la, lb)) != m2.get((lb, la)).scale(sign):
                count += 1
                first = first or (la, lb)
    rep.add("m2_graded_commutative", count == 0,
            witness=str(first) if first else None, failures=count)
    rep.merge(check_stasheff(struct, check_up_to))
    return TTYStructure(complex=fc, structure=struct, report=rep)


# ---------------------------------------------------------------------------
# Comparison with the theta-extension (desk-scale evidence for the
# quasi-isomorphism, which itself is out of scope).
# ---------------------------------------------------------------------------

def _m2_rank_table(structure: AInfStructure) -> dict[tuple[int, int], int]:
    """Rank of m_2 : H^i (x) H^j -> H^{i+j} per degree pair (iso-invariant)."""
    space = structure.space
    m2 = structure.op(2)
    out = {}
    for i in space.degrees():
        for j in space.degrees():
            tgt = space.basis(i + j)
            if not tgt or not space.dim(i) or not space.dim(j):
                continue
            rows = []
            for x in space.basis(i):
                for y in space.basis(j):
                    v = m2.get((x, y))
                    if v:
                        rows.append([v.get(t) for t in tgt])
            rank = len(rref(rows)[1]) if rows else 0
            if rank:
                out[(i, j)] = rank
    return out


def _massey_essential_degrees(structure: AInfStructure) -> set:
    """Degree triples carrying a basis triple with pairwise-vanishing m_2 and
    m_3 value outside its indeterminacy [x] H + H [z].  Unlike the raw m_3
    support this survives the transfer gauge."""
    space = structure.space
    m2 = structure.op(2)
    m3 = structure.op(3)
    out = set()
    for key, v in m3.table.items():
        x, y, z = key
        if m2.get((x, y)) or m2.get((y, z)):
            continue
        dx, dy, dz = (space.degree_of(l) for l in key)
        if (dx, dy, dz) in out:
            continue
        indet = [m2.get((u, z)) for u in space.basis(dx + dy - 1)]
        indet += [m2.get((x, w)) for w in space.basis(dy + dz - 1)]
        indet = [w for w in indet if w]
        labels = sorted({l for w in indet for l in w.coeffs} | set(v.coeffs))
        rows = [[w.get(l) for w in indet] for l in labels]
        rhs = [v.get(l) for l in labels]
        if not indet or solve_rref(rows, rhs) is None:
            out.add((dx, dy, dz))
    return out


def compare_with_extension(model: SymplecticModel, level: int,
                           p_max: int = 4,
                           tty: Optional[TTYStructure] = None) -> tuple[Report, dict]:
    """Per-degree cohomology comparison of the level-l filtered complex with
    the extension by theta (d theta = omega^{l+1}), plus iso-invariant
    minimal-model evidence: m_2 rank tables and m_3 support degrees."""
    from .extension import extend_dga

    rep = Report(f"filtered complex vs theta extension, level {level}")
    fc = tty.complex if tty is not None else build_filtered_complex(model, level)
    tty = tty or build_tty_structure(fc)
    s_tty = compute_splitting(fc.space, fc.m1)
    betti_tty = s_tty.betti()

    omega_pow = model.dga.power(model.omega, level + 1)
    ext = extend_dga(model.dga, omega_pow, 2 * level + 1)
    s_ext = compute_splitting(ext.dga.space, ext.dga.d)
    betti_ext = s_ext.betti()

    degrees = sorted(set(betti_tty) | set(betti_ext))
    first = None
    count = 0
    for k in degrees:
        if betti_tty.get(k, 0) != betti_ext.get(k, 0):
            count += 1
            first = first if first is not None else k
    rep.add("cohomology_dims_equal_per_degree", count == 0,
            witness=str(first) if first is not None else None, failures=count,
            detail=f"tty={betti_tty} extension={betti_ext}")

    T_tty = strictly_unital_transfer(tty.structure, p_max=p_max)
    T_ext = strictly_unital_transfer(ext.dga, p_max=p_max)
    ranks_tty = _m2_rank_table(T_tty.structure)
    ranks_ext = _m2_rank_table(T_ext.structure)
    rep.add("m2_rank_tables_equal", ranks_tty == ranks_ext,
            detail=f"tty={sorted(ranks_tty.items())} "
                   f"extension={sorted(ranks_ext.items())}")
    sup_tty = _massey_essential_degrees(T_tty.structure)
    sup_ext = _massey_essential_degrees(T_ext.structure)
    rep.add("massey_essential_degrees_equal", sup_tty == sup_ext,
            detail=f"tty={sorted(sup_tty)} extension={sorted(sup_ext)}")

    data = {
        "betti_tty": betti_tty,
        "betti_extension": betti_ext,
        "m2_ranks_tty": ranks_tty,
        "m2_ranks_extension": ranks_ext,
        "m3_essential_tty": sorted(sup_tty),
        "m3_essential_extension": sorted(sup_ext),
    }
    return rep, data


def kodaira_thurston_symplectic() -> SymplecticModel:
    """The standard symplectic structure on the Kodaira-Thurston model."""
    return build_symplectic_model(
        [("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)],
        {"e4": [(1, ["e1", "e2"])]},
        [(1, ["e1", "e3"]), (1, ["e2", "e4"])])


def torus_symplectic(n: int) -> SymplecticModel:
    return build_symplectic_model(
        [(f"e{i}", 1) for i in range(1, 2 * n + 1)], {},
        [(1, [f"e{2*j-1}", f"e{2*j}"]) for j in range(1, n + 1)])
