"""Extensions A~ = A (+) theta A with d theta = omega, and their minimal models.

For a closed even element omega of a dga A, the extension carries the product
rules  xi ^ theta eta = (-1)^{|xi|} theta (xi ^ eta),  theta xi ^ eta =
theta (xi ^ eta),  theta xi ^ theta eta = 0,  and the differential
d (xi + theta eta) = d xi + omega ^ eta - theta (d eta).

When d_A = 0 the cohomology of the extension is (A / I(omega)) (+) ker L with
L = omega ^ - , and the explicit minimal model has only m_2 and m_3:
representatives live in a coordinate complement of the ideal I(omega) plus
theta (ker L); f_2 = Q(f_1 m_2 - f_1 ^ f_1) takes values in theta A, where Q
solves omega ^ beta = alpha with beta in a coordinate complement of ker L.
m_3 is the class of the arity-3 obstruction, and every higher operation
vanishes (verified through the generic identity checkers, not assumed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .ainf import (AInfMorphism, AInfStructure, check_morphism, check_stasheff,
                   dga_to_ainf)
from .dga import Dga
from .graded import (ZERO, AlgebraError, GradedLinearMap, GradedSpace,
                     InvalidWitness, MalformedInput, MultiLinearMap, NotExact,
                     Vector, compute_splitting, rref, solve_rref)
from .report import Report
from .transfer import DEFAULT_P_MAX, compute_F_p, vanishing_profile

THETA_PREFIX = "theta*"


@dataclass
class ExtensionDga:
    """A (+) theta A as a dga; theta-part labels are 'theta*<base label>'."""
    base: Dga
    omega: Vector
    theta_degree: int
    dga: Dga

    def embed_base(self, v: Vector) -> Vector:
        return Vector(dict(v.coeffs))

    def embed_theta(self, v: Vector) -> Vector:
        return Vector({THETA_PREFIX + l: c for l, c in v.items()})

    def split(self, v: Vector) -> tuple[Vector, Vector]:
        """v = xi + theta eta with xi, eta in the base algebra."""
        xi, eta = {}, {}
        for l, c in v.items():
            if l.startswith(THETA_PREFIX):
                eta[l[len(THETA_PREFIX):]] = c
            else:
                xi[l] = c
        return Vector(xi), Vector(eta)


def extend_dga(A: Dga, omega: Vector, theta_degree: Optional[int] = None) -> ExtensionDga:
    """Build the extension; omega must be closed, homogeneous of even degree
    >= 2, and theta_degree (when given) must equal |omega| - 1."""
    A.space.check_vector(omega)
    omega_deg = A.space.degree_of_vector(omega)
    if omega_deg is None:
        # omega = 0 is allowed; pick the degree from the declared theta degree
        if theta_degree is None:
            raise MalformedInput("omega = 0 needs an explicit theta degree")
        omega_deg = theta_degree + 1
    if omega_deg % 2 or omega_deg < 2:
        raise MalformedInput(f"omega must have even degree >= 2, got {omega_deg}")
    if theta_degree is None:
        theta_degree = omega_deg - 1
    if theta_degree != omega_deg - 1:
        raise MalformedInput(
            f"theta degree {theta_degree} != |omega| - 1 = {omega_deg - 1}")
    if not A.d.apply(omega).is_zero():
        raise MalformedInput("omega is not closed")
    for l in A.space.labels():
        if l.startswith(THETA_PREFIX):
            raise MalformedInput(f"base label {l!r} collides with the theta prefix")

    labels = [(l, A.space.degree_of(l)) for l in A.space.labels()]
    labels += [(THETA_PREFIX + l, d + theta_degree) for l, d in labels]
    space = GradedSpace(labels)

    ext = ExtensionDga(base=A, omega=omega, theta_degree=theta_degree, dga=None)

    d = GradedLinearMap(space, space, 1)
    for l in A.space.labels():
        col = A.d.apply_label(l)
        if col:
            d.set_column(l, ext.embed_base(col))
        tcol = ext.embed_base(A.mul(omega, Vector.basis(l))) - \
            ext.embed_theta(A.d.apply_label(l))
        if tcol:
            d.set_column(THETA_PREFIX + l, tcol)

    product = MultiLinearMap(space, space, 2, 0)
    for x in A.space.labels():
        xd = A.space.degree_of(x)
        sx = -1 if xd % 2 else 1
        for y in A.space.labels():
            xy = A.mul_labels(x, y)
            if xy:
                product.set((x, y), ext.embed_base(xy))
                product.set((x, THETA_PREFIX + y), ext.embed_theta(xy).scale(sx))
                product.set((THETA_PREFIX + x, y), ext.embed_theta(xy))

    ext.dga = Dga(space=space, d=d, product=product, unit=A.unit)
    for l in space.labels():
        if not d.apply(d.apply_label(l)).is_zero():
            raise AlgebraError(f"extension differential fails d^2 = 0 at {l!r}")
    return ext


def extension_morphism(f: GradedLinearMap, ext_A: ExtensionDga,
                       ext_B: ExtensionDga, r: Vector) -> tuple[GradedLinearMap, Report]:
    """Lift a dga-quasi-isomorphism f: A -> B with omega_B = f(omega_A) + d r
    to g: A~ -> B~, g(alpha + theta beta) = f(alpha) + (theta_B - r) f(beta).

    Verifies that f is a dga-homomorphism and a quasi-isomorphism (by rank),
    that the witness r reconciles the omegas, and that g is a
    quasi-isomorphism of the extensions.  Raises InvalidWitness / MalformedInput
    on contract violations; the report records the verified facts.
    """
    A, B = ext_A.base, ext_B.base
    rep = Report("extension of a quasi-isomorphism")

    if f.degree != 0:
        raise MalformedInput("f must have degree 0")
    for x in A.space.labels():
        if B.d.apply(f.apply_label(x)) != f.apply(A.d.apply_label(x)):
            raise MalformedInput(f"f is not a chain map at {x!r}")
    for x in A.space.labels():
        for y in A.space.labels():
            if f.apply(A.mul_labels(x, y)) != B.mul(f.apply_label(x), f.apply_label(y)):
                raise MalformedInput(f"f is not multiplicative at ({x!r}, {y!r})")
    rep.add("f_is_dga_homomorphism", True)

    sA = compute_splitting(A.space, A.d)
    sB = compute_splitting(B.space, B.d)
    if not _induced_iso(f, A.space, B.space, sA, sB):
        raise MalformedInput("f is not a quasi-isomorphism (rank check failed)")
    rep.add("f_is_quasi_isomorphism", True)

    if ext_B.omega - f.apply(ext_A.omega) != B.d.apply(r):
        raise InvalidWitness("omega_B != f(omega_A) + d r")
    rep.add("witness_reconciles_omegas", True)

    g = GradedLinearMap(ext_A.dga.space, ext_B.dga.space, 0)
    for l in A.space.labels():
        fl = f.apply_label(l)
        if fl:
            g.set_column(l, ext_B.embed_base(fl))
        tcol = ext_B.embed_theta(fl) - ext_B.embed_base(B.mul(r, fl))
        if tcol:
            g.set_column(THETA_PREFIX + l, tcol)

    ok_chain = all(ext_B.dga.d.apply(g.apply_label(l)) == g.apply(ext_A.dga.d.apply_label(l))
                   for l in ext_A.dga.space.labels())
    rep.add("g_chain_map", ok_chain)
    ok_mult = all(g.apply(ext_A.dga.mul_labels(x, y)) ==
                  ext_B.dga.mul(g.apply_label(x), g.apply_label(y))
                  for x in ext_A.dga.space.labels()
                  for y in ext_A.dga.space.labels())
    rep.add("g_multiplicative", ok_mult)

    sEA = compute_splitting(ext_A.dga.space, ext_A.dga.d)
    sEB = compute_splitting(ext_B.dga.space, ext_B.dga.d)
    rep.add("g_induces_cohomology_isomorphism",
            _induced_iso(g, ext_A.dga.space, ext_B.dga.space, sEA, sEB))
    return g, rep


def _induced_iso(f: GradedLinearMap, src: GradedSpace, tgt: GradedSpace,
                 s_src, s_tgt) -> bool:
    """Rank check: the induced map on cohomology is bijective per degree."""
    for k in sorted(set(list(s_src.C) + list(s_tgt.C))):
        cs = s_src.C.get(k, [])
        ct = s_tgt.C.get(k, [])
        if len(cs) != len(ct):
            return False
        if not cs:
            continue
        cols = []
        for v in cs:
            img = f.apply(v)
            if not s_tgt.d.apply(img).is_zero():
                return False
            coords = s_tgt.c_coordinates(img)
            cols.append([coords.get((k, i), ZERO) for i in range(len(ct))])
        rows = [[cols[j][i] for j in range(len(cs))] for i in range(len(ct))]
        if len(rref(rows)[1]) != len(ct):
            return False
    return True


# ---------------------------------------------------------------------------
# The explicit minimal model of an extension of a d = 0 algebra.
# ---------------------------------------------------------------------------

@dataclass
class FormalExtensionModel:
    """Minimal model (m_2, m_3 only) of A~ for d_A = 0, with (f_1, f_2)."""
    extension: ExtensionDga
    structure: AInfStructure
    morphism: AInfMorphism
    ideal_pivots: dict[int, list[int]] = field(default_factory=dict)
    report: Report = None

    def class_of(self, v: Vector) -> Vector:
        return self._class_of(v)


def formal_extension_minimal_model(A: Dga, omega: Vector,
                                   p_max: int = DEFAULT_P_MAX,
                                   theta_degree: Optional[int] = None,
                                   verify: bool = True) -> FormalExtensionModel:
    """Theorem-style construction of the minimal model of A~ when d_A = 0."""
    if not A.d.is_zero():
        raise MalformedInput("the explicit extension model needs d_A = 0")
    ext = extend_dga(A, omega, theta_degree)
    theta_deg = ext.theta_degree
    omega_deg = theta_deg + 1
    space = A.space

    # ideal I(omega) per degree: echelon rows + pivots; A^C = non-pivot labels
    ideal_rows: dict[int, list[list[Fraction]]] = {}
    ideal_pivots: dict[int, list[int]] = {}
    ac_labels: dict[int, list[str]] = {}
    for k in space.degrees():
        basis = space.basis(k)
        rows = []
        for b in space.basis(k - omega_deg):
            w = A.mul(omega, Vector.basis(b))
            if w:
                rows.append([w.get(l) for l in basis])
        red, piv = rref(rows) if rows else ([], [])
        ideal_rows[k] = red
        ideal_pivots[k] = piv
        pivset = set(piv)
        ac_labels[k] = [basis[i] for i in range(len(basis)) if i not in pivset]

    # ker L per degree (echelon basis) and the coordinate complement A^perp
    kerl_rows: dict[int, list[list[Fraction]]] = {}
    kerl_pivots: dict[int, list[int]] = {}
    perp_labels: dict[int, list[str]] = {}
    for k in space.degrees():
        basis = space.basis(k)
        tgt = space.basis(k + omega_deg)
        tidx = {l: i for i, l in enumerate(tgt)}
        rows = [[ZERO] * len(basis) for _ in tgt]
        for j, b in enumerate(basis):
            for ol, c in A.mul(omega, Vector.basis(b)).items():
                rows[tidx[ol]][j] = c
        from .graded import kernel_basis
        kb = kernel_basis(rows, len(basis))
        red, piv = rref(kb) if kb else ([], [])
        kerl_rows[k] = red
        kerl_pivots[k] = piv
        pivset = set(piv)
        perp_labels[k] = [basis[i] for i in range(len(basis)) if i not in pivset]

    # solver for Q: omega ^ beta = alpha with beta supported on A^perp
    _q_rows: dict[int, tuple[list[str], list[list[Fraction]]]] = {}

    def q_map(alpha: Vector) -> Vector:
        if alpha.is_zero():
            return Vector.zero()
        k = space.degree_of_vector(alpha)
        if k not in _q_rows:
            src = perp_labels.get(k - omega_deg, [])
            basis = space.basis(k)
            _q_rows[k] = (src, [[A.mul(omega, Vector.basis(b)).get(l) for b in src]
                                for l in basis])
        src, rows = _q_rows[k]
        sol = solve_rref(rows, [alpha.get(l) for l in space.basis(k)])
        if sol is None:
            raise NotExact("vector is not in the ideal of omega")
        beta = Vector({b: c for b, c in zip(src, sol) if c})
        return ext.embed_theta(beta)

    # cohomology basis: A^C labels plus theta(ker L) classes, degree by degree
    h_pairs: list[tuple[str, int, str, object]] = []   # (h_label, degree, kind, payload)
    ext_degrees = sorted({d for d in space.degrees()} |
                         {d + theta_deg for d in space.degrees()})
    for k in ext_degrees:
        for l in ac_labels.get(k, []):
            h_pairs.append((f"[{l}]", k, "base", l))
        for row in kerl_rows.get(k - theta_deg, []):
            v = Vector({b: c for b, c in
                        zip(space.basis(k - theta_deg), row) if c})
            tv = ext.embed_theta(v)
            h_pairs.append((f"[{ext.dga.space.format_vector(tv)}]", k, "theta", v))

    H = GradedSpace((lbl, k) for lbl, k, _, _ in h_pairs)
    f1 = MultiLinearMap(H, ext.dga.space, 1, 0)
    for lbl, k, kind, payload in h_pairs:
        if kind == "base":
            f1.set((lbl,), Vector.basis(payload))
        else:
            f1.set((lbl,), ext.embed_theta(payload))

    theta_class_index: dict[int, list[str]] = {}
    for lbl, k, kind, payload in h_pairs:
        if kind == "theta":
            theta_class_index.setdefault(k - theta_deg, []).append(lbl)

    def class_of(w: Vector) -> Vector:
        """Class of a closed extension vector in the H basis."""
        xi, eta = ext.split(w)
        out: dict[str, Fraction] = {}
        # theta part: coordinates in the echelon ker L basis (pivot reads)
        by_deg: dict[int, Vector] = {}
        for l, c in eta.items():
            d0 = space.degree_of(l)
            by_deg[d0] = by_deg.get(d0, Vector.zero()) + Vector.basis(l, c)
        for d0, part in by_deg.items():
            rows = kerl_rows.get(d0, [])
            piv = kerl_pivots.get(d0, [])
            basis = space.basis(d0)
            coords = [part.get(basis[pc]) for pc in piv]
            rebuilt = Vector.zero()
            for c, row in zip(coords, rows):
                if c:
                    rebuilt = rebuilt + Vector({b: c * x for b, x in zip(basis, row) if x})
            if rebuilt != part:
                raise NotExact("theta component is not in ker L (vector not closed)")
            for lbl, c in zip(theta_class_index.get(d0, []), coords):
                if c:
                    out[lbl] = out.get(lbl, ZERO) + c
        # base part: reduce modulo the ideal rows, read off A^C coefficients
        by_deg = {}
        for l, c in xi.items():
            d0 = space.degree_of(l)
            by_deg[d0] = by_deg.get(d0, Vector.zero()) + Vector.basis(l, c)
        for d0, part in by_deg.items():
            basis = space.basis(d0)
            vec = [part.get(l) for l in basis]
            for row, pc in zip(ideal_rows.get(d0, []), ideal_pivots.get(d0, [])):
                if vec[pc]:
                    fct = vec[pc]
                    vec = [a - fct * b for a, b in zip(vec, row)]
            for i, c in enumerate(vec):
                if c:
                    out_lbl = f"[{basis[i]}]"
                    out[out_lbl] = out.get(out_lbl, ZERO) + c
        return Vector(out)

    ext_ainf = dga_to_ainf(ext.dga, p_max)
    unit_label = f"[{A.unit}]" if A.unit is not None and H.has(f"[{A.unit}]") else None
    minimal = AInfStructure(space=H, ops={}, p_max=p_max, unit=unit_label)

    m2 = MultiLinearMap(H, H, 2, 0)
    f2 = MultiLinearMap(H, ext.dga.space, 2, -1)
    for x in H.labels():
        fx = f1.get((x,))
        for y in H.labels():
            prod = ext.dga.mul(fx, f1.get((y,)))
            cls = class_of(prod)
            if cls:
                m2.set((x, y), cls)
            resid = f1.eval_vectors([cls]) - prod
            if resid:
                xi, eta = ext.split(resid)
                if eta:
                    raise AlgebraError("f_2 argument leaves the base ideal")
                val = q_map(xi)
                if val:
                    f2.set((x, y), val)
    minimal.set_op(2, m2)

    f_maps = {1: f1, 2: f2}
    F3 = compute_F_p(f_maps, minimal, ext_ainf, 3)
    m3 = MultiLinearMap(H, H, 3, -1)
    for key in F3.sorted_keys():
        val = F3.table[key]
        xi, _ = ext.split(val)
        if xi:
            raise AlgebraError(f"F_3 value at {key} has a base component")
        if not ext.dga.d.apply(val).is_zero():
            raise AlgebraError(f"F_3 value at {key} is not closed")
        cls = class_of(val)
        if cls:
            m3.set(key, cls)
        if f1.eval_vectors([cls]) != val:
            raise AlgebraError(f"m_3 representative mismatch at {key}")
    minimal.set_op(3, m3)

    morphism = AInfMorphism(source=minimal, target=ext_ainf, maps=f_maps,
                            p_max=p_max)

    rep = Report("formal extension minimal model")
    if verify:
        for k in ext_degrees:
            want = len(ac_labels.get(k, [])) + len(kerl_rows.get(k - theta_deg, []))
            rep.add(f"h_dim_degree_{k}", H.dim(k) == want)
        bad = [key for key, v in f2.table.items()
               if ext.split(v)[0]]
        rep.add("im_f2_in_theta_A", not bad,
                witness=str(bad[0]) if bad else None)
        rep.merge(check_stasheff(minimal, p_max))
        rep.merge(check_morphism(morphism, p_max))
        if not rep.ok:
            raise AlgebraError("formal extension model failed verification:\n"
                               + rep.summary())

    model = FormalExtensionModel(extension=ext, structure=minimal,
                                 morphism=morphism, ideal_pivots=ideal_pivots,
                                 report=rep)
    model._class_of = class_of
    return model


# ---------------------------------------------------------------------------
# Worked witnesses.
# ---------------------------------------------------------------------------

@dataclass
class TorusWitness:
    n: int
    class_x: Vector          # [y e_1]
    class_e2: Vector         # [e_2]
    m2_value: Vector          # m_2([y e1], [e2]) -- expected zero
    m3_value: Vector
    expected_direction: Vector  # [theta y e_2]
    scalar: Optional[Fraction]
    nonzero: bool
    model: FormalExtensionModel

    def to_json(self) -> dict:
        H = self.model.structure.space
        return {
            "n": self.n,
            "class_ye1": H.format_vector(self.class_x),
            "class_e2": H.format_vector(self.class_e2),
            "m2_sanity_value": H.format_vector(self.m2_value),
            "m3_value": H.format_vector(self.m3_value),
            "expected_direction": H.format_vector(self.expected_direction),
            "scalar": str(self.scalar) if self.scalar is not None else None,
            "nonzero": self.nonzero,
        }


def torus_nonformality_witness(n: int, p_max: int = DEFAULT_P_MAX,
                               verify: bool = True) -> TorusWitness:
    """Evaluate m_3([y e1], [e2], [e2]) on the 2n-torus extension, where
    y = e3 e5 ... e_{2n-1}; nonzero proportionality to [theta y e2] is the
    non-formality witness."""
    if n < 2:
        raise MalformedInput("the torus witness needs n >= 2 (y would be the unit)")
    from .dga import make_torus_cohomology
    A = make_torus_cohomology(2 * n)
    omega = Vector.zero()
    for j in range(1, n + 1):
        omega = omega + A.mul(Vector.basis(f"e{2 * j - 1}"), Vector.basis(f"e{2 * j}"))
    model = formal_extension_minimal_model(A, omega, p_max, verify=verify)
    ext = model.extension

    y = Vector.basis("1")
    for j in range(2, n + 1):
        y = A.mul(y, Vector.basis(f"e{2 * j - 1}"))
    ye1 = A.mul(y, Vector.basis("e1"))
    X = model.class_of(ext.embed_base(ye1))
    E2 = model.class_of(ext.embed_base(Vector.basis("e2")))

    m2v = model.structure.op(2).eval_vectors([X, E2])
    m3v = model.structure.op(3).eval_vectors([X, E2, E2])
    expected = model.class_of(ext.embed_theta(A.mul(y, Vector.basis("e2"))))

    scalar = None
    if expected and m3v:
        lbl = next(iter(model.structure.space.sorted_items(expected)))[0]
        c = m3v.get(lbl) / expected.get(lbl)
        if m3v == expected.scale(c) and c:
            scalar = c
    return TorusWitness(n=n, class_x=X, class_e2=E2, m2_value=m2v,
                        m3_value=m3v, expected_direction=expected,
                        scalar=scalar, nonzero=bool(m3v), model=model)


@dataclass
class CpnWitness:
    n: int
    h_dims: dict[int, int]
    higher_ops_zero: bool
    certificate: object
    model: FormalExtensionModel

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "extension_cohomology_dims": {str(k): v for k, v in sorted(self.h_dims.items())},
            "m_p_zero_for_3_to_pmax": self.higher_ops_zero,
            "degree_certificate": self.certificate.to_json(),
        }


def cpn_formality_witness(n: int, p_max: int = DEFAULT_P_MAX) -> CpnWitness:
    """Formality of the extension of H*(CP^n): cohomology concentrated in
    degrees 0 and 2n+1, zero m_p for 3 <= p <= p_max, degree certificate for
    every arity."""
    from .dga import make_cpn_cohomology
    A = make_cpn_cohomology(n)
    model = formal_extension_minimal_model(A, Vector.basis("w"), p_max)
    H = model.structure.space
    dims = {k: H.dim(k) for k in H.degrees() if H.dim(k)}
    higher_zero = all(model.structure.op(p).is_zero() for p in range(3, p_max + 1))
    cert = vanishing_profile(model.structure)
    return CpnWitness(n=n, h_dims=dims, higher_ops_zero=higher_zero,
                      certificate=cert, model=model)
