"""Exact rational graded linear algebra.

Everything downstream is built on four value types:

  * ``Vector``        -- sparse rational combination of named basis labels,
  * ``GradedSpace``   -- finite named bases indexed by integer degree,
  * ``GradedLinearMap``   -- degree-homogeneous linear map given by columns,
  * ``MultiLinearMap``    -- degree-homogeneous p-linear map given by a sparse
                             table over basis label tuples.

Scalars are ``fractions.Fraction`` throughout: exact, always in canonical
reduced form, so vanishing questions are decidable and runs reproduce
bit-for-bit.  All reductions use reduced row echelon form with pivoting in a
fixed basis order (insertion order of the space), which makes every kernel,
image, complement and solution canonical.

The splitting machinery (``compute_splitting``) decomposes a cochain complex
A = E (+) C (+) P where E is the image of d, C is an echelon complement of E
inside ker d, and P is a coordinate complement of ker d.  The homotopy Q
inverts d from E back into P: Q d = id on P and d Q = id on E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class AlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedInput(AlgebraError):
    """Input violates a structural precondition (degrees, labels, parsing)."""


class AxiomViolation(AlgebraError):
    """A required algebraic axiom fails; carries a witness in the message."""


class NotExact(AlgebraError):
    """A vector expected in the image of d is not exact."""


class DependencyError(AlgebraError):
    """Lower-arity data needed by an inductive construction is missing."""


class InvalidWitness(AlgebraError):
    """A user-supplied witness (correction term, morphism) fails its contract."""


class BudgetExceeded(AlgebraError):
    """A tuple-count budget guard tripped before an expensive enumeration."""


def parse_scalar(text) -> Fraction:
    """Parse 'p/q' or 'p' (or pass through ints/Fractions) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational scalar {text!r}: {exc}") from None


def format_scalar(x: Fraction) -> str:
    return str(x)


class Vector:
    """Sparse rational vector over basis labels; zero coefficients never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for label, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    data[label] = data.get(label, ZERO) + c
                    if not data[label]:
                        del data[label]
        self.coeffs = data

    @staticmethod
    def zero() -> "Vector":
        return Vector()

    @staticmethod
    def basis(label, coeff=ONE) -> "Vector":
        c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
        return Vector({label: c} if c else {})

    def get(self, label) -> Fraction:
        return self.coeffs.get(label, ZERO)

    def items(self):
        return self.coeffs.items()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "Vector") -> "Vector":
        data = dict(self.coeffs)
        for label, c in other.coeffs.items():
            s = data.get(label, ZERO) + c
            if s:
                data[label] = s
            else:
                data.pop(label, None)
        out = Vector()
        out.coeffs = data
        return out

    def __sub__(self, other: "Vector") -> "Vector":
        return self + other.scale(-1)

    def __neg__(self) -> "Vector":
        return self.scale(-1)

    def scale(self, c) -> "Vector":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return Vector()
        out = Vector()
        out.coeffs = {label: v * c for label, v in self.coeffs.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"Vector({self.coeffs!r})"


class GradedSpace:
    """Finite named bases per integer degree; label order is insertion order."""

    def __init__(self, labeled_degrees: Iterable[tuple[str, int]]):
        self._degree_of: dict[str, int] = {}
        self._ordinal: dict[str, int] = {}
        self._by_degree: dict[int, list[str]] = {}
        for label, degree in labeled_degrees:
            if not isinstance(label, str) or not label:
                raise MalformedInput(f"basis label must be a nonempty string, got {label!r}")
            if label in self._degree_of:
                raise MalformedInput(f"duplicate basis label {label!r}")
            self._ordinal[label] = len(self._ordinal)
            self._degree_of[label] = degree
            self._by_degree.setdefault(degree, []).append(label)

    def labels(self) -> list[str]:
        return list(self._ordinal)

    def degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def basis(self, degree: int) -> list[str]:
        return list(self._by_degree.get(degree, ()))

    def dim(self, degree: int) -> int:
        return len(self._by_degree.get(degree, ()))

    def total_dim(self) -> int:
        return len(self._ordinal)

    def has(self, label: str) -> bool:
        return label in self._degree_of

    def degree_of(self, label: str) -> int:
        try:
            return self._degree_of[label]
        except KeyError:
            raise MalformedInput(f"label {label!r} not in space") from None

    def ordinal(self, label: str) -> int:
        try:
            return self._ordinal[label]
        except KeyError:
            raise MalformedInput(f"label {label!r} not in space") from None

    def tuple_key(self, labels: tuple[str, ...]) -> tuple[int, ...]:
        return tuple(self._ordinal[l] for l in labels)

    def sorted_items(self, v: Vector) -> list[tuple[str, Fraction]]:
        return sorted(v.items(), key=lambda kv: self._ordinal[kv[0]])

    def degree_of_vector(self, v: Vector) -> Optional[int]:
        """Degree of a homogeneous vector, None for zero; raises on mixed degrees."""
        deg = None
        for label in v.coeffs:
            d = self.degree_of(label)
            if deg is None:
                deg = d
            elif deg != d:
                raise MalformedInput(f"vector is not homogeneous: degrees {deg} and {d}")
        return deg

    def check_vector(self, v: Vector):
        for label in v.coeffs:
            if label not in self._degree_of:
                raise MalformedInput(f"vector label {label!r} not in space")

    def suspended(self) -> "GradedSpace":
        """Same labels with every degree lowered by one ((SA)^i = A^{i+1})."""
        return GradedSpace((l, self._degree_of[l] - 1) for l in self._ordinal)

    def format_vector(self, v: Vector) -> str:
        """Canonical human/label-safe rendering, terms in basis order."""
        if v.is_zero():
            return "0"
        parts = []
        for label, c in self.sorted_items(v):
            if c == 1:
                term = label
            elif c == -1:
                term = "-" + label
            else:
                term = f"{c}*{label}"
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)


class GradedLinearMap:
    """Linear map of fixed degree, stored as sparse columns over source labels."""

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 columns: Optional[dict[str, Vector]] = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.columns: dict[str, Vector] = {}
        if columns:
            for label, v in columns.items():
                self.set_column(label, v)

    def set_column(self, label: str, v: Vector):
        d = self.source.degree_of(label)
        for out_label in v.coeffs:
            if self.target.degree_of(out_label) != d + self.degree:
                raise MalformedInput(
                    f"column {label!r}: image label {out_label!r} has degree "
                    f"{self.target.degree_of(out_label)}, expected {d + self.degree}")
        if v:
            self.columns[label] = v
        else:
            self.columns.pop(label, None)

    def apply_label(self, label: str) -> Vector:
        return self.columns.get(label, Vector.zero())

    def apply(self, v: Vector) -> Vector:
        out = Vector.zero()
        for label, c in v.items():
            col = self.columns.get(label)
            if col is not None:
                out = out + col.scale(c)
        return out

    __call__ = apply

    def compose(self, inner: "GradedLinearMap") -> "GradedLinearMap":
        """self o inner."""
        out = GradedLinearMap(inner.source, self.target, self.degree + inner.degree)
        for label, col in inner.columns.items():
            out.set_column(label, self.apply(col))
        return out

    def is_zero(self) -> bool:
        return not self.columns

    @staticmethod
    def identity(space: GradedSpace) -> "GradedLinearMap":
        return GradedLinearMap(space, space, 0,
                               {l: Vector.basis(l) for l in space.labels()})


class MultiLinearMap:
    """p-linear map of fixed degree given by a sparse table over label tuples.

    Invariant: for every stored tuple, each output label has degree equal to
    the sum of the input degrees plus the map degree.
    """

    def __init__(self, source: GradedSpace, target: GradedSpace, arity: int, degree: int,
                 table: Optional[dict[tuple, Vector]] = None):
        if arity < 1:
            raise MalformedInput(f"arity must be >= 1, got {arity}")
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.table: dict[tuple[str, ...], Vector] = {}
        self._degree_support: Optional[set[tuple[int, ...]]] = None
        if table:
            for key, v in table.items():
                self.set(key, v)

    def set(self, key: tuple[str, ...], v: Vector):
        if len(key) != self.arity:
            raise MalformedInput(f"expected {self.arity}-tuple, got {key!r}")
        in_deg = sum(self.source.degree_of(l) for l in key)
        for out_label in v.coeffs:
            if self.target.degree_of(out_label) != in_deg + self.degree:
                raise MalformedInput(
                    f"entry {key!r}: output label {out_label!r} has degree "
                    f"{self.target.degree_of(out_label)}, expected {in_deg + self.degree}")
        if v:
            self.table[key] = v
        else:
            self.table.pop(key, None)
        self._degree_support = None

    def get(self, key: tuple[str, ...]) -> Vector:
        return self.table.get(key, Vector.zero())

    def is_zero(self) -> bool:
        return not self.table

    def degree_support(self) -> set[tuple[int, ...]]:
        """Set of input-degree tuples carrying nonzero entries (for pruning)."""
        if self._degree_support is None:
            deg = self.source.degree_of
            self._degree_support = {tuple(deg(l) for l in key) for key in self.table}
        return self._degree_support

    def eval_vectors(self, vectors: list[Vector]) -> Vector:
        """Multilinear evaluation on sparse vectors (no Koszul signs here)."""
        if len(vectors) != self.arity:
            raise MalformedInput(f"expected {self.arity} vectors")
        out = Vector.zero()

        def rec(i, key, coeff):
            nonlocal out
            if i == len(vectors):
                hit = self.table.get(tuple(key))
                if hit is not None:
                    out = out + hit.scale(coeff)
                return
            for label, c in vectors[i].items():
                key.append(label)
                rec(i + 1, key, coeff * c)
                key.pop()

        rec(0, [], ONE)
        return out

    def sorted_keys(self) -> list[tuple[str, ...]]:
        return sorted(self.table, key=self.source.tuple_key)

    def copy(self) -> "MultiLinearMap":
        return MultiLinearMap(self.source, self.target, self.arity, self.degree,
                              dict(self.table))

    @staticmethod
    def zero(source, target, arity, degree) -> "MultiLinearMap":
        return MultiLinearMap(source, target, arity, degree)


# ---------------------------------------------------------------------------
# Reduced row echelon machinery (rows are lists of Fractions).
# ---------------------------------------------------------------------------

def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot column indices).

    Pivoting scans columns left to right and rows top to bottom, so the result
    is canonical for a fixed input order.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def solve_rref(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Solve A x = rhs; particular solution with free variables set to zero."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if nrows == 0:
        return [ZERO] * ncols if not any(rhs) else None
    red, pivots = rref(aug)
    sol = [ZERO] * ncols
    for row, pc in zip(red, pivots):
        if pc == ncols:
            return None  # 0 = 1 row: inconsistent
        sol[pc] = row[ncols]
    return sol


def kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Canonical basis of {x : A x = 0} from the rref parametrization."""
    if not rows:
        red, pivots = [], []
    else:
        red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for row, pc in zip(red, pivots):
            if row[f]:
                vec[pc] = -row[f]
        basis.append(vec)
    return basis


class _Spanner:
    """Incremental row space with reduction, for greedy complement building."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []   # kept in echelon form
        self.pivots: list[int] = []

    def reduce(self, vec: list[Fraction]) -> list[Fraction]:
        v = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vec: list[Fraction]) -> bool:
        """Insert if independent; returns True when the rank grew."""
        v = self.reduce(vec)
        pc = next((c for c in range(self.ncols) if v[c]), None)
        if pc is None:
            return False
        pv = v[pc]
        if pv != 1:
            v = [x / pv for x in v]
        # keep reduced: clear this column in existing rows
        for i, row in enumerate(self.rows):
            if row[pc]:
                f = row[pc]
                self.rows[i] = [a - f * b for a, b in zip(row, v)]
        # insert in pivot order
        pos = next((i for i, p in enumerate(self.pivots) if p > pc), len(self.pivots))
        self.rows.insert(pos, v)
        self.pivots.insert(pos, pc)
        return True


def _vec_to_coords(space: GradedSpace, degree: int, v: Vector) -> list[Fraction]:
    basis = space.basis(degree)
    idx = {l: i for i, l in enumerate(basis)}
    out = [ZERO] * len(basis)
    for label, c in v.items():
        d = space.degree_of(label)
        if d != degree:
            raise MalformedInput(f"label {label!r} has degree {d}, expected {degree}")
        out[idx[label]] = c
    return out


def _coords_to_vec(space: GradedSpace, degree: int, coords: list[Fraction]) -> Vector:
    basis = space.basis(degree)
    return Vector({l: c for l, c in zip(basis, coords) if c})


def solve_linear(L: GradedLinearMap, target: Vector) -> Optional[Vector]:
    """Some x with L(x) = target, or None when no solution exists.

    Deterministic: the solution is the rref particular solution (free
    variables zero) over the source basis in its fixed order.
    """
    L.target.check_vector(target)
    if target.is_zero():
        return Vector.zero()
    tdeg = L.target.degree_of_vector(target)
    sdeg = tdeg - L.degree
    src = L.source.basis(sdeg)
    tgt = L.target.basis(tdeg)
    if not src:
        return None
    tidx = {l: i for i, l in enumerate(tgt)}
    # rows = target coordinates, columns = source basis
    rows = [[ZERO] * len(src) for _ in tgt]
    for j, s in enumerate(src):
        for label, c in L.apply_label(s).items():
            rows[tidx[label]][j] = c
    rhs = [target.get(l) for l in tgt]
    sol = solve_rref(rows, rhs)
    if sol is None:
        return None
    return Vector({s: c for s, c in zip(src, sol) if c})


# ---------------------------------------------------------------------------
# Splitting A = E (+) C (+) P with homotopy Q.
# ---------------------------------------------------------------------------

@dataclass
class SplittingData:
    """Decomposition of a complex (A, d) with homotopy Q.

    E = im d, C = echelon complement of E in ker d (a basis of cohomology),
    P = coordinate complement of ker d.  Q, proj_E, proj_C, proj_P act on the
    whole ambient space; Q vanishes on C (+) P, Q d = id on P, d Q = id on E.
    """
    space: GradedSpace
    d: GradedLinearMap
    E: dict[int, list[Vector]] = field(default_factory=dict)
    C: dict[int, list[Vector]] = field(default_factory=dict)
    P: dict[int, list[Vector]] = field(default_factory=dict)
    Q: GradedLinearMap = None
    proj_E: GradedLinearMap = None
    proj_C: GradedLinearMap = None
    proj_P: GradedLinearMap = None

    def betti(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self.C.items()) if v}

    def c_basis_flat(self) -> list[tuple[int, int, Vector]]:
        """(degree, index, vector) for the C basis in canonical order."""
        out = []
        for k in sorted(self.C):
            for i, v in enumerate(self.C[k]):
                out.append((k, i, v))
        return out

    def c_coordinates(self, v: Vector) -> dict[tuple[int, int], Fraction]:
        """Coordinates of proj_C(v) in the C basis, keyed by (degree, index)."""
        w = self.proj_C.apply(v)
        out: dict[tuple[int, int], Fraction] = {}
        if w.is_zero():
            return out
        by_deg: dict[int, Vector] = {}
        for label, c in w.items():
            d = self.space.degree_of(label)
            by_deg[d] = by_deg.get(d, Vector.zero()) + Vector.basis(label, c)
        for k, part in by_deg.items():
            cols = self.C.get(k, [])
            basis = self.space.basis(k)
            rows = [[cv.get(l) for cv in cols] for l in basis]
            sol = solve_rref(rows, [part.get(l) for l in basis])
            if sol is None:
                raise AlgebraError("proj_C image not in span(C); splitting is corrupt")
            for i, c in enumerate(sol):
                if c:
                    out[(k, i)] = c
        return out


def compute_splitting(space: GradedSpace, d: GradedLinearMap, *,
                      seed_C: Optional[dict[int, list[Vector]]] = None,
                      validate: bool = True) -> SplittingData:
    """Split (A, d) as E (+) C (+) P with homotopy Q (see SplittingData).

    seed_C forces chosen closed, non-exact vectors to the front of the C basis
    in their degree (used to keep a unit among the representatives).  Raises
    AxiomViolation when d does not square to zero, MalformedInput when a seed
    is not closed, and NotExact when a seed is exact or dependent.
    """
    if d.degree != 1:
        raise MalformedInput(f"differential must have degree +1, got {d.degree}")
    if validate:
        for label in space.labels():
            ddl = d.apply(d.apply_label(label))
            if not ddl.is_zero():
                raise AxiomViolation(f"d^2 != 0 on basis element {label!r}")

    s = SplittingData(space=space, d=d)
    Q = GradedLinearMap(space, space, -1)
    pE = GradedLinearMap(space, space, 0)
    pC = GradedLinearMap(space, space, 0)
    pP = GradedLinearMap(space, space, 0)

    for k in space.degrees():
        basis = space.basis(k)
        n = len(basis)
        # image of d from degree k-1
        img_rows = []
        for lbl in space.basis(k - 1):
            col = d.apply_label(lbl)
            if col:
                img_rows.append(_vec_to_coords(space, k, col))
        E_rows, _ = rref(img_rows) if img_rows else ([], [])
        # kernel of d on degree k
        tgt = space.basis(k + 1)
        tidx = {l: i for i, l in enumerate(tgt)}
        d_rows = [[ZERO] * n for _ in tgt]
        for j, lbl in enumerate(basis):
            for out_label, c in d.apply_label(lbl).items():
                d_rows[tidx[out_label]][j] = c
        ker_rows = kernel_basis(d_rows, n) if tgt else \
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

        span = _Spanner(n)
        for row in E_rows:
            span.add(row)
        C_vecs: list[Vector] = []
        for seed in (seed_C or {}).get(k, []):
            coords = _vec_to_coords(space, k, seed)
            if not d.apply(seed).is_zero():
                raise MalformedInput(f"seed vector in degree {k} is not closed")
            if not span.add(coords):
                raise NotExact(f"seed vector in degree {k} is exact or dependent")
            C_vecs.append(seed)
        ker_span = _Spanner(n)
        for row in ker_rows:
            ker_span.add(row)
        for row in ker_span.rows:   # echelon form of the kernel, pivot order
            if span.add(row):
                C_vecs.append(_coords_to_vec(space, k, row))
        P_labels = [basis[c] for c in range(n) if c not in set(ker_span.pivots)]

        s.E[k] = [_coords_to_vec(space, k, r) for r in E_rows]
        s.C[k] = C_vecs
        s.P[k] = [Vector.basis(l) for l in P_labels]

    # homotopy: for each E basis vector solve d(p) = e with p in span(P) below
    q_on_E: dict[int, list[Vector]] = {}
    for k, evecs in s.E.items():
        pvecs = s.P.get(k - 1, [])
        sols = []
        if evecs:
            basis_k = space.basis(k)
            rows = [[d.apply(pv).get(l) for pv in pvecs] for l in basis_k]
            for e in evecs:
                coeffs = solve_rref(rows, [e.get(l) for l in basis_k])
                if coeffs is None:
                    raise AlgebraError("image vector not reachable from P; rank bug")
                acc = Vector.zero()
                for pv, c in zip(pvecs, coeffs):
                    acc = acc + pv.scale(c)
                sols.append(acc)
        q_on_E[k] = sols

    # ambient-coordinate projections: invert [E | C | P] per degree
    for k in space.degrees():
        basis = space.basis(k)
        n = len(basis)
        blocks = [("E", v) for v in s.E[k]] + [("C", v) for v in s.C[k]] + [("P", v) for v in s.P[k]]
        if len(blocks) != n:
            raise AlgebraError(f"E+C+P dimension mismatch in degree {k}")
        cols = [_vec_to_coords(space, k, v) for _, v in blocks]
        # solve B a = x for each coordinate vector x
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        for bi, lbl in enumerate(basis):
            rhs = [ONE if i == bi else ZERO for i in range(n)]
            sol = solve_rref(rows, rhs)
            if sol is None:
                raise AlgebraError(f"E,C,P do not span degree {k}")
            ve = Vector.zero(); vc = Vector.zero(); vp = Vector.zero(); qv = Vector.zero()
            for j, ((kind, vec), a) in enumerate(zip(blocks, sol)):
                if not a:
                    continue
                if kind == "E":
                    ve = ve + vec.scale(a)
                    qv = qv + q_on_E[k][j].scale(a)
                elif kind == "C":
                    vc = vc + vec.scale(a)
                else:
                    vp = vp + vec.scale(a)
            pE.set_column(lbl, ve)
            pC.set_column(lbl, vc)
            pP.set_column(lbl, vp)
            Q.set_column(lbl, qv)

    s.Q, s.proj_E, s.proj_C, s.proj_P = Q, pE, pC, pP

    if validate:
        for label in space.labels():
            x = Vector.basis(label)
            total = pE.apply(x) + pC.apply(x) + pP.apply(x)
            if total != x:
                raise AlgebraError(f"projections do not sum to identity at {label!r}")
        for k, cvecs in s.C.items():
            for v in cvecs:
                if not d.apply(v).is_zero():
                    raise AlgebraError(f"C vector in degree {k} not closed")
        for k, pvecs in s.P.items():
            for v in pvecs:
                if Q.apply(d.apply(v)) != v:
                    raise AlgebraError(f"Q d != id on P in degree {k}")
        for k, evecs in s.E.items():
            for v in evecs:
                if d.apply(Q.apply(v)) != v:
                    raise AlgebraError(f"d Q != id on E in degree {k}")
    return s


def apply_homotopy_Q(s: SplittingData, v: Vector) -> Vector:
    """The unique p in P with d(p) = v; raises NotExact when v is not in E."""
    s.space.check_vector(v)
    if s.proj_E.apply(v) != v:
        raise NotExact("vector is not exact (has C or P component)")
    return s.Q.apply(v)
