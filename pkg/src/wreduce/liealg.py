"""Finite-dimensional Lie algebra layer: structure constants, invariant
bilinear forms, sl2-triples, integer gradings, and the graded subspace
geometry (isotropic subspace, its coisotropic partner, nilpotent
subalgebras, the orthogonal slice frame with its dual basis) that the
reduction algorithms consume.

Vectors are coordinate lists over the algebra's ordered basis, with
exact rational entries.  All derived bases are canonical: deterministic
reduced-echelon constructions, so repeated runs give identical frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .linalg import frac


class LieAlgebraError(ValueError):
    """Raised when data violates a Lie algebra invariant; the message names it."""


class SetupError(LieAlgebraError):
    """Raised when a reduction setup violates one of its invariants."""


class LieAlgebra:
    """Lie algebra given by structure constants and an invariant form.

    brackets maps (I, J) with I < J to a tuple of (K, coefficient); the
    antisymmetric completion is implicit.  form is the Gram matrix of
    the invariant bilinear form on the basis.
    """

    __slots__ = ("dim", "labels", "brackets", "form", "_index")

    def __init__(self, dim, labels, brackets, form):
        self.dim = dim
        self.labels = tuple(labels)
        self.brackets = {k: tuple((int(i), frac(c)) for i, c in v)
                         for k, v in brackets.items()}
        self.form = la.mat(form)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.labels) != dim or len(self._index) != dim:
            raise LieAlgebraError("basis labels must be distinct and match dim")
        if len(self.form) != dim or any(len(r) != dim for r in self.form):
            raise LieAlgebraError("form matrix shape must be dim x dim")
        for (i, j) in self.brackets:
            if not (0 <= i < j < dim):
                raise LieAlgebraError(
                    "bracket table keys must satisfy 0 <= I < J < dim "
                    "(antisymmetry: the completion is implicit)")

    def label_index(self, label):
        if label not in self._index:
            raise LieAlgebraError(f"unknown basis label {label!r}")
        return self._index[label]

    def basis_vector(self, i):
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def bracket_basis(self, i, j):
        """[xi_i, xi_j] as a dict K -> coefficient."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), ()))
        return {k: -c for k, c in self.brackets.get((j, i), ())}

    def bracket(self, x, y):
        """[x, y] for coordinate vectors x, y."""
        out = [Fraction(0)] * self.dim
        for (i, j), terms in self.brackets.items():
            f = x[i] * y[j] - x[j] * y[i]
            if f:
                for k, c in terms:
                    out[k] += f * c
        return out

    def ad(self, x):
        """Matrix M of ad x: [x, xi_j] = sum_k M[k][j] xi_k."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return la.transpose(cols)

    def pair(self, x, y):
        """Invariant form <x|y>."""
        return sum((xi * sum((self.form[i][j] * y[j] for j in range(self.dim)),
                             Fraction(0))
                    for i, xi in enumerate(x) if xi), Fraction(0))

    def is_nilpotent(self, x):
        m = self.ad(x)
        p = la.identity(self.dim)
        for _ in range(self.dim + 1):
            p = la.mat_mul(m, p)
            if all(all(c == 0 for c in row) for row in p):
                return True
        return False

    def validate(self):
        """Check antisymmetry, the Jacobi identity, form invariance and
        nondegeneracy on all basis triples; raise LieAlgebraError naming
        the first violated invariant."""
        n = self.dim
        for (i, j), terms in self.brackets.items():
            if i == j and terms:
                raise LieAlgebraError("antisymmetry violated: [x,x] must be 0")
        basis = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                bij = self.bracket(basis[i], basis[j])
                for k in range(n):
                    jac = la.vec_add(
                        self.bracket(bij, basis[k]),
                        la.vec_add(
                            self.bracket(self.bracket(basis[j], basis[k]), basis[i]),
                            self.bracket(self.bracket(basis[k], basis[i]), basis[j])))
                    if not la.is_zero_vec(jac):
                        raise LieAlgebraError(
                            f"Jacobi identity fails on basis triple "
                            f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        for i in range(n):
            for j in range(n):
                if self.form[i][j] != self.form[j][i]:
                    raise LieAlgebraError("bilinear form is not symmetric")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.pair(self.bracket(basis[i], basis[j]), basis[k]) \
                        + self.pair(basis[j], self.bracket(basis[i], basis[k]))
                    if lhs != 0:
                        raise LieAlgebraError(
                            f"form invariance <[x,y]|z> + <y|[x,z]> = 0 fails on "
                            f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        if la.rank(self.form) != n:
            raise LieAlgebraError("bilinear form is degenerate")
        return self

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "dim": self.dim,
            "basis": list(self.labels),
            "brackets": [[i, j, [[k, _cstr(c)] for k, c in terms]]
                         for (i, j), terms in sorted(self.brackets.items())],
            "form": [[_cstr(c) for c in row] for row in self.form],
        }

    @classmethod
    def from_json(cls, data):
        try:
            dim = int(data["dim"])
            labels = list(data["basis"])
            raw = data["brackets"]
            form = data["form"]
        except (KeyError, TypeError) as exc:
            raise LieAlgebraError(f"malformed Lie algebra data: {exc}") from exc
        table = {}
        for i, j, terms in raw:
            i, j = int(i), int(j)
            if i == j:
                if any(frac(c) != 0 for _, c in terms):
                    raise LieAlgebraError("antisymmetry violated: [x,x] must be 0")
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            entry = tuple(sorted((int(k), sign * frac(c)) for k, c in terms
                                 if frac(c) != 0))
            if key in table and table[key] != entry:
                raise LieAlgebraError(
                    "bracket table gives inconsistent values for a pair "
                    "(antisymmetric completion conflict)")
            table[key] = entry
        alg = cls(dim, labels, table, form)
        alg.validate()
        return alg


def _cstr(c):
    return str(frac(c))


_SL_CACHE = {}


def build_sl_n(n: int) -> LieAlgebra:
    """Traceless n x n matrices with the trace form.

    Basis: e_{ij} (i != j) in row-major order, labeled "e{i}{j}" with
    1-based indices, followed by h_k = e_{kk} - e_{k+1,k+1} labeled "h{k}".

    The validated model is cached per n and shared; treat it as
    read-only.
    """
    if n < 2:
        raise LieAlgebraError("invalid dimension: sl_n needs n >= 2")
    if n in _SL_CACHE:
        return _SL_CACHE[n]
    sep = "" if n <= 9 else "_"
    mats = []
    labels = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = [[Fraction(0)] * n for _ in range(n)]
            m[i][j] = Fraction(1)
            mats.append(m)
            labels.append(f"e{i + 1}{sep}{j + 1}")
    for k in range(n - 1):
        m = [[Fraction(0)] * n for _ in range(n)]
        m[k][k] = Fraction(1)
        m[k + 1][k + 1] = Fraction(-1)
        mats.append(m)
        labels.append(f"h{k + 1}")
    dim = len(mats)

    def mat_commutator(a, b):
        ab = la.mat_mul(a, b)
        ba = la.mat_mul(b, a)
        return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]

    def coords(m):
        if sum(m[i][i] for i in range(n)) != 0:
            raise LieAlgebraError("matrix is not traceless")
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(m[i][j])
        acc = Fraction(0)
        for k in range(n - 1):
            acc += m[k][k]
            out.append(acc)
        return out

    brackets = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            v = coords(mat_commutator(mats[i], mats[j]))
            terms = tuple((k, c) for k, c in enumerate(v) if c != 0)
            if terms:
                brackets[(i, j)] = terms
    form = [[_trace_prod(a, b) for b in mats] for a in mats]
    _SL_CACHE[n] = LieAlgebra(dim, labels, brackets, form).validate()
    return _SL_CACHE[n]


def _trace_prod(a, b):
    n = len(a)
    return sum((a[i][j] * b[j][i] for i in range(n) for j in range(n)),
               Fraction(0))


@dataclass(frozen=True)
class SL2Triple:
    """Vectors e, h, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""

    e: tuple
    h: tuple
    f: tuple

    def validate(self, alg: LieAlgebra):
        e, h, f = list(self.e), list(self.h), list(self.f)
        if self.bracket_check(alg, h, e) != la.vec_scale(2, e):
            raise LieAlgebraError("sl2 relation [h,e] = 2e fails")
        if self.bracket_check(alg, h, f) != la.vec_scale(-2, f):
            raise LieAlgebraError("sl2 relation [h,f] = -2f fails")
        if self.bracket_check(alg, e, f) != h:
            raise LieAlgebraError("sl2 relation [e,f] = h fails")
        if not alg.is_nilpotent(e):
            raise LieAlgebraError("e is not nilpotent")
        if not alg.is_nilpotent(f):
            raise LieAlgebraError("f is not nilpotent")
        return self

    @staticmethod
    def bracket_check(alg, x, y):
        return alg.bracket(x, y)


def sl2_from_partition(n: int, partition) -> SL2Triple:
    """The sl2-triple of the nilpotent orbit with the given Jordan type,
    in the basis of build_sl_n(n).

    Basis slots are ordered by decreasing sl2-weight (ties by block),
    f is the lower-triangular Jordan nilpotent in that ordering, h is
    diagonal with the standard weight strings, and e carries the
    matching coefficients k(p-k).
    """
    partition = [int(p) for p in partition]
    if any(p < 1 for p in partition) or sum(partition) != n:
        raise LieAlgebraError(f"partition must sum to {n}")
    if all(p == 1 for p in partition):
        raise LieAlgebraError(
            "partition with all parts 1 gives f = 0, which is not a nilpotent "
            "of positive depth")
    slots = []
    for b, p in enumerate(partition):
        for k in range(p):
            slots.append((-(p - 1 - 2 * k), b, k))
    slots.sort()
    pos = {(b, k): idx for idx, (_, b, k) in enumerate(slots)}
    alg = build_sl_n(n)
    e = [[Fraction(0)] * n for _ in range(n)]
    f = [[Fraction(0)] * n for _ in range(n)]
    h = [[Fraction(0)] * n for _ in range(n)]
    for b, p in enumerate(partition):
        for k in range(p):
            h[pos[(b, k)]][pos[(b, k)]] = Fraction(p - 1 - 2 * k)
            if k + 1 < p:
                f[pos[(b, k + 1)]][pos[(b, k)]] = Fraction(1)
                e[pos[(b, k)]][pos[(b, k + 1)]] = Fraction((k + 1) * (p - k - 1))
    def coords(m):
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(m[i][j])
        acc = Fraction(0)
        for k in range(n - 1):
            acc += m[k][k]
            out.append(acc)
        return tuple(out)
    triple = SL2Triple(coords(e), coords(h), coords(f))
    return triple.validate(alg)


class Grading:
    """Integer grading diagonal on the basis: deg(xi_I) = degs[I]."""

    __slots__ = ("degs", "_pieces")

    def __init__(self, degs):
        self.degs = tuple(int(d) for d in degs)
        pieces = {}
        for i, d in enumerate(self.degs):
            pieces.setdefault(d, []).append(i)
        self._pieces = {d: tuple(ix) for d, ix in pieces.items()}

    def degrees(self):
        return sorted(self._pieces)

    def indices(self, d):
        return self._pieces.get(d, ())

    def piece_basis(self, alg, d):
        return [alg.basis_vector(i) for i in self.indices(d)]

    def degree_of(self, v):
        """Degree of a homogeneous vector, None for 0; raises if mixed."""
        degs = {self.degs[i] for i, c in enumerate(v) if c != 0}
        if not degs:
            return None
        if len(degs) > 1:
            raise LieAlgebraError(
                f"vector is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self, v):
        return len({self.degs[i] for i, c in enumerate(v) if c != 0}) <= 1

    def validate(self, alg: LieAlgebra):
        for (i, j), terms in alg.brackets.items():
            d = self.degs[i] + self.degs[j]
            for k, c in terms:
                if c != 0 and self.degs[k] != d:
                    raise LieAlgebraError(
                        f"grading does not respect the bracket: "
                        f"[{alg.labels[i]}, {alg.labels[j]}] has a component in "
                        f"degree {self.degs[k]}, expected {d}")
        return self

    def __eq__(self, other):
        return isinstance(other, Grading) and self.degs == other.degs


def dynkin_grading(alg: LieAlgebra, h) -> Grading:
    """Grading by ad-h eigenvalues; requires ad h diagonal with integer
    eigenvalues on the chosen basis."""
    degs = []
    for j in range(alg.dim):
        w = alg.bracket(list(h), alg.basis_vector(j))
        support = [i for i, c in enumerate(w) if c != 0]
        if support and support != [j]:
            raise LieAlgebraError(
                f"ad h is not diagonal on the basis: [h, {alg.labels[j]}] "
                "involves other basis elements")
        c = w[j]
        if c.denominator != 1:
            raise LieAlgebraError(
                f"ad h eigenvalue {c} on {alg.labels[j]} is not an integer")
        degs.append(int(c))
    return Grading(degs).validate(alg)


@dataclass(frozen=True)
class GoodGradingReport:
    """Per-degree ranks of ad f: g_j -> g_{j-2} with the injectivity
    (j >= 1) and surjectivity (j <= 1) verdicts, plus the placement of
    the triple."""

    f_in_minus2: bool
    h_in_zero: bool
    e_in_plus2: bool
    rows: tuple  # (j, dim g_j, dim g_{j-2}, rank, injective_ok, surjective_ok)

    @property
    def ok(self):
        return (self.f_in_minus2 and self.h_in_zero and self.e_in_plus2
                and all(r[4] and r[5] for r in self.rows))

    def summary(self):
        lines = [f"f in g_-2: {self.f_in_minus2}, h in g_0: {self.h_in_zero}, "
                 f"e in g_2: {self.e_in_plus2}"]
        for j, dj, dj2, rank, inj, surj in self.rows:
            lines.append(
                f"degree {j}: dim g_j = {dj}, rank ad f = {rank}, "
                f"injective: {inj}, surjective onto g_(j-2) (dim {dj2}): {surj}")
        return "\n".join(lines)


def verify_good_grading(alg: LieAlgebra, triple: SL2Triple,
                        grading: Grading) -> GoodGradingReport:
    grading.validate(alg)
    def placed(v, want):
        try:
            return grading.degree_of(list(v)) == want
        except LieAlgebraError:
            return False
    rows = []
    degs = grading.degrees()
    lo, hi = min(degs), max(degs)
    f = list(triple.f)
    for j in range(lo, hi + 3):
        bj = grading.piece_basis(alg, j)
        dj = len(bj)
        dj2 = len(grading.indices(j - 2))
        if dj == 0 and dj2 == 0:
            continue
        images = [alg.bracket(f, v) for v in bj]
        rank = la.rank(images) if images else 0
        inj = (rank == dj) if j >= 1 else True
        surj = (rank == dj2) if j <= 1 else True
        rows.append((j, dj, dj2, rank, inj, surj))
    return GoodGradingReport(
        f_in_minus2=placed(triple.f, -2),
        h_in_zero=placed(triple.h, 0) if any(c != 0 for c in triple.h) else False,
        e_in_plus2=placed(triple.e, 2),
        rows=tuple(rows))


def graded_canonical_basis(alg, grading, rows):
    """Canonical homogeneous basis of a graded subspace: per degree
    (ascending), the reduced echelon basis of the intersection with g_d."""
    if not rows:
        return []
    out = []
    total = 0
    for d in grading.degrees():
        piece = grading.piece_basis(alg, d)
        inter = la.intersect_spans(rows, piece)
        out.extend(inter)
        total += len(inter)
    if total != la.rank(rows):
        raise LieAlgebraError("subspace is not graded (cannot happen for the "
                              "derived subspaces of a good grading)")
    return out


@dataclass(frozen=True)
class GradedSetup:
    """Immutable bundle of everything a reduction needs.

    Vector tuples: iso spans the isotropic subspace of g_-1; ell_prime
    its coisotropic partner; n_minus = ell_prime + (degrees <= -2);
    g_minus = iso + (degrees <= -2); b_minus the orthogonal complement
    of n_minus; g_f = ker ad f; slice_basis (length m) a basis of g_f;
    complement a homogeneous basis of [g, e]; duals the dual basis of
    slice_basis + complement under the invariant form; s_basis a basis
    of b_minus with s_completion extending it to the whole algebra and
    s_duals dual to that frame.

    Coordinates q^i(z) = <z - e | duals[i]> for i < m are the slice
    coordinates; they depend only on slice_basis, never on the grading
    or the isotropic choice, which is what makes the independence
    statements literal matrix identities.
    """

    algebra: LieAlgebra
    triple: SL2Triple
    grading: Grading
    iso: tuple
    a: tuple
    ell_prime: tuple
    n_minus: tuple
    g_minus: tuple
    b_minus: tuple
    g_f: tuple
    ker_e: tuple
    im_e: tuple
    im_f: tuple
    slice_basis: tuple
    complement: tuple
    duals: tuple
    s_basis: tuple
    s_completion: tuple
    s_duals: tuple

    @property
    def m(self):
        return len(self.slice_basis)

    @property
    def q_names(self):
        return tuple(f"q{i + 1}" for i in range(self.m))

    @property
    def s_names(self):
        return tuple(f"s{i + 1}" for i in range(len(self.s_basis)))

    def full_basis(self):
        return [list(v) for v in self.slice_basis + self.complement]

    def s_frame(self):
        return [list(v) for v in self.s_basis + self.s_completion]


def _tuplify(rows):
    return tuple(tuple(v) for v in rows)


def derive_subspaces(alg: LieAlgebra, triple: SL2Triple, grading: Grading,
                     isotropic=(), a=None, slice_basis=None, complement=None,
                     s_basis=None) -> GradedSetup:
    """Build and fully validate a GradedSetup.

    Optional frame overrides (slice_basis for g_f, complement for [g,e],
    s_basis for b_minus) replace the canonical echelon bases; they are
    validated to span the same subspaces.  The complement must consist
    of homogeneous vectors since the reductions sweep it by degree.
    """
    n = alg.dim
    triple.validate(alg)
    report = verify_good_grading(alg, triple, grading)
    if not report.ok:
        raise SetupError(
            "grading is not a good grading for the triple:\n" + report.summary())
    if a is None:
        raise SetupError("element a is required")
    a = la.vec(a)

    e, f = list(triple.e), list(triple.f)
    iso = [la.vec(v) for v in isotropic]
    deg_minus1 = list(grading.indices(-1))
    for v in iso:
        if any(v[i] != 0 for i in range(n) if i not in deg_minus1):
            raise SetupError("isotropic subspace must lie inside g_-1")
    if iso and la.rank(iso) != len(iso):
        raise SetupError("isotropic subspace generators are linearly dependent")

    def omega(x, y):
        return alg.pair(e, alg.bracket(x, y))

    for x in iso:
        for y in iso:
            if omega(x, y) != 0:
                raise SetupError(
                    "isotropic subspace is not isotropic for omega(x,y) = <e|[x,y]>")

    # ell' = {x in g_-1 : omega(x, ell) = 0}, computed in g_-1 coordinates.
    if deg_minus1:
        g1basis = [alg.basis_vector(i) for i in deg_minus1]
        if iso:
            constraint = [[omega(b, l) for b in g1basis] for l in iso]
            kernel = la.nullspace(constraint)
        else:
            kernel = la.identity(len(g1basis))
        ell_prime = []
        for coeffs in kernel:
            v = [Fraction(0)] * n
            for c, b in zip(coeffs, g1basis):
                v = la.vec_add(v, la.vec_scale(c, b))
            ell_prime.append(v)
    else:
        ell_prime = []
    for x in iso:
        if not la.in_span(ell_prime, x):
            raise SetupError("isotropic subspace is not contained in its "
                             "coisotropic partner ell'")

    low = [alg.basis_vector(i) for d in grading.degrees() if d <= -2
           for i in grading.indices(d)]
    n_minus = la.row_space(ell_prime + low) if (ell_prime or low) else []
    g_minus = la.row_space(iso + low) if (iso or low) else []

    def check_subalgebra(rows, name):
        for x in rows:
            for y in rows:
                if not la.in_span(rows, alg.bracket(x, y)):
                    raise SetupError(f"{name} is not closed under the bracket")
    check_subalgebra(n_minus, "n_minus")
    check_subalgebra(g_minus, "g_minus")

    # b_minus = orthogonal complement of n_minus under the invariant form.
    if n_minus:
        b_minus = la.nullspace([la.mat_vec(alg.form, v) for v in n_minus])
    else:
        b_minus = la.identity(n)

    g_f = la.nullspace(alg.ad(f))
    ker_e = la.nullspace(alg.ad(e))
    im_e = la.row_space([alg.bracket(alg.basis_vector(j), e) for j in range(n)])
    im_f = la.row_space([alg.bracket(alg.basis_vector(j), f) for j in range(n)])
    if len(g_f) != len(ker_e):
        raise SetupError("dim g_f != dim ker ad e (the triple or form is broken)")

    ge_minus = la.row_space([alg.bracket(x, e) for x in g_minus]) if g_minus else []
    if la.rank(ge_minus + g_f) != len(ge_minus) + len(g_f) \
            or la.rank(ge_minus + g_f) != len(b_minus) \
            or any(not la.in_span(b_minus, v) for v in ge_minus + g_f):
        raise SetupError("b_minus is not the direct sum [g_minus, e] (+) g_f")

    for v in n_minus:
        if not la.is_zero_vec(alg.bracket(a, v)):
            raise SetupError(
                "element a fails the centralizer condition: n_minus is not "
                "contained in ker ad a")

    # Slice frame: basis of g_f plus a homogeneous basis of [g, e].
    if slice_basis is None:
        slice_b = [list(v) for v in la.row_space(g_f)]
    else:
        slice_b = [la.vec(v) for v in slice_basis]
        if la.rank(slice_b) != len(slice_b) or len(slice_b) != len(g_f) \
                or any(not la.in_span(g_f, v) for v in slice_b):
            raise SetupError("slice_basis does not span g_f = ker ad f")
    if complement is None:
        comp = graded_canonical_basis(alg, grading, im_e)
    else:
        comp = [la.vec(v) for v in complement]
        if la.rank(comp) != len(comp) or len(comp) != len(im_e) \
                or any(not la.in_span(im_e, v) for v in comp):
            raise SetupError("complement does not span [g, e]")
    for v in comp:
        if not grading.is_homogeneous(v):
            raise SetupError("complement vectors must be homogeneous in the grading")
    full = slice_b + comp
    if la.rank(full) != n:
        raise SetupError("slice_basis + complement is not a basis "
                         "(g = g_f (+) [g,e] must be a direct sum)")
    gram = [[alg.pair(x, y) for y in full] for x in full]
    try:
        w = la.inverse(gram)
    except ValueError as exc:
        raise SetupError("bilinear form is degenerate on the slice frame") from exc
    duals = [la.mat_vec(la.transpose(full), row) for row in w]
    for i in range(len(slice_b)):
        if not la.is_zero_vec(alg.bracket(e, duals[i])):
            raise SetupError(
                "dual of a g_f basis vector is not in ker ad e "
                "(the complement must span [g, e])")

    # S-frame: basis of b_minus extended to the whole algebra.
    if s_basis is None:
        s_b = graded_canonical_basis(alg, grading, b_minus)
    else:
        s_b = [la.vec(v) for v in s_basis]
        if la.rank(s_b) != len(s_b) or len(s_b) != len(b_minus) \
                or any(not la.in_span(b_minus, v) for v in s_b):
            raise SetupError("s_basis does not span b_minus")
    s_comp = la.complete_basis(s_b, n)
    s_frame = s_b + s_comp
    s_gram = [[alg.pair(x, y) for y in s_frame] for x in s_frame]
    try:
        s_w = la.inverse(s_gram)
    except ValueError as exc:
        raise SetupError("bilinear form is degenerate on the S frame") from exc
    s_duals = [la.mat_vec(la.transpose(s_frame), row) for row in s_w]

    return GradedSetup(
        algebra=alg, triple=triple, grading=grading,
        iso=_tuplify(iso), a=tuple(a),
        ell_prime=_tuplify(ell_prime), n_minus=_tuplify(n_minus),
        g_minus=_tuplify(g_minus), b_minus=_tuplify(b_minus),
        g_f=_tuplify(g_f), ker_e=_tuplify(ker_e),
        im_e=_tuplify(im_e), im_f=_tuplify(im_f),
        slice_basis=_tuplify(slice_b), complement=_tuplify(comp),
        duals=_tuplify(duals),
        s_basis=_tuplify(s_b), s_completion=_tuplify(s_comp),
        s_duals=_tuplify(s_duals))


# -- setup serialization ------------------------------------------------------

def setup_to_json(setup: GradedSetup) -> dict:
    data = setup.algebra.to_json()
    data["triple"] = {"e": [_cstr(c) for c in setup.triple.e],
                      "h": [_cstr(c) for c in setup.triple.h],
                      "f": [_cstr(c) for c in setup.triple.f]}
    data["grading"] = list(setup.grading.degs)
    data["isotropic"] = [[_cstr(c) for c in v] for v in setup.iso]
    data["a"] = [_cstr(c) for c in setup.a]
    # Frame overrides beyond the base format, so emitted files reproduce
    # the exact coordinate conventions of the builtin examples.
    data["slice_basis"] = [[_cstr(c) for c in v] for v in setup.slice_basis]
    data["complement"] = [[_cstr(c) for c in v] for v in setup.complement]
    data["s_basis"] = [[_cstr(c) for c in v] for v in setup.s_basis]
    return data


def setup_from_json(data) -> GradedSetup:
    alg = LieAlgebra.from_json(data)
    try:
        tr = data["triple"]
        triple = SL2Triple(tuple(la.vec(tr["e"])), tuple(la.vec(tr["h"])),
                           tuple(la.vec(tr["f"])))
        grading = Grading(data["grading"])
        iso = [la.vec(v) for v in data.get("isotropic", [])]
        a = la.vec(data["a"])
    except (KeyError, TypeError) as exc:
        raise LieAlgebraError(f"malformed setup data: {exc}") from exc
    kw = {}
    for key in ("slice_basis", "complement", "s_basis"):
        if key in data:
            kw[key] = [la.vec(v) for v in data[key]]
    return derive_subspaces(alg, triple, grading, isotropic=iso, a=a, **kw)
