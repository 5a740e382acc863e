"""Three routes from the affine loop-space pencil to the reduced pencil
on the slice e + L(g_f), all exact and mutually cross-checkable:

* tensor_procedure: lift slice covectors to loop-algebra covectors whose
  pencil image is tangent to the slice, sweeping the grading from the
  top degree down.
* dirac_reduce: Dirac reduction of the matrix differential operator by
  the constraint coordinates, with the constrained minor inverted as a
  matrix differential operator (finite-order Neumann ansatz).
* ds_gauge_fix + leibnitz_transform: gauge fixing of the larger affine
  space e + L(b_minus) by a loop-group element with nilpotent
  logarithm, followed by the chain rule through the generator map.

All operators are stored with the global 1/eps convention of
loop_poisson; reduced pencils are validated to be skew and linear in
lam at construction time.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .linalg import frac
from .diffalg import DiffPoly, LinDiffOp, MatDiffOp, frechet_derivative
from .liealg import GradedSetup, SetupError, graded_canonical_basis
from .loop_poisson import PoissonPencil, lie_poisson_pencil

ORDER_CAP_ENV = "W_REDUCE_ORDER_CAP"


class ReductionError(RuntimeError):
    """A reduction sweep or inversion failed; the message says where."""


class NoFiniteOrderInverse(ReductionError):
    """The constrained minor has no inverse of finite differential order
    (or none below the configured ansatz cap)."""


@dataclass(frozen=True)
class GaugeFixMap:
    """Result of the gauge-fixing sweep.

    generators[i] is the i-th slice coordinate as a differential
    polynomial in the coordinates of e + L(b_minus); gauge_log is the
    coordinate vector (over the graded basis of g_minus recorded in
    gauge_basis) of the logarithm of the gauge transformation, kept as
    a diagnostic.
    """

    generators: tuple
    gauge_log: tuple
    gauge_basis: tuple
    s_names: tuple
    q_names: tuple


@dataclass(frozen=True)
class ReducedPencil:
    """Reduced pencil on the slice coordinates, tagged by the method
    that produced it; dirac_reduce also records the inverse of the
    constrained minor, ds the gauge data."""

    pencil: PoissonPencil
    method: str
    minor_inverse: MatDiffOp | None = None
    gauge: GaugeFixMap | None = None

    @property
    def op(self) -> MatDiffOp:
        return self.pencil.op

    @property
    def names(self):
        return self.pencil.names


def _constpart(op: MatDiffOp):
    """Entrywise: the order-0 coefficient with all fields, eps and lam
    set to zero.  Multiplicative for composition, so the minor has a
    finite-order inverse only if this matrix is invertible."""
    rows, cols = op.shape
    return [[op.entry(i, j).coeff(0).constant_term()
             for j in range(cols)] for i in range(rows)]


def _const_mat_op(mat) -> MatDiffOp:
    return MatDiffOp([[LinDiffOp.of_poly(DiffPoly.const(c)) for c in row]
                      for row in mat])


def invert_minor(minor: MatDiffOp, order_cap: int | None = None) -> MatDiffOp:
    """Exact two-sided inverse of a square matrix differential operator,
    found by escalating a finite-order ansatz (Neumann series around the
    constant part).  Raises NoFiniteOrderInverse if the constant part is
    singular or the series has not terminated at the cap."""
    rows, cols = minor.shape
    if rows != cols:
        raise ReductionError("minor must be square")
    if order_cap is None:
        env = os.environ.get(ORDER_CAP_ENV)
        order_cap = int(env) if env else 2 * rows + 4
    a0 = _constpart(minor)
    try:
        b0 = la.inverse(a0)
    except ValueError as exc:
        raise NoFiniteOrderInverse(
            "constant part of the constrained minor is singular; the minor "
            "has no finite-order inverse") from exc
    b0op = _const_mat_op(b0)
    rest = minor - _const_mat_op(a0)
    step = b0op.compose(rest)          # S = sum_k (-B0 N)^k B0
    inv = b0op
    term = b0op
    k = 0
    while True:
        term = step.compose(term)
        if term.is_zero():
            break
        k += 1
        if k > order_cap:
            raise NoFiniteOrderInverse(
                f"minor inverse ansatz did not close at differential order "
                f"cap {order_cap} (set {ORDER_CAP_ENV} to raise it)")
        if k % 2 == 1:
            inv = inv - term
        else:
            inv = inv + term
    ident = MatDiffOp.identity(rows)
    if minor.compose(inv) != ident or inv.compose(minor) != ident:
        raise NoFiniteOrderInverse(
            "computed ansatz is not a two-sided inverse of the minor")
    return inv


def dirac_reduce(setup: GradedSetup, pencil: PoissonPencil | None = None,
                 order_cap: int | None = None) -> ReducedPencil:
    """Dirac reduction of the full pencil by the constraints q^a = 0 on
    the complement coordinates, evaluated on the constraint surface:

        F~[i][j] = F[i][j] - F[i][b] S[b][a] F[a][j]

    with S the finite-order inverse of the constrained minor.  The
    constraint substitution happens before the inversion, so every
    block is already restricted to the slice."""
    alg = setup.algebra
    n = alg.dim
    m = setup.m
    if pencil is None:
        pencil = lie_poisson_pencil(setup)
    zero_images = {k: DiffPoly.zero() for k in range(m, n)}
    full = pencil.op.subs_fields(zero_images)
    sl = list(range(m))
    co = list(range(m, n))
    fqq = full.submatrix(sl, sl)
    fqc = full.submatrix(sl, co)
    fcq = full.submatrix(co, sl)
    fcc = full.submatrix(co, co)
    if order_cap is None:
        env = os.environ.get(ORDER_CAP_ENV)
        order_cap = int(env) if env else 2 * n
    s = invert_minor(fcc, order_cap)
    red = fqq - fqc.compose(s).compose(fcq)
    return ReducedPencil(PoissonPencil(red, setup.q_names), "dirac",
                         minor_inverse=s)


# -- tensor procedure ---------------------------------------------------------

def _bracket_rows(alg, x_coords, rows):
    """[x, v] where x has DiffPoly coordinates and v is a coordinate
    vector of operator rows: out[b] = sum structure-constant combos."""
    width = len(rows[0]) if rows else 0
    out = [[LinDiffOp.zero() for _ in range(width)] for _ in range(alg.dim)]
    for (i, j), terms in alg.brackets.items():
        left = None
        if not x_coords[i].is_zero() and any(not op.is_zero() for op in rows[j]):
            left = [op.scale(x_coords[i]) for op in rows[j]]
        right = None
        if not x_coords[j].is_zero() and any(not op.is_zero() for op in rows[i]):
            right = [op.scale(x_coords[j]) for op in rows[i]]
        if left is None and right is None:
            continue
        for k, c in terms:
            for col in range(width):
                acc = out[k][col]
                if left is not None and not left[col].is_zero():
                    acc = acc + left[col].scale_const(c)
                if right is not None and not right[col].is_zero():
                    acc = acc - right[col].scale_const(c)
                out[k][col] = acc
    return out


def tensor_procedure(setup: GradedSetup,
                     pencil: PoissonPencil | None = None) -> ReducedPencil:
    """Reduced pencil via covector lifting.

    A slice covector w is lifted to v = sum_i w_i xi^i + correction in
    the span of the complement duals; the correction is fixed degree by
    degree (descending) so that X = eps v_x + [e + q + lam a, v] pairs
    to zero with every complement dual.  The reduced entries are then
    D[i][j] = <X | xi^i> acting on w_j.  The pencil argument is unused
    beyond its field names and may be omitted; the lift works directly
    from the setup data.
    """
    alg = setup.algebra
    n = alg.dim
    m = setup.m
    grading = setup.grading
    duals = [list(v) for v in setup.duals]
    slice_b = [list(v) for v in setup.slice_basis]

    # Point coordinates of e + q + lam a in the algebra basis.
    pt = [DiffPoly.const(c) for c in setup.triple.e]
    for k in range(m):
        jet = DiffPoly.jet(k)
        for b, c in enumerate(slice_b[k]):
            if c:
                pt[b] = pt[b] + DiffPoly.const(c) * jet
    lam = DiffPoly.lam()
    for b, c in enumerate(setup.a):
        if c:
            pt[b] = pt[b] + lam * DiffPoly.const(c)

    comp_degree = [grading.degree_of(list(v)) for v in setup.complement]
    # Pairing rows <.|xi^I> precomputed as form-weighted coordinate rows.
    weights = [la.mat_vec(alg.form, duals[i]) for i in range(n)]

    # Correction rows R[alpha] (1 x m operator rows), alpha = m..n-1.
    r = {alpha: [LinDiffOp.zero()] * m for alpha in range(m, n)}
    eps_d = LinDiffOp((DiffPoly.zero(), DiffPoly.eps()))

    def current_x():
        v = [[LinDiffOp.zero()] * m for _ in range(n)]
        for i in range(m):
            for b, c in enumerate(duals[i]):
                if c:
                    v[b][i] = v[b][i] + LinDiffOp.of_poly(DiffPoly.const(c))
        for alpha in range(m, n):
            row = r[alpha]
            if all(op.is_zero() for op in row):
                continue
            for b, c in enumerate(duals[alpha]):
                if c:
                    for col in range(m):
                        if not row[col].is_zero():
                            v[b][col] = v[b][col] + row[col].scale_const(c)
        x = _bracket_rows(alg, pt, v)
        for b in range(n):
            for col in range(m):
                if not v[b][col].is_zero():
                    x[b][col] = x[b][col] + eps_d.compose(v[b][col])
        return x

    def pair_row(x, idx):
        row = [LinDiffOp.zero()] * m
        for b, wgt in enumerate(weights[idx]):
            if wgt:
                for col in range(m):
                    if not x[b][col].is_zero():
                        row[col] = row[col] + x[b][col].scale_const(wgt)
        return row

    degrees = sorted({d for d in comp_degree}, reverse=True)
    for d in degrees:
        betas = [alpha for alpha in range(m, n) if comp_degree[alpha - m] == d]
        alphas = [alpha for alpha in range(m, n)
                  if -comp_degree[alpha - m] == d - 2]
        x = current_x()
        cond = {beta: pair_row(x, beta) for beta in betas}
        if all(all(op.is_zero() for op in cond[beta]) for beta in betas):
            continue
        mat = [[alg.pair(alg.bracket(list(setup.triple.e), duals[alpha]),
                         duals[beta]) for alpha in alphas] for beta in betas]
        if len(alphas) != len(betas):
            raise ReductionError(
                f"lift sweep at degree {d}: {len(betas)} conditions but "
                f"{len(alphas)} correction directions")
        try:
            minv = la.inverse(mat)
        except ValueError as exc:
            raise ReductionError(
                f"lift sweep at degree {d}: ad e block is singular") from exc
        for ai, alpha in enumerate(alphas):
            delta = [LinDiffOp.zero()] * m
            for bi, beta in enumerate(betas):
                c = minv[ai][bi]
                if c:
                    for col in range(m):
                        if not cond[beta][col].is_zero():
                            delta[col] = delta[col] - cond[beta][col].scale_const(c)
            r[alpha] = [a + b for a, b in zip(r[alpha], delta)]

    x = current_x()
    for beta in range(m, n):
        row = pair_row(x, beta)
        if any(not op.is_zero() for op in row):
            raise ReductionError(
                "lift sweep did not close: a complement condition survives "
                "(element a may fail the degree assumptions)")
    red = MatDiffOp([pair_row(x, i) for i in range(m)])
    return ReducedPencil(PoissonPencil(red, setup.q_names), "tensor")


# -- gauge fixing --------------------------------------------------------------

def _bracket_polyvec(alg, x, y):
    """[x, y] for coordinate vectors of DiffPolys."""
    out = [DiffPoly.zero()] * alg.dim
    for (i, j), terms in alg.brackets.items():
        f = x[i] * y[j] - x[j] * y[i]
        if f.is_zero():
            continue
        for k, c in terms:
            out[k] = out[k] + DiffPoly.const(c) * f
    return out


def _second_class_directions(setup: GradedSetup):
    """Complement of the isotropic subspace inside its coisotropic
    partner.  Empty exactly when the isotropic choice is Lagrangian,
    in which case every slice constraint is first class."""
    rows = [list(v) for v in setup.iso]
    out = []
    for v in setup.ell_prime:
        cand = rows + [list(v)]
        if la.rank(cand) > len(rows):
            rows = cand
            out.append(list(v))
    return out


def restrict_to_S(setup: GradedSetup, order_cap=None) -> PoissonPencil:
    """Pencil on the affine subspace e + L(b_minus) in the coordinates
    of the chosen b_minus basis.

    The plain restriction (the b_minus block of the full pencil with
    the transverse coordinates frozen at zero) is the bracket of the
    gauge quotient only when all the constraints cutting out the
    subspace are first class, i.e. when the isotropic subspace equals
    its coisotropic partner.  Otherwise the directions of ell' not in
    ell are second class and the block needs a Dirac correction before
    the gauge generators see it.  The correcting minor is the constant
    symplectic form on those directions: its entries against e give
    omega, while the point, the element a and the eps term all pair to
    zero by degree and admissibility.  The correction therefore never
    raises the lam degree.
    """
    alg = setup.algebra
    p = len(setup.s_basis)
    frame = [list(v) for v in setup.s_basis]
    grads = [list(v) for v in setup.s_duals[:p]]
    grads += _second_class_directions(setup)
    n = len(grads)
    e_vec = list(setup.triple.e)
    a_vec = list(setup.a)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            g = alg.pair(grads[i], grads[j])
            br = alg.bracket(grads[i], grads[j])
            c0 = DiffPoly.const(-alg.pair(br, e_vec))
            for k in range(p):
                ck = alg.pair(br, frame[k])
                if ck:
                    c0 = c0 - DiffPoly.const(ck) * DiffPoly.jet(k)
            ca = alg.pair(br, a_vec)
            if ca:
                c0 = c0 - DiffPoly.lam() * DiffPoly.const(ca)
            row.append(LinDiffOp((c0, DiffPoly.eps() * DiffPoly.const(g))))
        rows.append(row)
    full = MatDiffOp(rows)
    if n == p:
        return PoissonPencil(full, setup.s_names)
    keep = list(range(p))
    drop = list(range(p, n))
    block = full.submatrix(keep, keep)
    cross = full.submatrix(keep, drop)
    minor = full.submatrix(drop, drop)
    ssor = full.submatrix(drop, keep)
    inv = invert_minor(minor, order_cap)
    corrected = block - cross.compose(inv).compose(ssor)
    return PoissonPencil(corrected, setup.s_names)


def ds_gauge_fix(setup: GradedSetup) -> GaugeFixMap:
    """Find the unique gauge transformation with logarithm in L(g_minus)
    moving a generic point of e + L(b_minus) onto the slice e + L(g_f),
    and the slice coordinates of the image.

    The transformed point is T = exp(-ad mm)(e + s) + eps phi(-ad mm)(mm_x)
    with phi(z) = sum_k z^k/(k+1)!; the coefficients of mm over the
    graded basis of g_minus are fixed degree by degree (descending) so
    that <T - e | xi^beta> = 0 for every complement dual."""
    alg = setup.algebra
    n = alg.dim
    m = setup.m
    grading = setup.grading
    p = len(setup.s_basis)
    gm_basis = graded_canonical_basis(alg, grading, [list(v) for v in setup.g_minus])
    gm_degree = [grading.degree_of(list(v)) for v in gm_basis]
    duals = [list(v) for v in setup.duals]
    comp_degree = [grading.degree_of(list(v)) for v in setup.complement]

    base = [DiffPoly.const(c) for c in setup.triple.e]
    for k in range(p):
        jet = DiffPoly.jet(k)
        for b, c in enumerate(setup.s_basis[k]):
            if c:
                base[b] = base[b] + DiffPoly.const(c) * jet

    mm = [DiffPoly.zero()] * len(gm_basis)
    depth = len(grading.degrees()) + 2

    def transformed():
        mvec = [DiffPoly.zero()] * n
        for c, v in zip(mm, gm_basis):
            if not c.is_zero():
                for b, vb in enumerate(v):
                    if vb:
                        mvec[b] = mvec[b] + c * DiffPoly.const(vb)
        # exp(-ad mm)(e + s)
        t = list(base)
        term = list(base)
        for k in range(1, depth + 1):
            term = _bracket_polyvec(alg, mvec, term)
            if all(c.is_zero() for c in term):
                break
            coeff = DiffPoly.const(Fraction((-1) ** k, math.factorial(k)))
            t = [acc + coeff * tb for acc, tb in zip(t, term)]
        else:
            raise ReductionError("exp series of the gauge action did not "
                                 "terminate (gauge log not nilpotent?)")
        # eps phi(-ad mm)(mm_x)
        term = [c.d() for c in mvec]
        eps = DiffPoly.eps()
        k = 0
        while True:
            coeff = DiffPoly.const(Fraction(1, math.factorial(k + 1)))
            for b in range(n):
                if not term[b].is_zero():
                    t[b] = t[b] + eps * coeff * term[b]
            k += 1
            term = _bracket_polyvec(alg, [DiffPoly.zero() - c for c in mvec], term)
            if all(c.is_zero() for c in term):
                break
            if k > depth:
                raise ReductionError("phi series of the gauge action did not "
                                     "terminate")
        return t

    def conditions(t):
        out = []
        for beta in range(n - m):
            dual = duals[m + beta]
            w = la.mat_vec(alg.form, dual)
            val = DiffPoly.zero()
            for b, wgt in enumerate(w):
                if wgt:
                    val = val + DiffPoly.const(wgt) * (t[b] - DiffPoly.const(setup.triple.e[b]))
            out.append(val)
        return out

    degrees = sorted(set(comp_degree), reverse=True)
    for d in degrees:
        t = transformed()
        cond = conditions(t)
        rows = [i for i, cd in enumerate(comp_degree) if cd == d]
        if all(cond[i].is_zero() for i in rows):
            continue
        cols = [g for g, gd in enumerate(gm_degree) if gd == d - 2]
        mat = [[alg.pair(alg.bracket(list(setup.triple.e), list(gm_basis[g])),
                         duals[m + i]) for g in cols] for i in rows]
        rhs = [DiffPoly.zero() - cond[i] for i in rows]
        sol = _solve_linear_diffpoly(mat, rhs)
        if sol is None:
            raise ReductionError(
                f"gauge sweep at degree {d}: conditions are inconsistent")
        for g, value in zip(cols, sol):
            mm[g] = mm[g] + value

    t = transformed()
    cond = conditions(t)
    if any(not c.is_zero() for c in cond):
        raise ReductionError("gauge sweep did not close: a complement "
                             "condition survives")
    gens = []
    for i in range(m):
        w = la.mat_vec(alg.form, duals[i])
        val = DiffPoly.zero()
        for b, wgt in enumerate(w):
            if wgt:
                val = val + DiffPoly.const(wgt) * (t[b] - DiffPoly.const(setup.triple.e[b]))
        gens.append(val)
    return GaugeFixMap(generators=tuple(gens), gauge_log=tuple(mm),
                       gauge_basis=tuple(tuple(v) for v in gm_basis),
                       s_names=setup.s_names, q_names=setup.q_names)


def _solve_linear_diffpoly(mat, rhs):
    """Solve mat * x = rhs for DiffPoly unknowns, mat rational (possibly
    rectangular).  Returns x with free unknowns zero, or None if the
    system is inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    a = [[frac_c for frac_c in row] for row in mat]
    b = list(rhs)
    piv_cols = []
    rix = 0
    for c in range(cols):
        piv = None
        for i in range(rix, rows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[rix], a[piv] = a[piv], a[rix]
        b[rix], b[piv] = b[piv], b[rix]
        inv = 1 / a[rix][c]
        a[rix] = [x * inv for x in a[rix]]
        b[rix] = b[rix] * DiffPoly.const(inv)
        for i in range(rows):
            if i != rix and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rix])]
                b[i] = b[i] - DiffPoly.const(f) * b[rix]
        piv_cols.append(c)
        rix += 1
        if rix == rows:
            break
    for i in range(rix, rows):
        if not b[i].is_zero():
            return None
    x = [DiffPoly.zero()] * cols
    for r_i, c in enumerate(piv_cols):
        x[c] = b[r_i]
    return x


def leibnitz_transform(gauge: GaugeFixMap, s_pencil: PoissonPencil,
                       setup: GradedSetup) -> ReducedPencil:
    """Reduced pencil from the generator map by the chain rule:
    D = (DQ) o F_S o (DQ)*, then written back in slice coordinates by
    evaluating on the gauge section (the unique point of each gauge
    orbit lying on the slice, where the b_minus coordinates are linear
    in the slice coordinates)."""
    p = len(gauge.s_names)
    m = len(gauge.q_names)
    dq = frechet_derivative(list(gauge.generators), p)
    d = dq.compose(s_pencil.op).compose(dq.adjoint())
    section = {}
    s_rows = [list(v) for v in setup.s_basis]
    for a_i in range(p):
        section[a_i] = DiffPoly.zero()
    for i in range(m):
        coeffs = la.coords_in_span(s_rows, list(setup.slice_basis[i]))
        if coeffs is None:
            raise SetupError("slice basis vector outside b_minus; cannot "
                             "evaluate the gauge section")
        for a_i, c in enumerate(coeffs):
            if c:
                section[a_i] = section[a_i] + DiffPoly.const(c) * DiffPoly.jet(i)
    red = d.subs_fields(section)
    return ReducedPencil(PoissonPencil(red, gauge.q_names), "ds", gauge=gauge)


def ds_reduce(setup: GradedSetup) -> ReducedPencil:
    """Full gauge-fixing route: fix the gauge, restrict the pencil to
    e + L(b_minus), transport it through the generator map."""
    gauge = ds_gauge_fix(setup)
    return leibnitz_transform(gauge, restrict_to_S(setup), setup)


# -- comparison and the transversal leading term -------------------------------

METHODS = {"tensor": tensor_procedure,
           "dirac": dirac_reduce,
           "ds": lambda setup, pencil=None: ds_reduce(setup)}


def compare_methods(setup: GradedSetup, methods=("tensor", "dirac", "ds")):
    """Run the requested methods and compare the resulting operators
    entry by entry.  Returns (agree, results, first_difference)."""
    results = {}
    for name in methods:
        if name not in METHODS:
            raise ValueError(f"unknown method {name!r}")
        results[name] = METHODS[name](setup)
    names = list(results)
    first_diff = None
    agree = True
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = results[names[i]], results[names[j]]
            if a.op != b.op:
                agree = False
                if first_diff is None:
                    mm = setup.m
                    for r_i in range(mm):
                        for c_i in range(mm):
                            if a.op.entry(r_i, c_i) != b.op.entry(r_i, c_i):
                                first_diff = (names[i], names[j], r_i, c_i)
                                break
                        if first_diff:
                            break
    return agree, results, first_diff


def leading_term(op: MatDiffOp):
    """Dispersionless finite-dimensional leading term: the order-0,
    eps^0, lam^0 part of every entry.  For reduced pencils this is the
    transversal Poisson structure; the entries are checked to be
    polynomial in the undifferentiated fields."""
    rows, cols = op.shape
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            c = op.entry(i, j).coeff(0).eval_eps(0).eval_lam(0)
            if c.max_order() > 0:
                raise ReductionError(
                    "leading term contains jet variables of positive order; "
                    "the eps grading of the stored operator is broken")
            row.append(c)
        out.append(row)
    return out


def finite_dirac_sample(setup: GradedSetup, values):
    """Finite-dimensional Dirac reduction of the affine Lie-Poisson
    matrix pi[I][J] = -<[xi^I, xi^J] | e + q> at a numeric slice point
    (values for q^1..q^m, constraints zero).  Independent of the
    operator machinery; used to spot-check the transversal structure.
    Returns the m x m rational matrix, or None if the constraint minor
    is singular at this point."""
    alg = setup.algebra
    n = alg.dim
    m = setup.m
    duals = [list(v) for v in setup.duals]
    z = list(setup.triple.e)
    for k in range(m):
        z = la.vec_add(z, la.vec_scale(frac(values[k]), list(setup.slice_basis[k])))
    pi = [[-alg.pair(alg.bracket(duals[i], duals[j]), z) for j in range(n)]
          for i in range(n)]
    pqq = [row[:m] for row in pi[:m]]
    pqc = [row[m:] for row in pi[:m]]
    pcq = [row[:m] for row in pi[m:]]
    pcc = [row[m:] for row in pi[m:]]
    try:
        s = la.inverse(pcc)
    except ValueError:
        return None
    corr = la.mat_mul(pqc, la.mat_mul(s, pcq))
    return [[pqq[i][j] - corr[i][j] for j in range(m)] for i in range(m)]
