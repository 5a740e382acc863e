"""Local Poisson pencils on loop spaces.

A structure is stored as a matrix differential operator F with
polynomial dependence on the loop coordinates, their x-derivatives, the
dispersion constant eps and the pencil parameter lam, under the fixed
convention

    {u_i(x), u_j(y)} = (1/eps) * sum_k F[i][j]_k  delta^(k)(x - y).

The 1/eps prefactor is never materialized: every operator in this
package keeps it implicit, which keeps all stored coefficients
polynomial in eps.  Brackets of local functionals computed here carry
the same overall flag, and since multiplication by eps is injective on
polynomials, skew-symmetry, Jacobi and Casimir statements about the
true brackets are equivalent to the stored-form identities that the
checks below evaluate.

For a graded setup the affine pencil on the chosen coordinate frame is

    F[I][J] = eps <xi^I|xi^J> d_x - <[xi^I, xi^J] | e + q + lam a>

with q = sum_K q^K xi_K, the coordinates being q^I(z) = <z - e | xi^I>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .diffalg import (DiffPoly, LinDiffOp, MatDiffOp, LocalFunctional,
                      functional_equal)

CONVENTION = "{u_i(x), u_j(y)} = (1/eps) * sum_k C_k delta^(k)(x-y)"


class PoissonStructureError(ValueError):
    """Raised when an operator fails a structural invariant."""


class LocalPoissonOp:
    """Skew matrix differential operator with named fields."""

    __slots__ = ("op", "names")

    def __init__(self, op: MatDiffOp, names, check=True):
        rows, cols = op.shape
        names = tuple(names)
        if rows != cols or len(names) != rows:
            raise PoissonStructureError("operator must be square with one "
                                        "name per field")
        if check and not (op + op.adjoint()).is_zero():
            raise PoissonStructureError("operator is not skew-adjoint")
        self.op = op
        self.names = names

    @property
    def size(self):
        return len(self.names)

    def entry(self, i, j) -> LinDiffOp:
        return self.op.entry(i, j)

    def apply_gradient(self, grad):
        return self.op.apply(grad)

    def bracket_density(self, f: DiffPoly, g: DiffPoly) -> DiffPoly:
        """Density of {F, G} (with the usual implicit 1/eps) for local
        functionals with densities f, g."""
        n = self.size
        gf = [f.euler(i) for i in range(n)]
        ap = self.op.apply([g.euler(i) for i in range(n)])
        out = DiffPoly.zero()
        for a, b in zip(gf, ap):
            out = out + a * b
        return out

    def jacobi_defect(self, f: DiffPoly, g: DiffPoly, h: DiffPoly) -> LocalFunctional:
        """Functional {F,{G,H}} + {G,{H,F}} + {H,{F,G}}; Jacobi holds on
        the triple iff it is the zero functional."""
        d = DiffPoly.zero()
        for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
            d = d + self.bracket_density(a, self.bracket_density(b, c))
        return LocalFunctional(d)

    def is_zero(self):
        return self.op.is_zero()

    def __eq__(self, other):
        return (isinstance(other, LocalPoissonOp) and self.names == other.names
                and self.op == other.op)

    def to_json(self):
        return {"convention": CONVENTION, "fields": list(self.names),
                "operator": self.op.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(MatDiffOp.from_json(data["operator"]), data["fields"])


class PoissonPencil(LocalPoissonOp):
    """Skew operator depending at most linearly on lam: F2 + lam F1."""

    __slots__ = ()

    def __init__(self, op: MatDiffOp, names, check=True):
        super().__init__(op, names, check=check)
        if check and op.lam_degree() > 1:
            raise PoissonStructureError("pencil must be linear in lam")

    def second(self) -> LocalPoissonOp:
        return LocalPoissonOp(self.op.lam_coeff(0), self.names, check=False)

    def first(self) -> LocalPoissonOp:
        return LocalPoissonOp(self.op.lam_coeff(1), self.names, check=False)

    def at_lam(self, value) -> LocalPoissonOp:
        return LocalPoissonOp(self.op.eval_lam(value), self.names, check=False)


def pencil_in_frame(alg, e_vec, a_vec, frame, duals, names) -> PoissonPencil:
    """Affine Lie-Poisson pencil in the coordinates of the given frame.

    frame[K] are the basis vectors carrying the coordinates, duals[I]
    the dual basis under the invariant form.  Entry (I, J) is
    eps <xi^I|xi^J> d_x - <[xi^I, xi^J] | e + sum_K u^K xi_K + lam a>.
    """
    n = len(frame)
    e_vec = list(e_vec)
    a_vec = list(a_vec)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            g = alg.pair(list(duals[i]), list(duals[j]))
            br = alg.bracket(list(duals[i]), list(duals[j]))
            c0 = DiffPoly.const(-alg.pair(br, e_vec))
            for k in range(n):
                ck = alg.pair(br, list(frame[k]))
                if ck:
                    c0 = c0 - DiffPoly.const(ck) * DiffPoly.jet(k)
            ca = alg.pair(br, a_vec)
            if ca:
                c0 = c0 - DiffPoly.lam() * DiffPoly.const(ca)
            c1 = DiffPoly.eps() * DiffPoly.const(g)
            row.append(LinDiffOp((c0, c1)))
        rows.append(row)
    return PoissonPencil(MatDiffOp(rows), names)


def lie_poisson_pencil(setup) -> PoissonPencil:
    """Pencil on the full coordinate frame of a GradedSetup: slice
    coordinates first (q1..qm), then the complement coordinates."""
    n = setup.algebra.dim
    names = tuple(f"q{i + 1}" for i in range(n))
    frame = list(setup.slice_basis) + list(setup.complement)
    return pencil_in_frame(setup.algebra, setup.triple.e, setup.a,
                           frame, list(setup.duals), names)


# -- Casimir family of the constraint functionals -----------------------------

@dataclass(frozen=True)
class CasimirReport:
    """Result of casimir_set_check; ok means every test passed."""

    n_generators: int
    first_structure_kills: bool
    closed_under_bracket: bool
    second_structure_matches: bool
    failures: tuple

    @property
    def ok(self):
        return (self.first_structure_kills and self.closed_under_bracket
                and self.second_structure_matches)

    def summary(self):
        if self.ok:
            return (f"casimir set ok: {self.n_generators} generators, "
                    "P1 annihilates all, closed family under P2")
        return "casimir set FAILED: " + "; ".join(self.failures)


def casimir_set_check(setup, pencil: PoissonPencil | None = None) -> CasimirReport:
    """For every b in the chosen basis of n_minus, the linear functional
    F_b with density sum_I <b|xi_I> q^I must be annihilated by the first
    structure, and the second structure must close on the family:
    {F_b, F_c} ~ -F_{[b,c]} with [b,c] again in n_minus."""
    alg = setup.algebra
    if pencil is None:
        pencil = lie_poisson_pencil(setup)
    frame = [list(v) for v in setup.slice_basis + setup.complement]
    n = len(frame)
    gens = [list(v) for v in setup.n_minus]
    failures = []

    def density_of(b):
        d = DiffPoly.zero()
        for i, v in enumerate(frame):
            c = alg.pair(b, v)
            if c:
                d = d + DiffPoly.const(c) * DiffPoly.jet(i)
        return d

    def gradient_of(b):
        return [DiffPoly.const(alg.pair(b, v)) for v in frame]

    p1 = pencil.first()
    p2 = pencil.second()
    kills = True
    for idx, b in enumerate(gens):
        image = p1.apply_gradient(gradient_of(b))
        if any(not c.is_zero() for c in image):
            kills = False
            failures.append(f"first structure does not annihilate generator {idx}")
    closed = True
    matches = True
    for i, b in enumerate(gens):
        gi = gradient_of(b)
        for j, c in enumerate(gens):
            bc = alg.bracket(b, c)
            if not la.in_span(gens, bc):
                closed = False
                failures.append(f"[b_{i}, b_{j}] leaves n_minus")
                continue
            ap = p2.apply_gradient(gradient_of(c))
            dens = DiffPoly.zero()
            for gcomp, acomp in zip(gi, ap):
                dens = dens + gcomp * acomp
            if not functional_equal(dens, DiffPoly.zero() - density_of(bc)):
                matches = False
                failures.append(
                    f"{{F_{i}, F_{j}}} does not equal -F_[b_{i},b_{j}]")
    return CasimirReport(n_generators=len(gens), first_structure_kills=kills,
                         closed_under_bracket=closed,
                         second_structure_matches=matches,
                         failures=tuple(failures))


# -- bracket tables ------------------------------------------------------------

def _delta(k):
    if k <= 3:
        return "delta" + "'" * k + "(x-y)"
    return f"delta^({k})(x-y)"


def _coeff_piece(poly: DiffPoly, names):
    s = poly.render(names=names)
    if poly.n_terms() > 1:
        return "(" + s + ")", False
    if s.startswith("-"):
        return s[1:], True
    return s, False


def bracket_table(pop: LocalPoissonOp, header=True) -> str:
    """Human-readable table, one line per unordered pair with a nonzero
    bracket, coefficients listed by decreasing derivative order of the
    delta function."""
    lines = []
    if header:
        lines.append("# convention: " + CONVENTION)
        lines.append("# stored coefficients C_k; pairs i <= j; zero pairs omitted")
    n = pop.size
    for i in range(n):
        for j in range(i, n):
            entry = pop.entry(i, j)
            if entry.is_zero():
                continue
            pieces = []
            for k in range(entry.order, -1, -1):
                c = entry.coeff(k)
                if c.is_zero():
                    continue
                body, neg = _coeff_piece(c, pop.names)
                pieces.append((body + " " + _delta(k), neg))
            text, neg0 = pieces[0]
            out = ("-" if neg0 else "") + text
            for text, neg in pieces[1:]:
                out += (" - " if neg else " + ") + text
            lines.append(f"{{{pop.names[i]}(x), {pop.names[j]}(y)}} = {out}")
    return "\n".join(lines) + "\n"


def bracket_table_json(pop: LocalPoissonOp) -> dict:
    entries = []
    n = pop.size
    for i in range(n):
        for j in range(i, n):
            entry = pop.entry(i, j)
            if entry.is_zero():
                continue
            ks = [[k, entry.coeff(k).to_json()]
                  for k in range(entry.order, -1, -1)
                  if not entry.coeff(k).is_zero()]
            entries.append([i, j, ks])
    return {"convention": CONVENTION, "fields": list(pop.names),
            "entries": entries}
