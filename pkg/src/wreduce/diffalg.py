"""Exact differential-polynomial algebra on jet variables.

A DiffPoly is a finite sum of terms

    coefficient * lam^p * eps^q * prod_r u^{i_r,(k_r)}^{e_r}

with rational coefficients, where u^{i,(k)} is the k-th x-derivative of
the i-th field and lam, eps are commuting central formal parameters
(both with nonnegative powers).  On top of DiffPoly sit linear
differential operators sum_k a_k D^k in the total derivative D, matrices
of those, and local functionals (densities modulo total derivatives and
constants).

Everything is immutable value semantics over fractions.Fraction; term
order is canonical (graded, then lexicographic in lam, eps and the jet
variables ordered by (field, order)), so equality, rendering and the
JSON form are all deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .linalg import frac

# A monomial is a sorted tuple of ((field, order), exponent), exponent >= 1.
# A term key is (lam_power, eps_power, monomial).

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for var, e in m2:
        d[var] = d.get(var, 0) + e
    return tuple(sorted(d.items()))


def _term_sort_key(key):
    lam, eps, mono = key
    total = lam + eps + sum(e for _, e in mono)
    return (total, lam, eps, mono)


class DiffPoly:
    """Sparse differential polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict key -> nonzero coefficient; trusted, not copied.
        # Coefficients are Fractions, or plain ints in denominator-cleared
        # internal computations; the ring operations preserve either type.
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        c = frac(c)
        if c == 0:
            return cls()
        return cls({(0, 0, ()): c})

    @classmethod
    def jet(cls, field, order=0):
        if field < 0 or order < 0:
            raise ValueError("field index and derivative order must be >= 0")
        return cls({(0, 0, (((field, order), 1),)): _ONE})

    @classmethod
    def lam(cls):
        return cls({(1, 0, ()): _ONE})

    @classmethod
    def eps(cls, power=1):
        return cls({(0, power, ()): _ONE})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for (l1, e1, m1), c1 in self.terms.items():
            for (l2, e2, m2), c2 in other.terms.items():
                k = (l1 + l2, e1 + e2, _mono_mul(m1, m2))
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    del out[k]
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = DiffPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def fields(self):
        """Sorted field indices that occur in some jet variable."""
        out = set()
        for _, _, mono in self.terms:
            for (i, _), _ in mono:
                out.add(i)
        return sorted(out)

    def max_order(self, field=None):
        """Highest derivative order present (of one field, or overall); -1 if none."""
        best = -1
        for _, _, mono in self.terms:
            for (i, k), _ in mono:
                if field is None or i == field:
                    best = max(best, k)
        return best

    def lam_degree(self):
        return max((k[0] for k in self.terms), default=0)

    def eps_degree(self):
        return max((k[1] for k in self.terms), default=0)

    def coeff_lam(self, power):
        """Coefficient of lam^power, as a DiffPoly free of lam."""
        return DiffPoly({(0, e, m): c for (l, e, m), c in self.terms.items()
                         if l == power})

    def coeff_eps(self, power):
        return DiffPoly({(l, 0, m): c for (l, e, m), c in self.terms.items()
                         if e == power})

    def constant_term(self):
        """The coefficient at lam = eps = 0, all jets = 0."""
        return self.terms.get((0, 0, ()), _ZERO)

    def eval_lam(self, value):
        value = frac(value)
        out = {}
        for (l, e, m), c in self.terms.items():
            key = (0, e, m)
            s = out.get(key, 0) + c * value ** l
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return DiffPoly(out)

    def eval_eps(self, value):
        value = frac(value)
        out = {}
        for (l, e, m), c in self.terms.items():
            key = (l, 0, m)
            s = out.get(key, 0) + c * value ** e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return DiffPoly(out)

    # -- calculus ----------------------------------------------------------

    def d(self):
        """Total x-derivative: u^{i,(k)} -> u^{i,(k+1)}, lam and eps constant."""
        out = {}
        for (l, e, mono), c in self.terms.items():
            for idx, ((i, k), exp) in enumerate(mono):
                rest = mono[:idx] + ((((i, k)), exp - 1),) + mono[idx + 1:]
                rest = tuple(v for v in rest if v[1] > 0)
                key = (l, e, _mono_mul(rest, (((i, k + 1), 1),)))
                s = out.get(key, 0) + c * exp
                if s:
                    out[key] = s
                else:
                    del out[key]
        return DiffPoly(out)

    def partial(self, field, order):
        """Partial derivative with respect to the jet variable u^{field,(order)}."""
        var = (field, order)
        out = {}
        for (l, e, mono), c in self.terms.items():
            for idx, (v, exp) in enumerate(mono):
                if v != var:
                    continue
                rest = mono[:idx] + ((v, exp - 1),) + mono[idx + 1:]
                rest = tuple(t for t in rest if t[1] > 0)
                k = (l, e, rest)
                s = out.get(k, 0) + c * exp
                if s:
                    out[k] = s
                else:
                    del out[k]
                break
        return DiffPoly(out)

    def euler(self, field):
        """Variational derivative sum_k (-D)^k (d/du^{field,(k)}) of this density.

        Evaluated inside out: acc_k = partial_k - D(acc_{k+1}), so the
        total derivative runs once per order instead of once per power.
        """
        top = self.max_order(field)
        if top < 0:
            return DiffPoly.zero()
        acc = self.partial(field, top)
        for k in range(top - 1, -1, -1):
            acc = self.partial(field, k) - acc.d()
        return acc

    def subs_fields(self, images):
        """Substitute u^{i,(k)} -> D^k(images[i]) for every field i in images.

        Fields absent from the mapping are left untouched.
        """
        needed = {}
        for _, _, mono in self.terms:
            for (i, k), _ in mono:
                if i in images:
                    needed[i] = max(needed.get(i, 0), k)
        chains = {}
        for i, top in needed.items():
            chain = [images[i]]
            for _ in range(top):
                chain.append(chain[-1].d())
            chains[i] = chain
        out = DiffPoly()
        for (l, e, mono), c in self.terms.items():
            term = DiffPoly({(l, e, ()): c})
            for (i, k), exp in mono:
                factor = (chains[i][k] if i in chains
                          else DiffPoly.jet(i, k))
                term = term * factor ** exp
            out = out + term
        return out

    # -- rendering and serialization ----------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def render(self, names=None):
        """Canonical text form.

        Jet variables print as "u{i}_{k}" or, when names are given, as
        names[i] with k primes (k <= 3) or "^(k)" beyond that.
        """
        if self.is_zero():
            return "0"
        parts = []
        for (l, e, mono), c in self.sorted_terms():
            factors = []
            if l == 1:
                factors.append("lam")
            elif l > 1:
                factors.append(f"lam^{l}")
            if e == 1:
                factors.append("eps")
            elif e > 1:
                factors.append(f"eps^{e}")
            for (i, k), exp in mono:
                if names is None:
                    v = f"u{i}_{k}"
                else:
                    base = names[i]
                    v = base + ("'" * k if k <= 3 else f"^({k})")
                factors.append(v if exp == 1 else f"{v}^{exp}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    def n_terms(self):
        return len(self.terms)

    def to_json(self):
        """Canonical JSON form: list of [coeff, lam, eps, [[field, order, exp], ...]]."""
        return [[str(c), l, e, [[i, k, exp] for (i, k), exp in mono]]
                for (l, e, mono), c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data):
        out = {}
        for coeff, l, e, jets in data:
            mono = tuple(sorted(((int(i), int(k)), int(exp)) for i, k, exp in jets))
            key = (int(l), int(e), mono)
            if key in out:
                raise ValueError("duplicate term in DiffPoly JSON")
            c = frac(coeff)
            if c != 0:
                out[key] = c
        return cls(out)

    def __repr__(self):
        return f"DiffPoly({self.render()})"


def _coerce(x):
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return DiffPoly.const(x)
    return NotImplemented


def total_derivative(p: DiffPoly) -> DiffPoly:
    return p.d()


class LinDiffOp:
    """Finite-order linear differential operator sum_k a_k D^k, a_k DiffPoly."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def of_poly(cls, p):
        """Multiplication operator by the DiffPoly p."""
        return cls((_coerce(p),))

    @classmethod
    def identity(cls):
        return cls((DiffPoly.const(1),))

    @classmethod
    def d(cls, k=1, coeff=1):
        """coeff * D^k."""
        c = _coerce(coeff)
        return cls((DiffPoly.zero(),) * k + (c,))

    @property
    def order(self):
        return len(self.coeffs) - 1 if self.coeffs else 0

    def coeff(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else DiffPoly.zero()

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return LinDiffOp([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self):
        return LinDiffOp([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, LinDiffOp) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, p):
        """Left multiplication by the function p (no derivatives of p appear)."""
        p = _coerce(p)
        return LinDiffOp([p * c for c in self.coeffs])

    def scale_const(self, c):
        """Multiplication by a rational constant."""
        c = frac(c)
        if c == 0:
            return LinDiffOp.zero()
        return LinDiffOp([DiffPoly({k: v * c for k, v in p.terms.items()})
                          for p in self.coeffs])

    def compose(self, other):
        """Operator product self . other in expanded standard form.

        Uses D^k . b = sum_j C(k,j) (D^j b) D^(k-j).
        """
        out = {}
        for k, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for l, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                bj = b
                for j in range(k + 1):
                    c = a * bj
                    if not c.is_zero():
                        deg = k - j + l
                        out[deg] = out.get(deg, DiffPoly.zero()) + comb(k, j) * c
                    if j < k:
                        bj = bj.d()
        n = max(out) + 1 if out else 0
        return LinDiffOp([out.get(k, DiffPoly.zero()) for k in range(n)])

    def adjoint(self):
        """Formal adjoint sum_k (-D)^k . a_k, expanded to standard form."""
        out = LinDiffOp.zero()
        for k, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            sign = 1 if k % 2 == 0 else -1
            out = out + LinDiffOp.d(k, sign).compose(LinDiffOp.of_poly(a))
        return out

    def apply(self, p):
        """Apply to a DiffPoly: sum_k a_k D^k(p)."""
        p = _coerce(p)
        out = DiffPoly.zero()
        dp = p
        for k, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + a * dp
            if k < len(self.coeffs) - 1:
                dp = dp.d()
        return out

    def map_coeffs(self, f):
        return LinDiffOp([f(c) for c in self.coeffs])

    def render(self, names=None):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            body = c.render(names)
            if c.n_terms() > 1:
                body = "(" + body + ")"
            if k == 0:
                parts.append(body)
            elif k == 1:
                parts.append(f"{body} D")
            else:
                parts.append(f"{body} D^{k}")
        return " + ".join(parts)

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([DiffPoly.from_json(c) for c in data])

    def __repr__(self):
        return f"LinDiffOp({self.render()})"


class MatDiffOp:
    """Rectangular matrix of LinDiffOp entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ValueError("matrix rows have inconsistent lengths")
        self.rows = rows

    @classmethod
    def zero(cls, r, c):
        return cls([[LinDiffOp.zero()] * c for _ in range(r)])

    @classmethod
    def identity(cls, n):
        return cls([[LinDiffOp.identity() if i == j else LinDiffOp.zero()
                     for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def entry(self, i, j):
        return self.rows[i][j]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("matrix shapes do not match")
        return MatDiffOp([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return MatDiffOp([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, MatDiffOp) and self.rows == other.rows

    def compose(self, other):
        r1, c1 = self.shape
        r2, c2 = other.shape
        if c1 != r2:
            raise ValueError("matrix shapes do not match")
        out = []
        for i in range(r1):
            row = []
            for j in range(c2):
                acc = LinDiffOp.zero()
                for k in range(c1):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a.compose(b)
                row.append(acc)
            out.append(row)
        return MatDiffOp(out)

    def adjoint(self):
        """(A*)_{ji} = (-D)^k . a^{ij}_k, i.e. transpose of entrywise adjoints."""
        r, c = self.shape
        return MatDiffOp([[self.rows[i][j].adjoint() for i in range(r)]
                          for j in range(c)])

    def apply(self, vector):
        r, c = self.shape
        if len(vector) != c:
            raise ValueError("matrix shapes do not match")
        out = []
        for i in range(r):
            acc = DiffPoly.zero()
            for j in range(c):
                if not self.rows[i][j].is_zero():
                    acc = acc + self.rows[i][j].apply(vector[j])
            out.append(acc)
        return out

    def submatrix(self, row_idx, col_idx):
        return MatDiffOp([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def map_entries(self, f):
        return MatDiffOp([[f(a) for a in r] for r in self.rows])

    def map_coeffs(self, f):
        return self.map_entries(lambda op: op.map_coeffs(f))

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def max_order(self):
        return max((a.order for r in self.rows for a in r if not a.is_zero()),
                   default=0)

    def lam_coeff(self, power):
        return self.map_coeffs(lambda p: p.coeff_lam(power))

    def lam_degree(self):
        return max((p.lam_degree() for r in self.rows for a in r
                    for p in a.coeffs), default=0)

    def eval_lam(self, value):
        return self.map_coeffs(lambda p: p.eval_lam(value))

    def eval_eps(self, value):
        return self.map_coeffs(lambda p: p.eval_eps(value))

    def subs_fields(self, images):
        return self.map_coeffs(lambda p: p.subs_fields(images))

    def render(self, names=None):
        lines = []
        r, c = self.shape
        for i in range(r):
            for j in range(c):
                if not self.rows[i][j].is_zero():
                    lines.append(f"[{i},{j}] {self.rows[i][j].render(names)}")
        return "\n".join(lines) if lines else "0"

    def to_json(self):
        r, c = self.shape
        return {"rows": r, "cols": c,
                "entries": [[op.to_json() for op in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data):
        m = cls([[LinDiffOp.from_json(e) for e in row] for row in data["entries"]])
        if m.shape != (data["rows"], data["cols"]):
            raise ValueError("matrix shape does not match entries")
        return m

    def __repr__(self):
        return f"MatDiffOp({self.shape[0]}x{self.shape[1]})"


class LocalFunctional:
    """Integral of a density over the circle: density modulo Im D and constants.

    The only notion of equality is agreement of all variational
    derivatives (the Euler operator kernel on polynomial densities is
    exactly constants plus total derivatives).
    """

    __slots__ = ("density",)

    def __init__(self, density):
        self.density = _coerce(density)

    def variational_derivative(self, field):
        return self.density.euler(field)

    def gradient(self, n_fields):
        return [self.density.euler(i) for i in range(n_fields)]

    def is_zero(self):
        return all(self.density.euler(i).is_zero()
                   for i in self.density.fields())

    def __add__(self, other):
        return LocalFunctional(self.density + other.density)

    def __sub__(self, other):
        return LocalFunctional(self.density - other.density)

    def __neg__(self):
        return LocalFunctional(-self.density)

    def __eq__(self, other):
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        return functional_equal(self, other)

    def __repr__(self):
        return f"LocalFunctional({self.density.render()})"


def variational_derivative(f: LocalFunctional, field: int) -> DiffPoly:
    return f.variational_derivative(field)


def functional_equal(f, g) -> bool:
    """Equality of local functionals (given directly or by density)."""
    fd = f.density if isinstance(f, LocalFunctional) else _coerce(f)
    gd = g.density if isinstance(g, LocalFunctional) else _coerce(g)
    diff = fd - gd
    return all(diff.euler(i).is_zero() for i in diff.fields())


def frechet_derivative(q, n_fields) -> MatDiffOp:
    """Linearization of the substitution map q: (DQ)^i_j = sum_k dq^i/du^{j,(k)} D^k."""
    rows = []
    for qi in q:
        row = []
        for j in range(n_fields):
            coeffs = [qi.partial(j, k) for k in range(qi.max_order(j) + 1)]
            row.append(LinDiffOp(coeffs))
        rows.append(row)
    return MatDiffOp(rows)


def adjoint(a: MatDiffOp) -> MatDiffOp:
    return a.adjoint()


def compose(a: MatDiffOp, b: MatDiffOp) -> MatDiffOp:
    return a.compose(b)


def apply(a: MatDiffOp, v) -> list:
    return a.apply(v)
