"""Sparse multivariate polynomials over an exact domain.

Monomials are plain exponent tuples.  :class:`Polynomial` is the general
(possibly inhomogeneous) sparse polynomial used by the Groebner engine;
:class:`HomogeneousForm` adds a declared degree and the degree bookkeeping
needed for projective work.  All values are immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .domains import QQ, DomainError

Monomial = tuple  # exponent tuple of fixed length nvars


# ---------------------------------------------------------------------------
# monomial helpers and orders
# ---------------------------------------------------------------------------

def monomial_degree(m: Monomial) -> int:
    return sum(m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b, i.e. every exponent of a is <= that of b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    q = tuple(x - y for x, y in zip(a, b))
    if any(e < 0 for e in q):
        raise ArithmeticError(f"monomial {a} not divisible by {b}")
    return q


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class MonomialOrder:
    """A monomial order given by a sort key; larger key = larger monomial."""

    name = "order"

    def key(self, m: Monomial):
        raise NotImplementedError

    def max(self, monomials):
        return max(monomials, key=self.key)

    def sorted_desc(self, monomials):
        return sorted(monomials, key=self.key, reverse=True)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))


class GrevlexOrder(MonomialOrder):
    """Graded reverse lexicographic; ties broken against the last variables."""

    name = "grevlex"

    def key(self, m: Monomial):
        return (sum(m), tuple(-e for e in reversed(m)))


class LexOrder(MonomialOrder):
    name = "lex"

    def key(self, m: Monomial):
        return m


class BlockOrder(MonomialOrder):
    """Eliminate the first ``nfirst`` variables: compare that block first
    (grevlex within each block).  Any monomial involving an eliminated
    variable beats every monomial free of them."""

    def __init__(self, nfirst: int):
        self.nfirst = nfirst
        self.name = f"block({nfirst})"

    def key(self, m: Monomial):
        a, b = m[: self.nfirst], m[self.nfirst:]
        return (GREVLEX.key(a), GREVLEX.key(b))


GREVLEX = GrevlexOrder()
LEX = LexOrder()


def monomial_basis(nvars: int, d: int, order: MonomialOrder = GREVLEX) -> list:
    """All degree-d monomials in nvars variables, descending in the order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, nvars)
    return order.sorted_desc(out)


# ---------------------------------------------------------------------------
# general sparse polynomial
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero
    scalars of one domain."""

    __slots__ = ("nvars", "domain", "terms")

    def __init__(self, nvars: int, terms: dict, domain=QQ, *, _clean=True):
        self.nvars = nvars
        self.domain = domain
        if _clean:
            clean = {}
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
                c = domain(c)
                if c != 0:
                    clean[tuple(m)] = c
            self.terms = clean
        else:
            self.terms = terms

    # ---- constructors ----

    @classmethod
    def zero(cls, nvars: int, domain=QQ):
        return cls(nvars, {}, domain, _clean=False)

    @classmethod
    def constant(cls, nvars: int, c, domain=QQ):
        return cls(nvars, {(0,) * nvars: c}, domain)

    @classmethod
    def variable(cls, i: int, nvars: int, domain=QQ):
        m = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {m: domain.one}, domain, _clean=False)

    @classmethod
    def linear_form(cls, coeffs: Sequence, domain=QQ):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = domain(c)
            if c != 0:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return cls(n, terms, domain, _clean=False)

    # ---- basic queries ----

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def coefficient(self, m: Monomial):
        return self.terms.get(tuple(m), self.domain.zero)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return order.max(self.terms)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_monomial(order)]

    # ---- arithmetic ----

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
        if self.domain != other.domain:
            raise DomainError("polynomials from different coefficient domains")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            if s is None:
                terms[m] = c
            else:
                s = s + c
                if s == 0:
                    del terms[m]
                else:
                    terms[m] = s
        return Polynomial(self.nvars, terms, self.domain, _clean=False)

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()},
                          self.domain, _clean=False)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if len(self.terms) > len(other.terms):
            f, g = other, self
        else:
            f, g = self, other
        terms = {}
        for mf, cf in f.terms.items():
            for mg, cg in g.terms.items():
                m = monomial_mul(mf, mg)
                c = cf * cg
                s = terms.get(m)
                if s is None:
                    terms[m] = c
                else:
                    s = s + c
                    if s == 0:
                        del terms[m]
                    else:
                        terms[m] = s
        return Polynomial(self.nvars, terms, self.domain, _clean=False)

    def scale(self, c):
        c = self.domain(c)
        if c == 0:
            return Polynomial.zero(self.nvars, self.domain)
        return Polynomial(self.nvars, {m: co * c for m, co in self.terms.items()},
                          self.domain, _clean=False)

    def term_mul(self, m: Monomial, c):
        """Multiply by the single term c * x^m."""
        c = self.domain(c)
        if c == 0:
            return Polynomial.zero(self.nvars, self.domain)
        return Polynomial(self.nvars,
                          {monomial_mul(mm, m): cc * c for mm, cc in self.terms.items()},
                          self.domain, _clean=False)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, self.domain.one, self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.nvars == other.nvars and self.domain == other.domain
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ---- evaluation and substitution ----

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, need {self.nvars}")
        pt = [self.domain(x) for x in point]
        total = self.domain.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def partial_derivative(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1:]
            c2 = c * e
            s = terms.get(dm)
            terms[dm] = c2 if s is None else s + c2
        return Polynomial(self.nvars, terms, self.domain)

    def substitute_variables(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute x_i -> images[i]; images share one arity and domain."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        n_out = images[0].nvars
        result = Polynomial.zero(n_out, self.domain)
        power_cache = [{} for _ in range(self.nvars)]
        one = Polynomial.constant(n_out, self.domain.one, self.domain)
        for m, c in self.terms.items():
            term = one.scale(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                pw = power_cache[i].get(e)
                if pw is None:
                    pw = images[i] ** e
                    power_cache[i][e] = pw
                term = term * pw
            result = result + term
        return result

    def dehomogenize(self, i: int) -> "Polynomial":
        """Set x_i = 1 and drop that variable (nvars shrinks by one)."""
        terms = {}
        for m, c in self.terms.items():
            dm = m[:i] + m[i + 1:]
            s = terms.get(dm)
            terms[dm] = c if s is None else s + c
        return Polynomial(self.nvars - 1, terms, self.domain)

    def homogeneous_components(self) -> dict:
        """Split into degree -> homogeneous Polynomial."""
        comps = {}
        for m, c in self.terms.items():
            comps.setdefault(sum(m), {})[m] = c
        return {d: Polynomial(self.nvars, t, self.domain, _clean=False)
                for d, t in comps.items()}

    def map_domain(self, domain) -> "Polynomial":
        """Reinterpret the coefficients in another domain (e.g. reduce mod p)."""
        return Polynomial(self.nvars, {m: domain(c) for m, c in self.terms.items()}, domain)

    # ---- printing ----

    def to_string(self, names: Sequence[str] | None = None,
                  order: MonomialOrder = GREVLEX) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for m in order.sorted_desc(self.terms):
            c = self.terms[m]
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                coeff_txt = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            else:
                neg = False
                coeff_txt = str(c)
            if factors and coeff_txt == "1":
                body = "*".join(factors)
            elif factors:
                body = coeff_txt + "*" + "*".join(factors)
            else:
                body = coeff_txt
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        if text.startswith("+ "):
            text = text[2:]
        elif text.startswith("- "):
            text = "-" + text[2:]
        return text

    def __repr__(self):
        return f"<Polynomial {self.to_string()}>"


# ---------------------------------------------------------------------------
# homogeneous forms
# ---------------------------------------------------------------------------

class InhomogeneousError(ValueError):
    """Raised when a homogeneous form is built from mixed-degree terms."""

    def __init__(self, degrees):
        degs = sorted(degrees)
        super().__init__(f"not homogeneous: terms of degrees {degs[0]} and {degs[-1]}")
        self.degrees = degs


class HomogeneousForm(Polynomial):
    """A homogeneous polynomial with an explicitly declared degree.

    The declared degree survives even for the zero form, so degree
    bookkeeping (products, derivatives, restrictions) never becomes
    undefined.
    """

    __slots__ = ("degree",)

    def __init__(self, nvars: int, terms: dict, domain=QQ, degree: int | None = None):
        super().__init__(nvars, terms, domain)
        degs = {sum(m) for m in self.terms}
        if len(degs) > 1:
            raise InhomogeneousError(degs)
        if degs:
            found = degs.pop()
            if degree is not None and degree != found:
                raise InhomogeneousError({degree, found})
            degree = found
        elif degree is None:
            degree = 0
        self.degree = degree

    @classmethod
    def from_polynomial(cls, p: Polynomial, degree: int | None = None) -> "HomogeneousForm":
        return cls(p.nvars, p.terms, p.domain, degree=degree)

    @classmethod
    def zero_form(cls, nvars: int, degree: int, domain=QQ):
        return cls(nvars, {}, domain, degree=degree)

    def __add__(self, other):
        if isinstance(other, HomogeneousForm):
            if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
                raise InhomogeneousError({self.degree, other.degree})
            deg = other.degree if self.is_zero() else self.degree
            return HomogeneousForm.from_polynomial(Polynomial.__add__(self, other), deg)
        return Polynomial.__add__(self, other)

    def __neg__(self):
        return HomogeneousForm.from_polynomial(Polynomial.__neg__(self), self.degree)

    def __sub__(self, other):
        if isinstance(other, HomogeneousForm):
            return self + (-other)
        return Polynomial.__sub__(self, other)

    def __mul__(self, other):
        if isinstance(other, HomogeneousForm):
            return HomogeneousForm.from_polynomial(
                Polynomial.__mul__(self, other), self.degree + other.degree)
        return Polynomial.__mul__(self, other)

    def scale(self, c):
        return HomogeneousForm.from_polynomial(Polynomial.scale(self, c), self.degree)

    def partial_derivative(self, i: int) -> "HomogeneousForm":
        return HomogeneousForm.from_polynomial(
            Polynomial.partial_derivative(self, i), max(self.degree - 1, 0))

    def map_domain(self, domain) -> "HomogeneousForm":
        return HomogeneousForm.from_polynomial(
            Polynomial.map_domain(self, domain), self.degree)

    def substitute_linear(self, matrix) -> "HomogeneousForm":
        """Apply the coordinate change x -> M x, i.e. return f(Mx).

        ``matrix`` is an invertible n x n ExactMatrix (or nested sequence)
        over the form's domain.
        """
        rows = matrix.rows_list() if hasattr(matrix, "rows_list") else [list(r) for r in matrix]
        n = self.nvars
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("coordinate change must be a square matrix of matching size")
        _require_invertible(rows, self.domain)
        images = [Polynomial.linear_form(rows[i], self.domain) for i in range(n)]
        return HomogeneousForm.from_polynomial(
            self.substitute_variables(images), self.degree)

    def gradient(self) -> list:
        return [self.partial_derivative(i) for i in range(self.nvars)]


def _require_invertible(rows, domain):
    # plain Gaussian elimination on a copy; avoids importing linalg here
    n = len(rows)
    m = [[domain(x) for x in r] for r in rows]
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if m[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular coordinate change")
        m[row], m[piv] = m[piv], m[row]
        inv = domain.one / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        row += 1


def form_from_coeffs(nvars: int, degree: int, coeffs: Iterable, domain=QQ,
                     order: MonomialOrder = GREVLEX) -> HomogeneousForm:
    """Build a degree-d form from coefficients listed against monomial_basis."""
    basis = monomial_basis(nvars, degree, order)
    coeffs = list(coeffs)
    if len(coeffs) != len(basis):
        raise ValueError(f"need {len(basis)} coefficients, got {len(coeffs)}")
    return HomogeneousForm(nvars, dict(zip(basis, coeffs)), domain, degree=degree)


def exact_divide(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX):
    """Single-divisor division: return (q, r) with f = q*g + r, no term of r
    divisible by the leading monomial of g."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f._check(g)
    lm = g.leading_monomial(order)
    lc = g.terms[lm]
    q = Polynomial.zero(f.nvars, f.domain)
    r = Polynomial.zero(f.nvars, f.domain)
    p = f
    while not p.is_zero():
        m = p.leading_monomial(order)
        c = p.terms[m]
        if monomial_divides(lm, m):
            t = Polynomial(f.nvars, {monomial_div(m, lm): c / lc}, f.domain, _clean=False)
            q = q + t
            p = p - t * g
        else:
            t = Polynomial(f.nvars, {m: c}, f.domain, _clean=False)
            r = r + t
            p = p - t
    return q, r
