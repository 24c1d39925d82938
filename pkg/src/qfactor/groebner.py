"""Buchberger Groebner engine with elimination orders and saturation.

Plain Buchberger with the normal selection strategy and the Gebauer-Moeller
pair criteria; no F4/F5.  Target ideals live in at most six variables at
degree four or so, where simplicity and auditability beat sophistication.
Hard resource caps (processed pairs, coefficient bit length) fail loudly
and suggest a prime-field rerun instead of stalling.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from .domains import QQ, DomainError
from .polynomials import (GREVLEX, BlockOrder, MonomialOrder, Polynomial,
                          monomial_basis, monomial_div, monomial_divides,
                          monomial_lcm, monomial_mul)

DEFAULT_MAX_PAIRS = 20000
DEFAULT_MAX_COEFF_BITS = 100000


class GroebnerError(RuntimeError):
    pass


class ResourceLimitError(GroebnerError):
    """A configured cap was exceeded; the message names the cap and, for
    rational runs, suggests retrying over a large prime field."""


class NotZeroDimensionalError(GroebnerError):
    pass


class Ideal:
    """A generating set with an ambient interpretation tag."""

    __slots__ = ("nvars", "generators", "ambient")

    def __init__(self, nvars: int, generators, ambient: str = "affine"):
        gens = []
        for g in generators:
            if g.nvars != nvars:
                raise ValueError("generator arity mismatch")
            if not g.is_zero():
                gens.append(g)
        if ambient not in ("affine", "projective"):
            raise ValueError(f"unknown ambient {ambient!r}")
        self.nvars = nvars
        self.generators = gens
        self.ambient = ambient

    @property
    def domain(self):
        return self.generators[0].domain if self.generators else QQ

    def map_domain(self, domain) -> "Ideal":
        return Ideal(self.nvars, [g.map_domain(domain) for g in self.generators],
                     self.ambient)

    def __repr__(self):
        return f"<Ideal of {len(self.generators)} generators in {self.nvars} vars ({self.ambient})>"


class GroebnerBasis:
    """A reduced, monic Groebner basis together with its order."""

    __slots__ = ("nvars", "order", "elements", "domain", "is_reduced")

    def __init__(self, nvars: int, elements, order: MonomialOrder, domain):
        self.nvars = nvars
        self.elements = list(elements)
        self.order = order
        self.domain = domain
        self.is_reduced = True

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit_ideal(self) -> bool:
        return any(g.total_degree() == 0 for g in self.elements)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def verify(self) -> bool:
        """Buchberger postcondition: every S-polynomial reduces to zero."""
        packed = [_pack(g, self.order) for g in self.elements]
        for a, b in combinations(packed, 2):
            s = _s_polynomial(a, b, self.order)
            if _reduce_full(s, packed, self.order) .terms:
                return False
        return True

    def __repr__(self):
        return f"<GroebnerBasis of {len(self.elements)} elements, {self.order}>"


# ---------------------------------------------------------------------------
# internal representation: (poly, lm, lc) with coefficient normalization
# ---------------------------------------------------------------------------

def _pack(g: Polynomial, order: MonomialOrder):
    lm = g.leading_monomial(order)
    return (g, lm, g.terms[lm])


def _normalize(g: Polynomial, max_bits: int) -> Polynomial:
    """Scale to a canonical small representative: primitive integer
    coefficients over Q (positive leading sign left to monic step), monic
    over a prime field."""
    if g.is_zero():
        return g
    if isinstance(next(iter(g.terms.values())), Fraction):
        den = 1
        for c in g.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in g.terms.values():
            num = gcd(num, abs(c.numerator * (den // c.denominator)))
        factor = Fraction(den, num)
        out = {m: c * factor for m, c in g.terms.items()}
        bits = max(abs(c.numerator).bit_length() for c in out.values())
        if bits > max_bits:
            raise ResourceLimitError(
                f"coefficient size {bits} bits exceeds the cap {max_bits}; "
                "consider rerunning over a large prime field (domain fp)")
        return Polynomial(g.nvars, out, g.domain, _clean=False)
    lc = g.leading_coefficient(GREVLEX)
    return g.scale(g.domain.one / lc)


def _monic(g: Polynomial, order: MonomialOrder) -> Polynomial:
    return g.scale(g.domain.one / g.terms[g.leading_monomial(order)])


def _s_polynomial(a, b, order: MonomialOrder) -> Polynomial:
    f, lmf, lcf = a
    g, lmg, lcg = b
    l = monomial_lcm(lmf, lmg)
    t1 = f.term_mul(monomial_div(l, lmf), f.domain.one / lcf)
    t2 = g.term_mul(monomial_div(l, lmg), g.domain.one / lcg)
    return t1 - t2


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    return _s_polynomial(_pack(f, order), _pack(g, order), order)


def _reduce_full(p: Polynomial, divisors, order: MonomialOrder) -> Polynomial:
    """Full multivariate division remainder of p by the packed divisors."""
    work = dict(p.terms)
    remainder = {}
    key = order.key
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = None
        for g, lmg, lcg in divisors:
            if monomial_divides(lmg, m):
                hit = (g, lmg, lcg)
                break
        if hit is None:
            remainder[m] = c
            continue
        g, lmg, lcg = hit
        factor = c / lcg
        shift = monomial_div(m, lmg)
        for mg, cg in g.terms.items():
            if mg == lmg:
                continue
            mm = monomial_mul(mg, shift)
            s = work.get(mm)
            v = cg * factor
            if s is None:
                work[mm] = -v
            else:
                s = s - v
                if s == 0:
                    del work[mm]
                else:
                    work[mm] = s
    return Polynomial(p.nvars, remainder, p.domain, _clean=False)


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moeller pair update
# ---------------------------------------------------------------------------

def _update(G, B, ih, packed):
    """Gebauer-Moeller update of the basis index set and pair queue."""
    mh = packed[ih][1]
    C = set(G)
    D = set()
    while C:
        ig = C.pop()
        mg = packed[ig][1]
        lcm_hg = monomial_lcm(mh, mg)

        def lcm_divides(ip):
            return monomial_divides(monomial_lcm(mh, packed[ip][1]), lcm_hg)

        if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ip) for ip in C)
                and not any(lcm_divides(pr[1]) for pr in D)):
            D.add((ih, ig))
    E = set()
    while D:
        ih2, ig = D.pop()
        mg = packed[ig][1]
        if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
            E.add((ih2, ig))
    B_new = set()
    while B:
        ig1, ig2 = B.pop()
        l = monomial_lcm(packed[ig1][1], packed[ig2][1])
        if (not monomial_divides(mh, l)
                or monomial_lcm(packed[ig1][1], mh) == l
                or monomial_lcm(packed[ig2][1], mh) == l):
            B_new.add((ig1, ig2))
    B_new |= E
    G_new = {ig for ig in G if not monomial_divides(mh, packed[ig][1])}
    G_new.add(ih)
    return G_new, B_new


def buchberger(ideal, order: MonomialOrder = GREVLEX,
               max_pairs: int = DEFAULT_MAX_PAIRS,
               max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> GroebnerBasis:
    """Compute the reduced Groebner basis of an Ideal (or generator list)."""
    if isinstance(ideal, Ideal):
        gens = ideal.generators
        nvars = ideal.nvars
    else:
        gens = [g for g in ideal if not g.is_zero()]
        if not gens:
            raise ValueError("cannot infer arity of the zero ideal; pass an Ideal")
        nvars = gens[0].nvars
    domain = gens[0].domain if gens else QQ
    if not gens:
        return GroebnerBasis(nvars, [], order, domain)

    packed = []
    seen = set()
    for g in gens:
        g = _normalize(g, max_coeff_bits)
        key = frozenset(g.terms.items())
        if key not in seen:
            seen.add(key)
            packed.append(_pack(g, order))
    packed.sort(key=lambda t: order.key(t[1]))

    G: set = set()
    B: set = set()
    for i in range(len(packed)):
        G, B = _update(G, B, i, packed)

    processed = 0
    while B:
        pair = min(B, key=lambda ij: order.key(
            monomial_lcm(packed[ij[0]][1], packed[ij[1]][1])))
        B.discard(pair)
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitError(
                f"pair queue exceeded the cap of {max_pairs} processed pairs; "
                "raise max_pairs or rerun over a large prime field (domain fp)")
        s = _s_polynomial(packed[pair[0]], packed[pair[1]], order)
        h = _reduce_full(s, [packed[i] for i in G], order)
        if h.is_zero():
            continue
        h = _normalize(h, max_coeff_bits)
        packed.append(_pack(h, order))
        G, B = _update(G, B, len(packed) - 1, packed)
        if sum(packed[-1][1]) == 0:
            break  # the ideal is the whole ring

    # minimal basis: no leading monomial divides another's
    chosen = sorted(G, key=lambda i: order.key(packed[i][1]))
    minimal = []
    for i in chosen:
        lm = packed[i][1]
        if not any(monomial_divides(packed[j][1], lm) for j in minimal if j != i):
            minimal.append(i)
    elems = [packed[i][0] for i in minimal]

    # tail-reduce to the unique reduced basis (leading monomials are stable)
    changed = True
    while changed:
        changed = False
        for i in range(len(elems)):
            others = [_pack(elems[j], order) for j in range(len(elems)) if j != i]
            h = _reduce_full(elems[i], others, order)
            h = _normalize(h, max_coeff_bits)
            if h.terms != elems[i].terms:
                elems[i] = h
                changed = True
    elems = [_monic(g, order) for g in elems]
    elems.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    gb = GroebnerBasis(nvars, elems, order, domain)

    for g in gens:
        if not normal_form(g, gb).is_zero():
            raise GroebnerError("postcondition failure: input generator not in the ideal")
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of full division of f by the basis; zero iff f is a member."""
    if f.nvars != gb.nvars:
        raise ValueError("arity mismatch between polynomial and basis")
    if gb.elements and f.domain != gb.domain:
        raise DomainError("polynomial and basis from different domains")
    return _reduce_full(f, [_pack(g, gb.order) for g in gb.elements], gb.order)


# ---------------------------------------------------------------------------
# saturation via the extra-variable construction
# ---------------------------------------------------------------------------

def _shift_vars(g: Polynomial) -> Polynomial:
    return Polynomial(g.nvars + 1, {(0,) + m: c for m, c in g.terms.items()},
                      g.domain, _clean=False)


def saturate(ideal: Ideal, f: Polynomial,
             max_pairs: int = DEFAULT_MAX_PAIRS,
             max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> Ideal:
    """Return I : f^infinity.

    Adjoins t, adds t*f - 1, eliminates t with a block order, and keeps the
    t-free part of the basis.
    """
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    if f.nvars != ideal.nvars:
        raise ValueError("arity mismatch")
    n = ideal.nvars
    domain = ideal.domain
    gens = [_shift_vars(g) for g in ideal.generators]
    tf = _shift_vars(f).term_mul((1,) + (0,) * n, domain.one)
    one = Polynomial.constant(n + 1, domain.one, domain)
    gens.append(tf - one)
    gb = buchberger(Ideal(n + 1, gens), BlockOrder(1), max_pairs, max_coeff_bits)
    kept = []
    for g in gb.elements:
        if all(m[0] == 0 for m in g.terms):
            kept.append(Polynomial(n, {m[1:]: c for m, c in g.terms.items()},
                                   domain, _clean=False))
    return Ideal(n, kept, ideal.ambient)


# ---------------------------------------------------------------------------
# zero-dimensional degree, dimension, graded slices
# ---------------------------------------------------------------------------

def zero_dim_degree(gb: GroebnerBasis, max_monomials: int = 10**6) -> int:
    """Number of standard monomials (the length of the scheme).

    Requires the staircase to close in every variable; otherwise raises
    :class:`NotZeroDimensionalError`.
    """
    if gb.is_unit_ideal():
        return 0
    lms = gb.leading_monomials()
    n = gb.nvars
    bounds = [None] * n
    for lm in lms:
        support = [i for i, e in enumerate(lm) if e > 0]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
    missing = [i for i, b in enumerate(bounds) if b is None]
    if missing:
        raise NotZeroDimensionalError(
            f"no pure power of variable(s) {missing} in the leading-term ideal; "
            "the quotient is not finite-dimensional")
    total = 1
    for b in bounds:
        total *= b
        if total > max_monomials:
            raise ResourceLimitError("standard-monomial enumeration too large")

    count = 0

    def standard(m):
        return not any(monomial_divides(lm, m) for lm in lms)

    # enumerate exponent boxes below the pure-power bounds
    def rec(prefix):
        nonlocal count
        i = len(prefix)
        if i == n:
            if standard(prefix):
                count += 1
            return
        for e in range(bounds[i]):
            rec(prefix + (e,))

    rec(())
    return count


def ideal_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the quotient ring, read off the leading-term ideal
    as the largest set of variables meeting no leading monomial's support.
    The unit ideal gets dimension -1 (empty locus)."""
    if gb.is_unit_ideal():
        return -1
    n = gb.nvars
    supports = [frozenset(i for i, e in enumerate(lm) if e > 0)
                for lm in gb.leading_monomials()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def graded_component_dim(ideal, d: int, order: MonomialOrder = GREVLEX) -> int:
    """Dimension of the degree-d slice of a homogeneous ideal.

    Computed as the rank of the coefficient matrix of all products m*g with
    deg(m*g) = d, g running over the generators (or basis elements).
    """
    from .linalg import ExactMatrix, rank

    if isinstance(ideal, GroebnerBasis):
        gens, nvars, domain = ideal.elements, ideal.nvars, ideal.domain
    elif isinstance(ideal, Ideal):
        gens, nvars, domain = ideal.generators, ideal.nvars, ideal.domain
    else:
        gens = list(ideal)
        nvars, domain = gens[0].nvars, gens[0].domain
    basis_d = monomial_basis(nvars, d)
    index = {m: i for i, m in enumerate(basis_d)}
    rows = []
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("graded slice of an inhomogeneous generator is undefined")
        dg = g.total_degree()
        if dg > d or g.is_zero():
            continue
        for m in monomial_basis(nvars, d - dg):
            prod = g.term_mul(m, g.domain.one)
            row = [domain.zero] * len(basis_d)
            for mm, c in prod.terms.items():
                row[index[mm]] = c
            rows.append(row)
    if not rows:
        return 0
    return rank(ExactMatrix(rows, domain))


def saturate_by_linear_form(ideal: Ideal, ell: Polynomial,
                            max_pairs: int = DEFAULT_MAX_PAIRS,
                            max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> Ideal:
    """Saturation I : ell^infinity of a homogeneous ideal by a linear form.

    Uses the grevlex trick: after a coordinate change taking ell to the
    last variable, dividing every element of a grevlex basis by its maximal
    power of that variable yields a basis of the saturation (grevlex is
    adapted to the last variable on homogeneous ideals).  Much faster than
    the extra-variable construction for the quartic-minor ideals; the two
    routes are cross-checked in the test suite.
    """
    from .linalg import ExactMatrix, invert, kernel_basis

    n = ideal.nvars
    domain = ideal.domain
    if any(not g.is_homogeneous() for g in ideal.generators):
        raise ValueError("linear-form saturation requires a homogeneous ideal")
    if ell.total_degree() != 1 or not ell.is_homogeneous():
        raise ValueError("saturating form must be linear")
    row = [ell.coefficient(tuple(1 if j == i else 0 for j in range(n)))
           for i in range(n)]
    kb = kernel_basis(ExactMatrix([row], domain))
    cols = [[kb[(i, j)] for i in range(n)] for j in range(kb.cols)]
    i0 = next(i for i, c in enumerate(row) if c != 0)
    last = [domain.zero] * n
    last[i0] = domain.one / row[i0]
    M = ExactMatrix(cols + [last], domain).transpose()  # ell(Mx) = x_{n-1}
    Minv = invert(M)
    fwd = [Polynomial.linear_form(M.entries[i], domain) for i in range(n)]
    back = [Polynomial.linear_form(Minv.entries[i], domain) for i in range(n)]
    moved = [g.substitute_variables(fwd) for g in ideal.generators]
    gb = buchberger(Ideal(n, moved, ideal.ambient), GREVLEX, max_pairs, max_coeff_bits)
    divided = []
    for g in gb.elements:
        a = min(m[n - 1] for m in g.terms)
        if a:
            g = Polynomial(n, {m[: n - 1] + (m[n - 1] - a,): c
                               for m, c in g.terms.items()}, domain, _clean=False)
        divided.append(g)
    restored = [g.substitute_variables(back) for g in divided]
    return Ideal(n, restored, ideal.ambient)


def affine_cone_dimension(gens, nvars: int, order: MonomialOrder = GREVLEX,
                          max_pairs: int = DEFAULT_MAX_PAIRS,
                          max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> int:
    """Krull dimension of the affine cone of a homogeneous ideal.

    A projective locus is empty iff this is <= 0 (the cone is at most the
    origin)."""
    gb = buchberger(Ideal(nvars, list(gens), "projective"), order,
                    max_pairs, max_coeff_bits)
    return ideal_dimension(gb)
