"""Singular scheme of the branch surface S = Q intersect W and node checks.

``S`` is the intersection of a smooth quadric threefold Q and a quartic W
in P^4.  Its singular points are where the 2x5 Jacobian of (Q, W) drops to
rank 1; a singular point is a node exactly when the local quadratic cone,
read off after solving Q as a graph over its tangent hyperplane, has full
rank 3.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .domains import QQ, scalar_to_str
from .groebner import (GroebnerError, Ideal, NotZeroDimensionalError,
                       buchberger, ideal_dimension, zero_dim_degree,
                       DEFAULT_MAX_PAIRS, DEFAULT_MAX_COEFF_BITS)
from .linalg import ExactMatrix, rank, rref
from .polynomials import HomogeneousForm, Polynomial

VERDICT_NODE = "node"
VERDICT_WORSE = "worse-than-node"
VERDICT_SMOOTH = "smooth-point"
VERDICT_OFF = "not-on-S"


class SmoothQuadricError(ValueError):
    """The quadric is singular; every check here assumes it is smooth."""


class ProjectivePoint:
    """A point of P^{n-1}, canonically normalized so the first nonzero
    coordinate is 1."""

    __slots__ = ("coords",)

    def __init__(self, coords, domain=QQ):
        coords = [domain(c) for c in coords]
        lead = next((c for c in coords if c != 0), None)
        if lead is None:
            raise ValueError("all coordinates vanish; not a projective point")
        self.coords = tuple(c / lead for c in coords)

    @property
    def nvars(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"

    def to_strings(self):
        return [scalar_to_str(c) for c in self.coords]

    def apply_matrix(self, matrix: ExactMatrix) -> "ProjectivePoint":
        """Image under the coordinate substitution x -> Mx, i.e. M^{-1} p.

        If forms transform by f -> f(Mx), a point p goes to M^{-1} p so that
        incidence is preserved.
        """
        from .linalg import invert
        return ProjectivePoint(invert(matrix).matvec(list(self.coords)))


@dataclass
class NodeReport:
    point: ProjectivePoint
    on_S: bool
    jacobian_rank: int
    hessian_rank_local: int | None
    verdict: str

    def to_dict(self):
        return {
            "point": self.point.to_strings(),
            "on_S": self.on_S,
            "jacobian_rank": self.jacobian_rank,
            "hessian_rank_local": self.hessian_rank_local,
            "verdict": self.verdict,
        }


def _check_degrees(Q: HomogeneousForm, W: HomogeneousForm):
    if Q.nvars != 5 or W.nvars != 5:
        raise ValueError("Q and W must be forms in five variables")
    if Q.degree != 2 or W.degree != 4:
        raise ValueError(f"expected degrees (2, 4), got ({Q.degree}, {W.degree})")


def singular_scheme_ideal(Q: HomogeneousForm, W: HomogeneousForm) -> Ideal:
    """Ideal of the singular scheme: Q, W and the ten 2x2 minors of the
    Jacobian of (Q, W).  Callers saturate (or pass to a chart) before
    reading degrees."""
    _check_degrees(Q, W)
    dQ = Q.gradient()
    dW = W.gradient()
    gens = [Q, W]
    for i in range(5):
        for j in range(i + 1, 5):
            m = dQ[i] * dW[j] - dQ[j] * dW[i]
            if not m.is_zero():
                gens.append(m)
    return Ideal(5, gens, "projective")


def quadric_is_smooth(Q: HomogeneousForm, max_pairs: int = DEFAULT_MAX_PAIRS) -> bool:
    """Smoothness of the quadric: the partials generate an irrelevant ideal,
    i.e. their common projective zero locus is empty."""
    grads = [g for g in Q.gradient() if not g.is_zero()]
    if not grads:
        return False
    gb = buchberger(Ideal(Q.nvars, grads, "projective"), max_pairs=max_pairs)
    return ideal_dimension(gb) <= 0


def _tangent_normalization(Q: HomogeneousForm, p: ProjectivePoint) -> ExactMatrix:
    """An invertible M sending e0 to p and {x4 = 0} to the tangent
    hyperplane of Q at p (so Q(Mx) has tangent hyperplane x4 = 0 at e0)."""
    domain = Q.domain
    grad = [g.evaluate(p.coords) for g in Q.gradient()]
    if all(c == 0 for c in grad):
        raise SmoothQuadricError("the quadric is singular at the given point")
    kern = kernel_of_row(grad, domain)  # 4 vectors spanning the tangent hyperplane
    # choose three of them completing p to a basis of the hyperplane
    cols = [list(p.coords)] + kern
    _, pivots = rref(ExactMatrix(cols, domain).transpose())
    chosen = [cols[i] for i in pivots]
    if len(chosen) != 4 or pivots[0] != 0:
        raise ArithmeticError("tangent frame construction failed")
    i_out = next(i for i, c in enumerate(grad) if c != 0)
    outside = [domain.one if j == i_out else domain.zero for j in range(5)]
    columns = [chosen[0], chosen[1], chosen[2], chosen[3], outside]
    return ExactMatrix(columns, domain).transpose()


def kernel_of_row(row, domain):
    """Basis of the hyperplane {v : row . v = 0}."""
    from .linalg import kernel_basis
    kb = kernel_basis(ExactMatrix([row], domain))
    return [[kb[(i, j)] for i in range(kb.rows)] for j in range(kb.cols)]


def verify_node(Q: HomogeneousForm, W: HomogeneousForm, p: ProjectivePoint) -> NodeReport:
    """Classify the point: node, worse-than-node, smooth point of S, or off S.

    The node test solves the quadric locally as a graph over the three
    tangent directions (exact truncation at order two), restricts W and
    reports the rank of the resulting quadratic cone.
    """
    _check_degrees(Q, W)
    if p.nvars != 5:
        raise ValueError("point must live in P^4")
    domain = Q.domain
    coords = list(p.coords)
    gradQ = [g.evaluate(coords) for g in Q.gradient()]
    if all(c == 0 for c in gradQ):
        raise SmoothQuadricError("the quadric is singular at the given point")
    on_S = Q.evaluate(coords) == 0 and W.evaluate(coords) == 0
    gradW = [g.evaluate(coords) for g in W.gradient()]
    jac = rank(ExactMatrix([gradQ, gradW], domain))
    if not on_S:
        return NodeReport(p, False, jac, None, VERDICT_OFF)
    if jac == 2:
        return NodeReport(p, True, 2, None, VERDICT_SMOOTH)

    M = _tangent_normalization(Q, p)
    Qn = Q.substitute_linear(M)
    Wn = W.substitute_linear(M)
    q = Qn.dehomogenize(0)   # affine in (x1, x2, x3, x4), vanishing at 0
    w = Wn.dehomogenize(0)

    # q = a*x4 + (quadratic); solve x4 = psi(x1,x2,x3) to order two
    a = q.coefficient((0, 0, 0, 1))
    if a == 0:
        raise ArithmeticError("normalization failed: x4 not transverse")
    psi_terms = {}
    for m, c in q.terms.items():
        if m == (0, 0, 0, 1):
            continue
        if sum(m) == 2 and m[3] == 0:
            psi_terms[m[:3]] = -c / a
    psi = Polynomial(3, psi_terms, domain)

    # restrict W: substitute x_i -> x_i (i<=3), x4 -> psi, truncate at degree 2
    images = [Polynomial.variable(i, 3, domain) for i in range(3)] + [psi]
    w3 = w.substitute_variables(images)
    comps = w3.homogeneous_components()
    if 0 in comps or 1 in comps:
        raise ArithmeticError("local expansion has unexpected low-order terms")
    quad = comps.get(2, Polynomial.zero(3, domain))
    half = domain.one / domain(2)
    entries = [[domain.zero] * 3 for _ in range(3)]
    for m, c in quad.terms.items():
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx[0], idx[1]
        if i == j:
            entries[i][i] = c
        else:
            entries[i][j] = c * half
            entries[j][i] = c * half
    hrank = rank(ExactMatrix(entries, domain))
    verdict = VERDICT_NODE if hrank == 3 else VERDICT_WORSE
    return NodeReport(p, True, 1, hrank, verdict)


@dataclass
class CountResult:
    count: int
    domain_name: str
    probabilistic: bool
    dimension: int
    warnings: list

    def to_dict(self):
        return {
            "count": self.count,
            "domain": self.domain_name,
            "probabilistic": self.probabilistic,
            "warnings": list(self.warnings),
        }


def random_invertible_matrix(nvars: int, rng: random.Random, domain=QQ,
                             spread: int = 3) -> ExactMatrix:
    while True:
        rows = [[domain(rng.randint(-spread, spread)) for _ in range(nvars)]
                for _ in range(nvars)]
        m = ExactMatrix(rows, domain)
        if rank(m) == nvars:
            return m


def projective_point_count(gens, nvars: int, rng: random.Random,
                           max_pairs: int = DEFAULT_MAX_PAIRS,
                           max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS,
                           attempts: int = 6) -> tuple:
    """Length of a zero-dimensional projective scheme given by homogeneous
    generators.

    Counts in a random affine chart and certifies the chart misses nothing
    by checking the locus on the chart's hyperplane at infinity is empty.
    Returns (count, cone_dimension).
    """
    domain = gens[0].domain
    gb_cone = buchberger(Ideal(nvars, list(gens), "projective"),
                         max_pairs=max_pairs, max_coeff_bits=max_coeff_bits)
    dim = ideal_dimension(gb_cone)
    if dim <= 0:
        return 0, dim
    if dim >= 2:
        raise NotZeroDimensionalError(
            "the locus is positive-dimensional (cone dimension "
            f"{dim}); refusing to count points")
    basis = gb_cone.elements
    for _ in range(attempts):
        M = random_invertible_matrix(nvars, rng, domain)
        images = [Polynomial.linear_form(M.entries[i], domain) for i in range(nvars)]
        moved = [g.substitute_variables(images) for g in basis]
        chart = [g.dehomogenize(0) for g in moved]
        gb = buchberger(Ideal(nvars - 1, chart), max_pairs=max_pairs,
                        max_coeff_bits=max_coeff_bits)
        count = zero_dim_degree(gb)
        at_inf = moved + [Polynomial.variable(0, nvars, domain)]
        gb_inf = buchberger(Ideal(nvars, at_inf, "projective"),
                            max_pairs=max_pairs, max_coeff_bits=max_coeff_bits)
        if ideal_dimension(gb_inf) <= 0:
            return count, dim
    raise GroebnerError("no chart caught every point; retries exhausted")


def saturated_point_ideal(ideal: Ideal, *, seed: int = 0,
                          known_points=None,
                          max_pairs: int = DEFAULT_MAX_PAIRS,
                          max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS,
                          attempts: int = 8):
    """Saturate a homogeneous ideal supported on finitely many points by the
    irrelevant ideal, realized as saturation by a certified-generic linear
    form.

    A candidate form is accepted only if it vanishes at no point of the
    locus: exactly, by checking that V(I) cut by the form is projectively
    empty (and cheaply pre-filtered against any known points).  Returns
    (saturated ideal, linear form used).
    """
    from .groebner import affine_cone_dimension, saturate_by_linear_form

    domain = ideal.domain
    n = ideal.nvars
    rng = random.Random(seed)
    gb = buchberger(ideal, max_pairs=max_pairs, max_coeff_bits=max_coeff_bits)
    if gb.is_unit_ideal():
        return Ideal(n, gb.elements, ideal.ambient), None
    for _ in range(attempts):
        coeffs = [rng.randint(-9, 9) for _ in range(n)]
        if all(c == 0 for c in coeffs):
            continue
        ell = Polynomial.linear_form([domain(c) for c in coeffs], domain)
        if known_points and any(ell.evaluate(list(p.coords)) == 0 for p in known_points):
            continue
        guard = affine_cone_dimension(gb.elements + [ell], n,
                                      max_pairs=max_pairs,
                                      max_coeff_bits=max_coeff_bits)
        if guard > 0:
            continue
        sat = saturate_by_linear_form(Ideal(n, gb.elements, ideal.ambient), ell,
                                      max_pairs, max_coeff_bits)
        return sat, ell
    raise GroebnerError("no certified-generic linear form found for saturation")


def count_nodes(Q: HomogeneousForm, W: HomogeneousForm, *, domain=None,
                seed: int = 0, locus: Ideal | None = None,
                max_pairs: int = DEFAULT_MAX_PAIRS,
                max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> CountResult:
    """Count the singular points of S = Q intersect W.

    ``domain`` defaults to the forms' own domain (exact over Q); passing a
    PrimeDomain reruns the count modulo that prime, annotated as
    probabilistic.  ``locus`` substitutes a known ideal with the same
    saturated zero locus (used for the split-quartic family).
    """
    _check_degrees(Q, W)
    ideal = locus if locus is not None else singular_scheme_ideal(Q, W)
    working = ideal
    probabilistic = False
    name = ideal.domain.name if ideal.generators else "Q"
    if domain is not None and domain != ideal.domain:
        working = ideal.map_domain(domain)
        probabilistic = not domain.is_rational
        name = domain.name
    rng = random.Random(seed)
    count, dim = projective_point_count(working.generators, working.nvars, rng,
                                        max_pairs, max_coeff_bits)
    warnings = []
    if probabilistic:
        warnings.append(f"count performed over {name}; probabilistic specialization")
    return CountResult(count, name, probabilistic, dim, warnings)
