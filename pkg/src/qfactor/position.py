"""Point-configuration checks driving the independence criterion.

A configuration of at most 16 points in P^4 is examined by brute subset
enumeration: the largest number lying in a common line, plane or
hyperplane, the resulting pass/fail against the "at most d*k + 1 points in
every k-plane" bound for cubics, and the sharper curve checks (seven on a
conic, ten on a twisted cubic).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .domains import QQ
from .groebner import (GroebnerError, Ideal, NotZeroDimensionalError,
                       buchberger, ideal_dimension, zero_dim_degree)
from .linalg import ExactMatrix, bareiss_rank, kernel_basis, rank, rref
from .polynomials import Polynomial, monomial_basis
from .singular import ProjectivePoint, random_invertible_matrix

TC_NONE = "none"
TC_SUSPECT = "suspect"
TC_CONFIRMED = "confirmed"

MAX_POINTS = 16


@dataclass
class PositionReport:
    npoints: int
    ek_pass: bool
    ek_witness: tuple | None          # (k, tuple of point indices)
    max_collinear: int
    max_coplanar: int
    max_in_hyperplane: int
    seven_on_conic: tuple | None = None
    twisted_cubic_flag: tuple = (TC_NONE, None)

    def degeneracy_flags(self):
        return (self.max_collinear, self.max_coplanar, self.max_in_hyperplane)

    def to_dict(self):
        return {
            "npoints": self.npoints,
            "ek_pass": self.ek_pass,
            "ek_witness": None if self.ek_witness is None else
                {"k": self.ek_witness[0], "points": list(self.ek_witness[1])},
            "max_collinear": self.max_collinear,
            "max_coplanar": self.max_coplanar,
            "max_in_hyperplane": self.max_in_hyperplane,
            "seven_on_conic": None if self.seven_on_conic is None else list(self.seven_on_conic),
            "twisted_cubic": {"flag": self.twisted_cubic_flag[0],
                              "points": None if self.twisted_cubic_flag[1] is None
                              else list(self.twisted_cubic_flag[1])},
        }


def _int_coords(points) -> list:
    """Integer representatives of the points (clears denominators); these
    feed the fraction-free rank oracle, which is much faster than Fraction
    elimination in the subset scans."""
    out = []
    for p in points:
        coords = p.coords if isinstance(p, ProjectivePoint) else tuple(Fraction(c) for c in p)
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        out.append([int(c * den) for c in coords])
    return out


def _require_distinct(points):
    pts = [p if isinstance(p, ProjectivePoint) else ProjectivePoint(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points in the configuration")
    return pts


def max_on_subspace(points, k: int):
    """Largest number of the points lying in a common k-plane of P^4 and a
    maximal witness (indices).  Brute force over (k+1)-subsets: any optimal
    k-plane is spanned (inside itself) by k+1 of the points."""
    pts = _require_distinct(points)
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if len(pts) > MAX_POINTS:
        raise ValueError(f"subset enumeration supports at most {MAX_POINTS} points")
    rows = _int_coords(pts)
    s = len(rows)
    if s <= k + 1:
        return s, tuple(range(s))
    best = (0, ())
    for subset in combinations(range(s), k + 1):
        base = [rows[i] for i in subset]
        r = bareiss_rank(base)
        members = tuple(i for i in range(s)
                        if i in subset or bareiss_rank(base + [rows[i]]) == r)
        if len(members) > best[0]:
            best = (len(members), members)
    return best


def conic_through_seven(points) -> bool:
    """Whether seven coplanar points lie on a common plane conic.

    Points must span exactly a 2-plane; the 7 x 6 evaluation matrix on the
    plane's quadric monomials having a kernel means a conic through all.
    """
    pts = _require_distinct(points)
    if len(pts) != 7:
        raise ValueError("the conic check takes exactly 7 points")
    restricted, dim = restrict_to_span(pts)
    if dim != 3:
        raise ValueError("points do not span a plane")
    mat = evaluation_matrix(restricted, 3, 2)
    return rank(mat) < 6


def restrict_to_span(points):
    """Coordinates of the points inside their projective span.

    Returns (list of coordinate tuples of length r, r) where r - 1 is the
    projective dimension of the span.
    """
    pts = _require_distinct(points)
    mat = ExactMatrix([list(p.coords) for p in pts], QQ)
    R, pivots = rref(mat)
    restricted = [tuple(p.coords[c] for c in pivots) for p in pts]
    # valid because rref rows have unit pivots: each point is the
    # pivot-coordinate combination of the basis rows
    basis_rows = R.entries[: len(pivots)]
    for p, rc in zip(pts, restricted):
        recon = [sum((c * basis_rows[i][j] for i, c in enumerate(rc)),
                     Fraction(0)) for j in range(mat.cols)]
        if tuple(recon) != p.coords:
            raise ArithmeticError("span restriction failed")
    return restricted, len(pivots)


def evaluation_matrix(coord_tuples, nvars: int, degree: int) -> ExactMatrix:
    basis = monomial_basis(nvars, degree)
    rows = []
    for coords in coord_tuples:
        row = []
        for m in basis:
            v = Fraction(1)
            for c, e in zip(coords, m):
                if e:
                    v *= Fraction(c)**e
            row.append(v)
        rows.append(row)
    return ExactMatrix(rows, QQ)


def twisted_cubic_test(points, exact: bool = False, seed: int = 0) -> tuple:
    """Do ten points spanning a P^3 lie on a twisted cubic?

    Necessary condition: the net of quadrics through them is at least
    3-dimensional ("suspect").  In exact mode the ideal of three kernel
    quadrics must cut a dimension-1 locus whose generic hyperplane slice
    has degree 3 ("confirmed").
    """
    pts = _require_distinct(points)
    if len(pts) != 10:
        raise ValueError("the twisted-cubic check takes exactly 10 points")
    restricted, dim = restrict_to_span(pts)
    if dim != 4:
        raise ValueError("the 10 points must span a three-dimensional space")
    mat = evaluation_matrix(restricted, 4, 2)
    kern = kernel_basis(mat)
    if kern.cols < 3:
        return (TC_NONE, None)
    if not exact:
        return (TC_SUSPECT, tuple(range(10)))
    basis2 = monomial_basis(4, 2)
    quadrics = []
    for j in range(3):
        terms = {m: kern[(i, j)] for i, m in enumerate(basis2)}
        quadrics.append(Polynomial(4, terms, QQ))
    rng = random.Random(seed)
    for _ in range(4):
        M = random_invertible_matrix(4, rng, QQ)
        images = [Polynomial.linear_form(M.entries[i], QQ) for i in range(4)]
        moved = [q.substitute_variables(images) for q in quadrics]
        chart = [q.dehomogenize(0) for q in moved]
        try:
            gb = buchberger(Ideal(3, chart))
            if ideal_dimension(gb) != 1:
                return (TC_SUSPECT, tuple(range(10)))
            coeffs = [rng.randint(-9, 9) for _ in range(3)] + [rng.randint(1, 9)]
            slice_form = Polynomial(3, {
                (1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1],
                (0, 0, 1): coeffs[2], (0, 0, 0): coeffs[3]}, QQ)
            gb2 = buchberger(Ideal(3, chart + [slice_form]))
            if zero_dim_degree(gb2) == 3:
                return (TC_CONFIRMED, tuple(range(10)))
        except (NotZeroDimensionalError, GroebnerError):
            continue
    return (TC_SUSPECT, tuple(range(10)))


def ek_check(points, d: int = 3, exact_cubic: bool = False, seed: int = 0) -> PositionReport:
    """Independence hypothesis for forms of degree d (default cubics):
    every k-plane may contain at most d*k + 1 of the points, k = 1, 2, 3.

    On failure the smallest-k witness is reported.  Degeneracy diagnostics
    (largest collinear/coplanar/hyperplane counts, seven-on-a-conic, the
    twisted-cubic flag) ride along.
    """
    pts = _require_distinct(points)
    counts = {}
    witnesses = {}
    for k in (1, 2, 3):
        counts[k], witnesses[k] = max_on_subspace(pts, k)
    ek_witness = None
    for k in (1, 2, 3):
        if counts[k] > d * k + 1:
            ek_witness = (k, witnesses[k])
            break
    seven = None
    if counts[2] == 7:
        subset = witnesses[2]
        if conic_through_seven([pts[i] for i in subset]):
            seven = subset
    tc_flag = (TC_NONE, None)
    if counts[3] >= 10:
        for subset in combinations(witnesses[3], 10):
            try:
                flag = twisted_cubic_test([pts[i] for i in subset],
                                          exact=exact_cubic, seed=seed)
            except ValueError:
                continue
            if flag[0] != TC_NONE:
                tc_flag = (flag[0], subset)
                break
    return PositionReport(
        npoints=len(pts),
        ek_pass=ek_witness is None,
        ek_witness=ek_witness,
        max_collinear=counts[1],
        max_coplanar=counts[2],
        max_in_hyperplane=counts[3],
        seven_on_conic=seven,
        twisted_cubic_flag=tc_flag,
    )
