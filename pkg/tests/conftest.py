"""Shared fixtures: the twelve-node split-family instance and a generator
for more instances of the same family with rational nodes.

The rational-node construction: on the quadric Q = x0*x3 - x1*x2 + x4^2
with f1 = x4, the surface Y = Q on {x4 = 0} is the Segre quadric, doubly
ruled by sigma(s,t; u,v) = (su : sv : tu : tv : 0).  Taking f2 as a product
of two tangent planes of Y makes every plane section through them split
into ruling lines, so the twelve intersection points with f3 = m1*m2*m3
come from intersecting lines with lines and are rational.  The correction
term f1*B in f3 removes the spurious singular points a split cubic would
otherwise give to W on {f2 = 0}.
"""

import random
from fractions import Fraction

import pytest

from qfactor.certify import DoubleQuadricInput, construct_example
from qfactor.parsing import parse_form
from qfactor.polynomials import HomogeneousForm, Polynomial, form_from_coeffs, monomial_basis
from qfactor.singular import ProjectivePoint, VERDICT_NODE, count_nodes, verify_node
from qfactor.domains import QQ

GOLDEN_NODES = [
    (1, 0, -1, 0, 0), (3, 0, -1, 0, 0), (5, 0, -2, 0, 0),
    (1, -1, 0, 0, 0), (2, -1, 0, 0, 0), (3, -2, 0, 0, 0),
    (0, 0, 1, -1, 0), (0, 0, 5, -3, 0), (0, 0, 7, -5, 0),
    (0, 1, 0, -1, 0), (0, 5, 0, -2, 0), (0, 7, 0, -3, 0),
]


def golden_forms():
    Q = parse_form("x0*x3 - x1*x2 + x4^2", 5)
    f1 = parse_form("x4", 5)
    f2 = parse_form("x0*x3", 5)
    f3 = parse_form(
        "(x0 + x1 + x2 + x3)*(x0 + 2*x1 + 3*x2 + 5*x3)*(2*x0 + 3*x1 + 5*x2 + 7*x3)"
        " + x4*(x0^2 + x1*x2 + x3*x4)", 5)
    return Q, f1, f2, f3


@pytest.fixture(scope="session")
def golden_instance() -> DoubleQuadricInput:
    Q, f1, f2, f3 = golden_forms()
    return construct_example(f1, f2, f3, Q, nodes=GOLDEN_NODES, seed=7)


@pytest.fixture(scope="session")
def golden_points():
    return [ProjectivePoint(c) for c in GOLDEN_NODES]


def sigma(a, b):
    """Segre parameterization of Y in P^4 coordinates."""
    (s, t), (u, v) = a, b
    return (s * u, s * v, t * u, t * v, 0)


def tangent_plane_form(a, b) -> list:
    """Coefficients of the tangent plane of Y at sigma(a, b)."""
    (s, t), (u, v) = a, b
    return [t * v, -t * u, -s * v, s * u, 0]


def _linear(coeffs):
    return HomogeneousForm.from_polynomial(
        Polynomial.linear_form([Fraction(c) for c in coeffs]), 1)


def family_instance(a1, b1, a2, b2, ms, b_coeffs, seed=0,
                    check=True) -> DoubleQuadricInput:
    """Split-family input with rational nodes from ruling intersections.

    ``ms`` are three coefficient 4-tuples for the linear forms m_j in
    x0..x3; ``b_coeffs`` the 15 coefficients of the correcting quadric.
    Raises ValueError on degenerate draws (use a retry loop).
    """
    Q = parse_form("x0*x3 - x1*x2 + x4^2", 5)
    f1 = parse_form("x4", 5)
    l1 = _linear(tangent_plane_form(a1, b1))
    l2 = _linear(tangent_plane_form(a2, b2))
    f2 = l1 * l2
    m_forms = [_linear(list(c) + [0]) for c in ms]
    prod = m_forms[0] * m_forms[1] * m_forms[2]
    B = form_from_coeffs(5, 2, [Fraction(c) for c in b_coeffs])
    f3 = HomogeneousForm.from_polynomial(prod + f1 * B, 3)

    points = []
    for (a, b) in ((a1, b1), (a2, b2)):
        (s, t), (u, v) = a, b
        for c in ms:
            alpha = c[0] * s + c[2] * t          # m_j on the u-ruling
            beta = c[1] * s + c[3] * t
            if alpha == 0 and beta == 0:
                raise ValueError("m_j contains a whole ruling line")
            points.append(sigma(a, (-beta, alpha)))
            gamma = c[0] * u + c[1] * v          # m_j on the s-ruling
            delta = c[2] * u + c[3] * v
            if gamma == 0 and delta == 0:
                raise ValueError("m_j contains a whole ruling line")
            points.append(sigma((-delta, gamma), b))
    pts = [ProjectivePoint(p) for p in points]
    if len(set(pts)) != 12:
        raise ValueError("intersection points collide")

    inp = construct_example(f1, f2, f3, Q, nodes=pts, seed=seed)
    if check:
        for p in pts:
            report = verify_node(Q, inp.W, p)
            if report.verdict != VERDICT_NODE:
                raise ValueError(f"{p} is {report.verdict}, not a node")
        res = count_nodes(Q, inp.W, locus=inp.node_locus, seed=seed)
        if res.count != 12:
            raise ValueError(f"family locus has length {res.count}")
    return inp


def random_family_instance(rng: random.Random, seed=0) -> DoubleQuadricInput:
    """Draw family instances until one passes all validity checks."""
    for _ in range(60):
        a1 = (rng.randint(-3, 3), rng.randint(-3, 3))
        a2 = (rng.randint(-3, 3), rng.randint(-3, 3))
        b1 = (rng.randint(-3, 3), rng.randint(-3, 3))
        b2 = (rng.randint(-3, 3), rng.randint(-3, 3))
        if a1 == (0, 0) or a2 == (0, 0) or b1 == (0, 0) or b2 == (0, 0):
            continue
        if a1[0] * a2[1] == a1[1] * a2[0] or b1[0] * b2[1] == b1[1] * b2[0]:
            continue  # tangent points must differ in both rulings
        ms = [tuple(rng.randint(-4, 4) for _ in range(4)) for _ in range(3)]
        b_coeffs = [rng.randint(-3, 3) for _ in range(len(monomial_basis(5, 2)))]
        try:
            return family_instance(a1, b1, a2, b2, ms, b_coeffs, seed=seed)
        except ValueError:
            continue
    raise RuntimeError("no valid family instance found in 60 draws")


def random_rational_points(rng: random.Random, count: int, spread: int = 9):
    """Distinct random rational points of P^4 with integer representatives."""
    pts = set()
    while len(pts) < count:
        coords = [rng.randint(-spread, spread) for _ in range(5)]
        if all(c == 0 for c in coords):
            continue
        pts.add(ProjectivePoint(coords))
    return list(pts)
