"""Top-level Q-factoriality decision.

The criterion: a nodal double cover of the smooth quadric is Q-factorial
exactly when its nodes impose independent conditions on the cubics of P^4,
i.e. when the defect s - rank of the 35-column cubic evaluation matrix is
zero.  The rank is computed from explicit rational nodes and/or
symbolically as 35 minus the degree-3 slice of the saturated singular
ideal; when both paths run they must agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .domains import GF, QQ, random_large_prime
from .groebner import (DEFAULT_MAX_COEFF_BITS, DEFAULT_MAX_PAIRS, GroebnerError,
                       Ideal, NotZeroDimensionalError, ResourceLimitError,
                       graded_component_dim)
from .linalg import ExactMatrix, rank
from .polynomials import HomogeneousForm, exact_divide, monomial_basis
from .position import PositionReport, ek_check
from .singular import (CountResult, ProjectivePoint, SmoothQuadricError,
                       VERDICT_NODE, count_nodes, quadric_is_smooth,
                       saturated_point_ideal, singular_scheme_ideal, verify_node)

VERDICT_QFACT = "Q-factorial"
VERDICT_NOT = "not-Q-factorial"
VERDICT_UNDET = "undetermined"

CUBIC_DIM = 35  # degree-3 monomials on P^4


class NonNodalError(ValueError):
    """The branch surface is not nodal (or the supplied points are not its
    nodes); the defect criterion does not apply."""


@dataclass
class DoubleQuadricInput:
    Q: HomogeneousForm
    W: HomogeneousForm
    nodes: list | None = None
    family: dict | None = None        # {"f1","f2","f3"} for the split family
    node_locus: Ideal | None = None
    seed: int = 0

    def __post_init__(self):
        if self.Q.nvars != 5 or self.W.nvars != 5:
            raise ValueError("forms must live on P^4 (five variables)")
        if self.Q.degree != 2 or self.W.degree != 4:
            raise ValueError(
                f"expected degrees (2, 4), got ({self.Q.degree}, {self.W.degree})")
        if self.nodes:
            pts = [p if isinstance(p, ProjectivePoint) else ProjectivePoint(p)
                   for p in self.nodes]
            if len(set(pts)) != len(pts):
                raise ValueError("duplicate points in the node list")
            self.nodes = pts


@dataclass
class DefectCertificate:
    s: int
    rank3: int | None
    defect: int | None
    path: str
    verdict: str
    position: PositionReport | None = None
    witnesses: dict | None = None
    count: CountResult | None = None
    probabilistic: bool = False
    seed: int = 0
    rank_domains: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    alerts: list = field(default_factory=list)
    node_reports: list | None = None

    def to_json_dict(self):
        return {
            "certificate": "q-factoriality-defect",
            "s": self.s,
            "rank3": self.rank3,
            "defect": self.defect,
            "path": self.path,
            "verdict": self.verdict,
            "criterion": "defect zero <=> nodes impose independent conditions on cubics",
            "position": None if self.position is None else self.position.to_dict(),
            "witnesses": self.witnesses,
            "count": None if self.count is None else self.count.to_dict(),
            "probabilistic": self.probabilistic,
            "seed": self.seed,
            "rank_domains": list(self.rank_domains),
            "warnings": list(self.warnings),
            "alerts": list(self.alerts),
            "node_reports": None if self.node_reports is None else
                [r.to_dict() for r in self.node_reports],
        }


def cubic_evaluation_matrix(points) -> ExactMatrix:
    """s x 35 matrix of the degree-3 monomials at each point.

    The rank does not depend on the chosen representatives: scaling a
    point scales its whole row.
    """
    pts = [p if isinstance(p, ProjectivePoint) else ProjectivePoint(p)
           for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    basis = monomial_basis(5, 3)
    rows = []
    for p in pts:
        row = []
        for m in basis:
            v = QQ.one
            for c, e in zip(p.coords, m):
                if e:
                    v = v * c**e
            row.append(v)
        rows.append(row)
    return ExactMatrix(rows, QQ)


def construct_example(f1: HomogeneousForm, f2: HomogeneousForm,
                      f3: HomogeneousForm, Q: HomogeneousForm,
                      nodes=None, seed: int = 0) -> DoubleQuadricInput:
    """Quartic of the split family: W = f2^2 + f1*f3.

    The node locus ideal (f1, f2, f3, Q) is attached for the symbolic path.
    """
    for f, d in ((f1, 1), (f2, 2), (f3, 3), (Q, 2)):
        if f.nvars != 5 or f.degree != d:
            raise ValueError(f"family form of degree {f.degree}, expected {d}")
    if not quadric_is_smooth(Q):
        raise SmoothQuadricError("the quadric of the family input is singular")
    W = f2 * f2 + f1 * f3
    locus = Ideal(5, [f1, f2, f3, Q], "projective")
    return DoubleQuadricInput(Q=Q, W=W, nodes=nodes,
                              family={"f1": f1, "f2": f2, "f3": f3},
                              node_locus=locus, seed=seed)


def verify_splitting(inp: DoubleQuadricInput) -> dict:
    """Witness that the preimage of {f1 = 0} splits in the double cover.

    Checks W - f2^2 = f1 * f3 exactly; the two half divisors y -+ f2 on
    {f1 = 0} are exchanged by the cover involution y -> -y.
    """
    if not inp.family:
        raise ValueError("no family data attached to this input")
    f1, f2, f3 = inp.family["f1"], inp.family["f2"], inp.family["f3"]
    residue = inp.W - f2 * f2
    quotient, remainder = exact_divide(residue, f1)
    if not remainder.is_zero():
        raise ValueError("W - f2^2 is not divisible by f1: not a member of the family")
    if quotient != f3:
        raise ValueError("W - f2^2 = f1 * q with q different from the declared f3")
    f2_text = f2.to_string()
    return {
        "identity": "W = f2^2 + f1*f3",
        "plane": f"{f1.to_string()} = 0",
        "half_divisors": [
            f"{f1.to_string()} = 0, y - ({f2_text}) = 0",
            f"{f1.to_string()} = 0, y + ({f2_text}) = 0",
        ],
        "quotient_is_f3": True,
    }


def _fp_symbolic_rank(locus: Ideal, seed: int, max_pairs, max_coeff_bits):
    """Degree-3 rank from saturation over two independent large primes.

    Rank can only drop under specialization, so two agreeing full ranks
    certify independence; the result is flagged probabilistic either way.
    """
    rng = random.Random(seed ^ 0x9E3779B9)
    ranks = []
    primes = []
    while len(primes) < 2:
        p = random_large_prime(rng)
        if p not in primes:
            primes.append(p)
    for p in primes:
        dom = GF(p)
        sat, _ = saturated_point_ideal(locus.map_domain(dom), seed=seed,
                                       max_pairs=max_pairs,
                                       max_coeff_bits=max_coeff_bits)
        ranks.append(CUBIC_DIM - graded_component_dim(sat, 3))
    if ranks[0] != ranks[1]:
        raise GroebnerError(
            f"prime-field ranks disagree ({ranks[0]} vs {ranks[1]}); unlucky primes")
    return ranks[0], [f"F_{p}" for p in primes]


def defect(inp: DoubleQuadricInput, *, symbolic: str = "auto",
           domain: str = "q", prime: int | None = None,
           max_pairs: int = DEFAULT_MAX_PAIRS,
           max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> DefectCertificate:
    """Compute the defect certificate.

    ``symbolic``: "auto" runs the saturation path only when no rational
    nodes are supplied; "always" forces both paths (they must agree);
    "never" skips it.  ``domain`` = "fp" pushes the counting machinery to
    a prime field (probabilistic annotation).
    """
    warnings: list = []
    alerts: list = []
    seed = inp.seed
    if not quadric_is_smooth(inp.Q, max_pairs=max_pairs):
        raise SmoothQuadricError("Q is a singular quadric; the construction requires it smooth")

    witnesses = None
    if inp.family:
        witnesses = verify_splitting(inp)

    node_reports = None
    if inp.nodes:
        node_reports = [verify_node(inp.Q, inp.W, p) for p in inp.nodes]
        bad = [r for r in node_reports if r.verdict != VERDICT_NODE]
        if bad:
            raise NonNodalError(
                f"{len(bad)} supplied point(s) fail the node check, e.g. "
                f"{bad[0].point}: {bad[0].verdict}")

    count_domain = None
    if domain == "fp":
        rng = random.Random(seed ^ 0x51ED270)
        count_domain = GF(prime) if prime else GF(random_large_prime(rng))
    try:
        count = count_nodes(inp.Q, inp.W, locus=inp.node_locus,
                            domain=count_domain, seed=seed,
                            max_pairs=max_pairs, max_coeff_bits=max_coeff_bits)
    except ResourceLimitError as exc:
        if count_domain is not None:
            raise
        warnings.append(f"rational count hit a resource cap ({exc}); retried over a prime field")
        rng = random.Random(seed ^ 0x51ED270)
        count_domain = GF(prime) if prime else GF(random_large_prime(rng))
        count = count_nodes(inp.Q, inp.W, locus=inp.node_locus,
                            domain=count_domain, seed=seed,
                            max_pairs=max_pairs, max_coeff_bits=max_coeff_bits)
    except NotZeroDimensionalError as exc:
        raise NonNodalError(f"S has non-isolated singularities: {exc}") from exc
    warnings.extend(count.warnings)

    if inp.nodes:
        s = len(inp.nodes)
        if count.count != s:
            raise NonNodalError(
                f"supplied {s} node(s) but the singular scheme has length "
                f"{count.count}; the list is incomplete or the scheme non-reduced")
    else:
        s = count.count
        if s:
            warnings.append(
                "no rational nodes supplied: per-point node verification skipped; "
                "the count assumes a reduced nodal singular scheme")

    if s == 0:
        return DefectCertificate(
            s=0, rank3=0, defect=0, path="symbolic", verdict=VERDICT_QFACT,
            witnesses=witnesses, count=count, probabilistic=count.probabilistic,
            seed=seed, rank_domains=[], warnings=warnings, alerts=alerts)

    run_symbolic = symbolic == "always" or (symbolic == "auto" and not inp.nodes)
    rank_pts = None
    rank_sym = None
    rank_domains = []
    probabilistic = count.probabilistic

    if inp.nodes:
        rank_pts = rank(cubic_evaluation_matrix(inp.nodes))
        rank_domains.append("Q")

    if run_symbolic:
        locus = inp.node_locus if inp.node_locus is not None else \
            singular_scheme_ideal(inp.Q, inp.W)
        if count_domain is not None:
            try:
                rank_sym, doms = _fp_symbolic_rank(locus, seed, max_pairs,
                                                   max_coeff_bits)
                rank_domains.extend(doms)
                probabilistic = True
            except GroebnerError as exc:
                warnings.append(str(exc))
        else:
            try:
                sat, _ = saturated_point_ideal(locus, seed=seed,
                                               known_points=inp.nodes,
                                               max_pairs=max_pairs,
                                               max_coeff_bits=max_coeff_bits)
                rank_sym = CUBIC_DIM - graded_component_dim(sat, 3)
                rank_domains.append("Q")
            except ResourceLimitError as exc:
                warnings.append(
                    f"rational saturation hit a resource cap ({exc}); "
                    "retrying over two large primes")
                try:
                    rank_sym, doms = _fp_symbolic_rank(locus, seed, max_pairs,
                                                       max_coeff_bits)
                    rank_domains.extend(doms)
                    probabilistic = True
                except GroebnerError as exc2:
                    warnings.append(str(exc2))

    if rank_pts is not None and rank_sym is not None:
        if rank_pts != rank_sym:
            raise GroebnerError(
                f"two-path disagreement: explicit rank {rank_pts} vs symbolic {rank_sym}")
        path = "both"
        rank3 = rank_pts
    elif rank_pts is not None:
        path = "explicit-points"
        rank3 = rank_pts
    elif rank_sym is not None:
        path = "symbolic"
        rank3 = rank_sym
    else:
        return DefectCertificate(
            s=s, rank3=None, defect=None, path="symbolic", verdict=VERDICT_UNDET,
            witnesses=witnesses, count=count, probabilistic=True, seed=seed,
            rank_domains=rank_domains, warnings=warnings, alerts=alerts,
            node_reports=node_reports)

    d = s - rank3
    if d < 0:
        raise GroebnerError(f"defect {d} negative: rank exceeds the point count")

    position = None
    if inp.nodes:
        position = ek_check(inp.nodes)
        if position.ek_pass and d != 0:
            alerts.append(
                "consistency alert: the independence hypothesis holds but the "
                f"defect is {d}; this cannot happen for verified nodes")
        if s <= 11:
            if position.max_collinear > 3:
                alerts.append("consistency alert: more than 3 nodes collinear on a "
                              "nodal instance with s <= 11")
            if position.max_coplanar > 6:
                alerts.append("consistency alert: more than 6 nodes coplanar on a "
                              "nodal instance with s <= 11")
            if not position.ek_pass:
                alerts.append("consistency alert: the independence hypothesis fails on a "
                              "nodal instance with s <= 11")

    if d == 0:
        verdict = VERDICT_QFACT
    elif probabilistic and rank_pts is None:
        # a dropped prime-field rank does not certify dependence
        verdict = VERDICT_UNDET
        warnings.append("defect over a prime field only; cannot certify non-factoriality")
    else:
        verdict = VERDICT_NOT

    return DefectCertificate(
        s=s, rank3=rank3, defect=d, path=path, verdict=verdict,
        position=position, witnesses=witnesses, count=count,
        probabilistic=probabilistic, seed=seed, rank_domains=rank_domains,
        warnings=warnings, alerts=alerts, node_reports=node_reports)
