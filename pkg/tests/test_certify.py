import random

import pytest

from qfactor.certify import (NonNodalError, VERDICT_NOT, VERDICT_QFACT,
                             DoubleQuadricInput, construct_example,
                             cubic_evaluation_matrix, defect, verify_splitting)
from qfactor.domains import QQ
from qfactor.groebner import GroebnerError
from qfactor.linalg import rank
from qfactor.parsing import parse_form
from qfactor.position import ek_check
from qfactor.singular import ProjectivePoint, SmoothQuadricError, random_invertible_matrix

from conftest import (GOLDEN_NODES, golden_forms, random_family_instance,
                      random_rational_points)

P = 2**31 + 11
Q5 = parse_form("x0*x3 - x1*x2 + x4^2", 5)


def test_single_point_imposes_one_condition():
    m = cubic_evaluation_matrix([ProjectivePoint([1, 2, 3, 4, 5])])
    assert m.rows == 1 and m.cols == 35
    assert rank(m) == 1


def test_eleven_random_points_have_full_rank():
    rng = random.Random(0)
    pts = random_rational_points(rng, 11)
    assert rank(cubic_evaluation_matrix(pts)) == 11


def test_golden_nodes_have_rank_eleven(golden_points):
    assert rank(cubic_evaluation_matrix(golden_points)) == 11


def test_rank_is_representative_independent(golden_points):
    scaled = [ProjectivePoint([c * QQ("3/7") for c in p.coords])
              for p in golden_points]
    assert rank(cubic_evaluation_matrix(scaled)) == 11


def test_duplicates_rejected():
    p = ProjectivePoint([1, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        cubic_evaluation_matrix([p, ProjectivePoint([2, 0, 0, 0, 0])])


def test_construct_example_validates_degrees():
    _, f1, f2, f3 = golden_forms()
    with pytest.raises(ValueError):
        construct_example(f2, f2, f3, Q5)  # f1 must be linear
    cone = parse_form("x0*x1 - x2^2", 5)
    with pytest.raises(SmoothQuadricError):
        construct_example(f1, f2, f3, cone)


def test_verify_splitting_golden(golden_instance):
    witness = verify_splitting(golden_instance)
    assert witness["quotient_is_f3"]
    a, b = witness["half_divisors"]
    # the cover involution y -> -y exchanges the two halves
    assert a.replace("y - ", "y + ") == b
    assert a != b


def test_verify_splitting_rejects_outsiders():
    _, f1, f2, f3 = golden_forms()
    W = parse_form("x0^4 + x1^4 + x2^4 + x3^4 + x4^4", 5)
    fake = DoubleQuadricInput(Q=Q5, W=W, family={"f1": f1, "f2": f2, "f3": f3})
    with pytest.raises(ValueError):
        verify_splitting(fake)
    # wrong declared f3
    inp = construct_example(f1, f2, f3, Q5)
    inp.family["f3"] = f3 + f1 * f1 * f1
    with pytest.raises(ValueError):
        verify_splitting(inp)


def smooth_dense_quartic():
    """A dense random quartic whose intersection with Q is smooth
    (singular count 0, verified over two primes)."""
    from qfactor.polynomials import form_from_coeffs, monomial_basis
    rng = random.Random(3)
    coeffs = [rng.randint(-20, 20) for _ in monomial_basis(5, 4)]
    return form_from_coeffs(5, 4, coeffs)


def test_defect_smooth_instance_is_qfactorial():
    inp = DoubleQuadricInput(Q=Q5, W=smooth_dense_quartic(), seed=3)
    cert = defect(inp, domain="fp", prime=P)
    assert cert.s == 0 and cert.defect == 0
    assert cert.verdict == VERDICT_QFACT


def test_fp_only_positive_defect_stays_undetermined():
    # the diagonal quartic meets Q in a surface with many singular points;
    # with every rank computed modulo p the defect cannot refute
    # factoriality, so the verdict must stay undetermined
    W = parse_form("x0^4 + x1^4 + x2^4 + x3^4 + x4^4", 5)
    inp = DoubleQuadricInput(Q=Q5, W=W, seed=3)
    cert = defect(inp, domain="fp", prime=P)
    assert cert.s > 0 and cert.defect and cert.defect > 0
    assert cert.probabilistic
    assert cert.verdict == "undetermined"


def test_defect_golden_full_certificate(golden_instance):
    cert = defect(golden_instance, symbolic="always")
    assert (cert.s, cert.rank3, cert.defect) == (12, 11, 1)
    assert cert.verdict == VERDICT_NOT
    assert cert.path == "both" and not cert.probabilistic
    assert cert.position.ek_witness[0] == 3
    assert cert.witnesses["quotient_is_f3"]
    assert not cert.alerts


def test_defect_single_node_instance():
    W = parse_form(
        "x0^3*x3 + x1^4 + x2^4 + x3^4 + x4^4 + x1^2*x2^2 + x0*x2^3", 5)
    inp = DoubleQuadricInput(Q=Q5, W=W, nodes=[(1, 0, 0, 0, 0)], seed=4)
    cert = defect(inp, domain="fp", prime=P)
    assert (cert.s, cert.rank3, cert.defect) == (1, 1, 0)
    assert cert.verdict == VERDICT_QFACT


def test_defect_rejects_non_nodes(golden_instance):
    bad = DoubleQuadricInput(Q=golden_instance.Q, W=golden_instance.W,
                             nodes=[(1, 1, 1, 1, 1)], seed=1)
    with pytest.raises(NonNodalError):
        defect(bad, domain="fp", prime=P)


def test_defect_rejects_incomplete_node_lists(golden_instance):
    partial = DoubleQuadricInput(
        Q=golden_instance.Q, W=golden_instance.W,
        nodes=GOLDEN_NODES[:11], family=golden_instance.family,
        node_locus=golden_instance.node_locus, seed=7)
    with pytest.raises(NonNodalError):
        defect(partial)


def test_two_path_agreement_on_family_instances():
    rng = random.Random(77)
    for i in range(3):
        inst = random_family_instance(rng, seed=i)
        cert = defect(inst, symbolic="always")
        assert cert.path == "both"
        assert (cert.s, cert.defect) == (12, 1)


def test_defect_projective_invariance(golden_instance):
    rng = random.Random(8)
    base = defect(golden_instance, symbolic="never")
    for _ in range(2):
        M = random_invertible_matrix(5, rng, QQ)
        Qm = golden_instance.Q.substitute_linear(M)
        Wm = golden_instance.W.substitute_linear(M)
        pts = [p.apply_matrix(M) for p in golden_instance.nodes]
        f1m = golden_instance.family["f1"].substitute_linear(M)
        f2m = golden_instance.family["f2"].substitute_linear(M)
        f3m = golden_instance.family["f3"].substitute_linear(M)
        moved = construct_example(f1m, f2m, f3m, Qm, nodes=pts, seed=5)
        assert moved.W == Wm
        cert = defect(moved, symbolic="never")
        assert (cert.s, cert.rank3, cert.defect) == (base.s, base.rank3, base.defect)


def test_fp_count_with_exact_rank_still_refutes(golden_instance):
    cert = defect(golden_instance, domain="fp", prime=P)
    assert cert.defect == 1 and cert.verdict == VERDICT_NOT
    assert cert.probabilistic  # the count ran modulo p
    assert "Q" in cert.rank_domains


def test_independence_bridge_on_random_configurations():
    rng = random.Random(9)
    done = 0
    while done < 10:
        s = rng.randint(2, 13)
        pts = random_rational_points(rng, s)
        rep = ek_check(pts)
        if not rep.ek_pass:
            continue
        assert rank(cubic_evaluation_matrix(pts)) == s
        done += 1
