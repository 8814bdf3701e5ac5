import random

import pytest

from ratpoints.detmethod import (AuxiliaryForm, RankFull, bezout_bound,
                                 build_determinant, divisibility_check,
                                 extract_auxiliary_form, partition_by_residue,
                                 prime_window, second_prime_window,
                                 select_monomials, theta_exponent,
                                 vanishing_test, vanishing_threshold)
from ratpoints.enumeration import count_affine_surface
from ratpoints.geometry import Classification
from ratpoints.poly import IntPoly, parse_poly, poly_divides

X = [IntPoly.variable(4, i) for i in range(4)]
LINE = [X[2], X[3]]
CONIC = [X[3], X[0] * X[2] - X[1] ** 2]
TWISTED = [X[0] * X[2] - X[1] ** 2, X[0] * X[3] - X[1] * X[2],
           X[1] * X[3] - X[2] ** 2]
FERMAT = parse_poly("x0^3 + x1^3 + x2^3 + x3^3")


def test_prime_window_examples():
    w = prime_window(10**4, 4, 0.0, 3)
    assert w.window[0] == 100.0
    assert w.primes[0] == 101
    assert len(w.primes) >= 3
    assert len(set(w.primes)) == len(w.primes)
    assert all(w.window[0] <= p <= w.window[1] for p in w.primes)

    tiny = prime_window(2, 3, 0.0, 4)
    assert len(tiny.primes) >= 4

    w9 = prime_window(512, 9, 0.0, 1)
    assert w9.primes[0] == 11  # window starts at 512^(1/3) = 8


def test_second_prime_window_examples():
    q = second_prime_window(2**60, 9, 3, exclude=11, min_count=2)
    assert abs(q.exponent - 1 / 6) < 1e-12
    assert 11 not in q.primes
    q2 = second_prime_window(100, 4, 3, exclude=2, min_count=1)
    assert abs(q2.exponent - 1 / 12) < 1e-12
    with pytest.raises(ValueError):
        second_prime_window(100, 4, 2, exclude=2, min_count=1)


def test_partition_by_residue():
    quadric = parse_poly("x0*x3 - x1*x2")
    pts = [(1, 2, 3, 6), (1, 7, 3, 21)]  # differ by 5 in two coordinates
    assert all(quadric.evaluate(p) == 0 for p in pts)
    part = partition_by_residue(pts, 5, quadric)
    assert len(part) == 1  # both reduce to the same residue point
    key = (1, 2, 3, 1)
    assert part[key][0] == pts

    # p beyond 2B+1 separates everything
    _, surface_pts = count_affine_surface(FERMAT, 5)
    big = partition_by_residue(surface_pts, 13, FERMAT)
    assert all(len(v[0]) == 1 for v in big.values())

    assert partition_by_residue([], 7, FERMAT) == {}


def test_partition_carries_classification():
    _, pts = count_affine_surface(FERMAT, 10)
    part = partition_by_residue(pts, 19, FERMAT)
    assert sum(len(v[0]) for v in part.values()) == len(pts)
    assert all(isinstance(v[1], Classification) for v in part.values())


def test_select_monomials_line():
    sel = select_monomials(LINE, 1, 5)
    assert sel.D == 4
    assert sel.affine_degrees == [0, 1, 2, 3, 4]
    assert sel.degree_sum == 10  # k(k-1)/2 for the line
    assert [m.to_text() for m in sel.monomials] == [
        "x0^4", "x0^3*x1", "x0^2*x1^2", "x0*x1^3", "x1^4"]


def test_select_monomials_conic():
    sel = select_monomials(CONIC, 2, 4)
    assert sel.stable_from == 1
    assert sel.affine_degrees == [1, 1, 2, 2]
    assert sel.degree_sum == 6
    sel1 = select_monomials(CONIC, 2, 1)
    assert len(sel1.monomials) == 1
    assert sel1.degree_sum == sel1.stable_from


def test_select_monomials_surplus_drop():
    # k = 5 with e = 3: the top degree contributes only two monomials
    sel = select_monomials(TWISTED, 3, 5)
    assert sel.affine_degrees == [1, 1, 1, 2, 2]
    assert sel.D == 2
    again = select_monomials(TWISTED, 3, 5)
    assert [m.to_text() for m in again.monomials] == \
        [m.to_text() for m in sel.monomials]  # deterministic choice


def test_curve_section_degree():
    from ratpoints.detmethod import curve_section_degree

    assert curve_section_degree(LINE)[0] == 1
    assert curve_section_degree(CONIC)[0] == 2
    assert curve_section_degree(TWISTED)[0] == 3


def test_select_monomials_wrong_dimension():
    # a surface ideal never stabilizes at a curve degree
    with pytest.raises(ValueError):
        select_monomials([X[3]], 1, 4, max_degree=12)


def test_build_determinant_examples():
    sel1 = select_monomials(LINE, 1, 1)
    c1 = build_determinant([(1, 1, 0, 0)], sel1)
    assert c1.det == 1  # the constant monomial at any point

    sel2 = select_monomials(LINE, 1, 2)
    dup = build_determinant([(1, 3, 0, 0), (1, 3, 0, 0)], sel2)
    assert dup.det == 0 and dup.duplicate_points

    sel3 = select_monomials(LINE, 1, 3)
    pts = [(1, 1, 0, 0), (1, 2, 0, 0), (1, 4, 0, 0)]
    cert = build_determinant(pts, sel3)
    vander = 1
    for i in range(3):
        for j in range(i + 1, 3):
            vander *= pts[j][1] - pts[i][1]
    assert abs(cert.det) == abs(vander)

    with pytest.raises(ValueError):
        build_determinant(pts[:2], sel3)


def test_divisibility_examples():
    sel3 = select_monomials(LINE, 1, 3)
    pts = [(1, 2, 0, 0), (1, 7, 0, 0), (1, 12, 0, 0)]
    cert = build_determinant(pts, sel3, q=5)
    verdict = divisibility_check(cert, 5, LINE, (1, 2, 0, 0))
    assert verdict.applicable and verdict.passed
    assert verdict.vq >= 3

    sel1 = select_monomials(LINE, 1, 1)
    k1 = build_determinant([(1, 2, 0, 0)], sel1)
    v1 = divisibility_check(k1, 5, LINE, (1, 2, 0, 0))
    assert v1.passed and v1.required == 0

    sel4 = select_monomials(CONIC, 2, 4)
    cpts = [(1, t, t * t, 0) for t in (1, 8, 15, 22)]
    cert7 = build_determinant(cpts, sel4, q=7)
    v7 = divisibility_check(cert7, 7, CONIC, (1, 1, 1, 0))
    assert v7.applicable and v7.passed
    assert cert7.det == 0 or v7.vq >= 6

    with pytest.raises(ValueError):
        divisibility_check(cert7, 5, CONIC, (1, 1, 1, 0))


def test_divisibility_alpha_regime_reported():
    # points reducing to a singular point of a nodal cubic: not applicable
    nodal = [X[3], X[1] ** 2 * X[0] + X[2] ** 2 * X[0] - X[2] ** 3 * 1]
    # the affine curve x1^2 = x2^3 - x2^2-ish has a singular point at origin
    pts = [(1, 0, 0, 0), (1, 5, 0, 0)]
    sel = select_monomials(LINE, 1, 2)
    cert = build_determinant(pts, sel, q=5)
    verdict = divisibility_check(cert, 5, nodal, (1, 0, 0, 0))
    assert not verdict.applicable
    assert "alpha" in verdict.reason


def test_beta_divisibility_acceptance_style():
    rng = random.Random(77)
    curves = {1: (LINE, lambda t: (1, t, 0, 0)),
              2: (CONIC, lambda t: (1, t, t * t, 0)),
              3: (TWISTED, lambda t: (1, t, t * t, t ** 3))}
    for q in (5, 7, 11, 13):
        for e, (gens, param) in curves.items():
            for k in (2, 4, 8):
                t0 = rng.randint(0, q - 1)
                ts = [t0 + q * j for j in range(k)]
                pts = [param(t) for t in ts]
                sel = select_monomials(gens, e, k)
                cert = build_determinant(pts, sel, q=q)
                verdict = divisibility_check(cert, q, gens, pts[0])
                assert verdict.applicable, (e, q, k)
                assert verdict.passed, (e, q, k, cert.det, verdict)


def test_vanishing_test():
    assert vanishing_test(100, 101, 10**9, 5, 3, 3) == "zero"
    assert vanishing_test(100, 2, 2, 1, 3, 3) == "unknown"
    th = vanishing_threshold(10**6, 1009, 97, 3, 9)
    assert th is not None
    assert vanishing_test(10**6, 1009, 97, th, 3, 9) == "zero"
    assert th == 2 or vanishing_test(10**6, 1009, 97, th - 1, 3, 9) == "unknown"


def test_extract_auxiliary_form():
    tc_pts = [(1, t, t * t, t ** 3) for t in range(6)]
    aux = extract_auxiliary_form(tc_pts, 2, FERMAT)
    assert isinstance(aux, AuxiliaryForm)
    assert all(aux.form.evaluate(p) == 0 for p in tc_pts)
    assert not poly_divides(FERMAT, aux.form)

    one = extract_auxiliary_form([(1, 2, 3, 4)], 1, FERMAT)
    assert isinstance(one, AuxiliaryForm) and one.rank == 1

    rng = random.Random(9)
    generic = [(1, rng.randint(-50, 50), rng.randint(-50, 50),
                rng.randint(-50, 50)) for _ in range(10)]
    out = extract_auxiliary_form(generic, 2, FERMAT)
    assert isinstance(out, RankFull)

    with pytest.raises(ValueError):
        extract_auxiliary_form([], 2, FERMAT)


def test_theta_and_bezout():
    assert theta_exponent(2, 2) == 12
    assert theta_exponent(3, 3) == 60
    assert theta_exponent(2, 3) == 20
    assert bezout_bound(3, 4) == 12
    assert bezout_bound(1, 1) == 1
    assert bezout_bound(5, 2) == 10
    with pytest.raises(ValueError):
        theta_exponent(1, 2)


def test_degree_sum_asymptotics():
    for gens, e in ((LINE, 1), (CONIC, 2), (TWISTED, 3)):
        for k in (10, 20, 40):
            sel = select_monomials(gens, e, k)
            ratio = sel.degree_sum * 2 * e / k**2
            assert ratio <= 1.6, (e, k, ratio)
        sel80 = select_monomials(gens, e, 80)
        ratio = sel80.degree_sum * 2 * e / 80**2
        assert 0.8 <= ratio <= 1.2, (e, ratio)
