"""The two-prime determinant method on surfaces in P^3.

Pipeline: pick primes p in a window around B^(1/sqrt(d)+eps), partition the
affine points of height <= B by residue class, select monomials that stay
independent modulo the ideal of an auxiliary curve, and form the exact
determinant of monomial values at class points.  Size bounds on the
determinant and divisibility by high prime powers (guaranteed for points
sharing a nonsingular reduction) force the determinant to vanish, which
yields an auxiliary form vanishing on the whole class without being
divisible by the surface form.  Everything here is exact integer or
rational arithmetic; the only floats are in the advisory vanishing
predictor and in logged bound values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, log

from .exact import valuation
from .geometry import classify_point
from .linalg import det_bareiss, nullspace_int, rank_sparse
from .poly import IntPoly, graded_piece_basis, monomials_of_degree, poly_divides


# ---------------------------------------------------------------------
# prime windows


@dataclass
class PrimeWindow:
    B: int
    exponent: float
    epsilon: float
    primes: list
    window: tuple          # (low, high) actually used
    excluded: int | None = None


def _sieve(limit: int):
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(flags[i * i :: i])
        i += 1
    return [n for n, f in enumerate(flags) if f]


def _window_primes(low: float, min_count: int, exclude=None):
    """Primes in [low, C*low] with C doubled from 2 until min_count appear."""
    C = 2.0
    low = max(low, 2.0)
    while True:
        high = C * low
        primes = [p for p in _sieve(int(high) + 1)
                  if p >= low and p != exclude]
        if len(primes) >= min_count:
            return primes, (low, high)
        C *= 2.0


def prime_window(B: int, d: int, epsilon: float, min_count: int) -> PrimeWindow:
    """Primes p with p around B^(1/sqrt(d) + epsilon), at least min_count
    of them (doubling the window top; Bertrand guarantees termination)."""
    if B < 2 or d < 3:
        raise ValueError("need B >= 2 and degree >= 3")
    a = 1.0 / d**0.5 + epsilon
    low = float(B) ** a
    primes, window = _window_primes(low, min_count)
    return PrimeWindow(B=B, exponent=a, epsilon=epsilon, primes=primes,
                       window=window)


def second_prime_window(B: int, d: int, e: int, exclude: int,
                        min_count: int) -> PrimeWindow:
    """Second prime window with exponent 1/e - 1/((e-1)*sqrt(d)), excluding
    the first prime.  Degrees e <= 2 belong to the line/conic machinery."""
    if e <= 2:
        raise ValueError("auxiliary curves of degree <= 2 are handled "
                         "by the line/conic counting routines")
    a = 1.0 / e - 1.0 / ((e - 1) * d**0.5)
    low = float(B) ** a
    primes, window = _window_primes(low, min_count, exclude=exclude)
    return PrimeWindow(B=B, exponent=a, epsilon=0.0, primes=primes,
                       window=window, excluded=exclude)


# ---------------------------------------------------------------------
# residue classes


def partition_by_residue(points, p: int, F: IntPoly):
    """Partition affine points [1, x1, x2, x3] by reduction mod p.

    Returns an ordered mapping residue -> (points, classification of the
    residue on the reduced surface).
    """
    classes: dict = {}
    for pt in points:
        if pt[0] != 1:
            raise ValueError("points must be affine, first coordinate 1")
        key = (1, pt[1] % p, pt[2] % p, pt[3] % p)
        classes.setdefault(key, []).append(tuple(pt))
    out = {}
    for key in sorted(classes):
        out[key] = (classes[key], classify_point(F, key, p=p))
    return out


# ---------------------------------------------------------------------
# monomial selection


@dataclass
class MonomialSelection:
    """Monomials of one degree D, no combination of which lies in the
    curve ideal, with small affine degree sum."""

    ideal: list
    curve_degree: int
    k: int
    D: int
    monomials: list        # IntPoly monomials of degree D
    affine_degrees: list   # degrees after setting the first variable to 1
    degree_sum: int
    stable_from: int       # first degree with Hilbert value e
    sum_constant: float    # C with degree_sum <= k^2/(2e) + C*k

    def affine_monomials(self):
        return [m.substitute_value(0, 1, drop=True) for m in self.monomials]


def select_monomials(J, e: int, k: int, max_degree: int = 400
                     ) -> MonomialSelection:
    """Greedy selection: for each degree >= stabilization, take the graded
    quotient basis mod (J, X0); stop at the smallest D with enough
    monomials, dropping the surplus from the top degree.  Independence of
    the full selection in degree D is confirmed by exact rank.
    """
    J = list(J)
    if not J:
        raise ValueError("need curve generators")
    nv = J[0].num_vars
    if nv != 4:
        raise ValueError("curve ideals live in four variables")
    # the quotient by (J, X0) in degree delta is the quotient of the
    # three-variable ring by the image of J at X0 = 0
    J0 = [g.substitute_value(0, 0, drop=True) for g in J]
    J0 = [g for g in J0 if not g.is_zero()]
    per_degree = {}
    stable_from = None
    delta = 0
    while True:
        basis = graded_piece_basis(J0, [], delta, num_vars=3)
        per_degree[delta] = basis.monomials
        if basis.dimension == e:
            if stable_from is None:
                stable_from = delta
        elif basis.dimension != e and stable_from is not None:
            raise ValueError(
                f"Hilbert value left {e} at degree {delta}: the ideal "
                "does not define the expected curve section"
            )
        if stable_from is not None:
            count = sum(len(per_degree[x]) for x in range(stable_from, delta + 1))
            if count >= k:
                break
        delta += 1
        if delta > max_degree:
            raise ValueError("wrong dimension: Hilbert function never "
                             f"stabilizes at {e}")
    D = delta
    chosen = []
    for dd in range(stable_from, D + 1):
        for m in per_degree[dd]:
            if len(chosen) < k:
                chosen.append((dd, m))
    assert len(chosen) == k
    monomials = []
    affine_degrees = []
    for dd, m in chosen:
        exp = next(iter(m.terms))  # exponents in (X1, X2, X3)
        lifted = (D - dd,) + exp
        monomials.append(IntPoly(nv, {lifted: 1}))
        affine_degrees.append(dd)
    degree_sum = sum(affine_degrees)
    _confirm_independent(J, monomials, D)
    sum_constant = max(0.0, (degree_sum - k * k / (2 * e)) / k)
    return MonomialSelection(
        ideal=J, curve_degree=e, k=k, D=D, monomials=monomials,
        affine_degrees=affine_degrees, degree_sum=degree_sum,
        stable_from=stable_from, sum_constant=sum_constant,
    )


def _confirm_independent(J, monomials, D):
    """Exact rank check: stacking the degree-D ideal piece with the chosen
    monomials must add exactly one rank per monomial."""
    nv = J[0].num_vars
    cols = monomials_of_degree(nv, D)
    col_index = {e: i for i, e in enumerate(cols)}

    def ideal_rows():
        for g in J:
            dg = g.degree
            if dg > D:
                continue
            for m in monomials_of_degree(nv, D - dg):
                yield {
                    col_index[tuple(a + b for a, b in zip(e, m))]: c
                    for e, c in g.terms.items()
                }

    base_rank, _ = rank_sparse(ideal_rows(), len(cols))

    def all_rows():
        yield from ideal_rows()
        for mono in monomials:
            e = next(iter(mono.terms))
            yield {col_index[e]: 1}

    full_rank, _ = rank_sparse(all_rows(), len(cols))
    if full_rank != base_rank + len(monomials):
        raise AssertionError("selected monomials are dependent mod the ideal")


# ---------------------------------------------------------------------
# determinants


@dataclass
class DetCertificate:
    points: list
    k: int
    det: int
    vp: int | None = None          # valuation at p; None when p not given
    vq: int | None = None
    p: int | None = None
    q: int | None = None
    beta_required: int = 0         # k(k-1)/2
    alpha_proxy: int | None = None  # observed v_p, reported not asserted
    log_det_bound: float = 0.0     # k log k + degree_sum * log B
    duplicate_points: bool = False


def build_determinant(points, sel: MonomialSelection, p: int | None = None,
                      q: int | None = None) -> DetCertificate:
    """Exact determinant of affine monomial values at k points.

    Attaches exact valuations at the supplied primes and the logged size
    bound |det| <= k! * B^(degree sum), asserted whenever det != 0.
    """
    points = [tuple(pt) for pt in points]
    if len(points) != sel.k:
        raise ValueError(f"need exactly k = {sel.k} points")
    if any(pt[0] != 1 for pt in points):
        raise ValueError("points must be affine, first coordinate 1")
    affine = sel.affine_monomials()
    matrix = [[m.evaluate(pt[1:]) for pt in points] for m in affine]
    duplicate = len(set(points)) < len(points)
    det = det_bareiss(matrix)
    B = max((max(abs(c) for c in pt) for pt in points), default=1)
    B = max(B, 2)
    bound = 1
    for i in range(1, sel.k + 1):
        bound *= i
    bound *= B ** sel.degree_sum
    if det != 0:
        assert abs(det) <= bound, "determinant exceeded its size bound"
    cert = DetCertificate(
        points=points, k=sel.k, det=det,
        beta_required=sel.k * (sel.k - 1) // 2,
        log_det_bound=sel.k * log(max(sel.k, 2)) + sel.degree_sum * log(B),
        duplicate_points=duplicate,
    )
    if p is not None:
        cert.p = p
        cert.vp = valuation(det, p)
        cert.alpha_proxy = cert.vp
    if q is not None:
        cert.q = q
        cert.vq = valuation(det, q)
    return cert


@dataclass
class DivisibilityVerdict:
    applicable: bool
    passed: bool
    vq: int | None
    required: int
    reason: str = ""


def divisibility_check(cert: DetCertificate, q: int, curve_gens, omega
                       ) -> DivisibilityVerdict:
    """Check q^(k(k-1)/2) | det for points sharing a nonsingular reduction.

    The exponent is the nonsingular-stalk case of the local divisibility
    bound (multiplicities 0, 1, ..., k-1).  When omega is singular on the
    reduced curve the check reports v_q without asserting a bound.
    """
    omega = tuple(x % q for x in omega)
    if omega[0] != 1:
        raise ValueError("omega must be an affine residue point")
    for pt in cert.points:
        if any((a - b) % q for a, b in zip(pt, omega)):
            raise ValueError("certificate points do not reduce to omega")
    gens = list(curve_gens)
    on_curve = all(g.evaluate_mod(omega, q) == 0 for g in gens)
    jac = [[g.partial(j).evaluate_mod(omega, q) for j in range(4)]
           for g in gens]
    rank = _rank_mod(jac, q)
    required = cert.k * (cert.k - 1) // 2
    vq = valuation(cert.det, q)
    if not on_curve or rank != 2:
        return DivisibilityVerdict(
            applicable=False, passed=True, vq=vq, required=required,
            reason="not applicable; reduction is singular (alpha regime)",
        )
    passed = cert.det == 0 or vq >= required
    return DivisibilityVerdict(applicable=True, passed=passed, vq=vq,
                               required=required)


def _rank_mod(rows, p: int) -> int:
    """Rank of a small integer matrix over the prime field F_p."""
    work = [[v % p for v in row] for row in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][c], -1, p)
        work[rank] = [v * inv % p for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                f = work[i][c]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


def vanishing_test(B: int, p: int, q: int, k: int, e: int, d: int,
                   c_alpha: float = 0.0, c_d1: float = 0.0) -> str:
    """Advisory predictor: "zero" when the guaranteed p- and q-divisibility
    outweighs the determinant size bound, else "unknown".

    alpha lower bound k^2/(2(e-1)) - c_alpha*k is never asserted, only
    used for prediction; the exact determinant is always available.
    """
    if min(B, p, q, k, e, d) < 1:
        raise ValueError("parameters must be positive")
    if k < 2 or e < 2:
        return "unknown"
    alpha_lb = max(0.0, k * k / (2 * (e - 1)) - c_alpha * k)
    beta = k * (k - 1) / 2
    d1 = k * log(k) + (k * k / (2 * e)) * log(B) + c_d1 * k * log(B)
    return "zero" if alpha_lb * log(p) + beta * log(q) > d1 else "unknown"


def vanishing_threshold(B: int, p: int, q: int, e: int, d: int,
                        c_alpha: float = 0.0, c_d1: float = 0.0,
                        k_max: int = 10_000):
    """Smallest k whose prediction is "zero", or None below k_max."""
    for k in range(2, k_max + 1):
        if vanishing_test(B, p, q, k, e, d, c_alpha, c_d1) == "zero":
            return k
    return None


# ---------------------------------------------------------------------
# auxiliary forms


@dataclass
class AuxiliaryForm:
    form: IntPoly
    degree: int
    p: int | None
    residue: tuple | None
    rank: int
    basis_size: int


@dataclass
class RankFull:
    rank: int
    basis_size: int


def extract_auxiliary_form(points, degree_or_basis, F: IntPoly,
                           p: int | None = None, residue=None):
    """A primitive integer form vanishing at every class point and not
    divisible by F, from the exact nullspace of the value matrix.

    Returns RankFull when the matrix has full column rank (the basis is
    too small); raises when every nullspace vector is divisible by F.
    """
    points = [tuple(pt) for pt in points]
    if not points:
        raise ValueError("empty point class")
    if isinstance(degree_or_basis, int):
        D = degree_or_basis
        basis = [IntPoly(4, {e: 1}) for e in monomials_of_degree(4, D)]
    else:
        basis = list(degree_or_basis)
        D = basis[0].degree
    rows = [[m.evaluate(pt) for m in basis] for pt in points]
    vectors = nullspace_int(rows, len(basis))
    rank = len(basis) - len(vectors)
    if not vectors:
        return RankFull(rank=rank, basis_size=len(basis))
    for vec in vectors:
        G = IntPoly.zero(4)
        for coef, mono in zip(vec, basis):
            if coef:
                G = G + coef * mono
        G = G.primitive_part().sign_normalized()
        if G.is_zero():
            continue
        if not poly_divides(F, G):
            for pt in points:
                assert G.evaluate(pt) == 0
            return AuxiliaryForm(form=G, degree=D, p=p, residue=residue,
                                 rank=rank, basis_size=len(basis))
    raise ValueError(
        "class lies in a smaller locus than basis captures; increase D"
    )


def curve_section_degree(J, max_degree: int = 40):
    """Stabilized Hilbert value of the hyperplane section of the curve J.

    Scans the graded quotient by (J, X0) until two consecutive values
    agree; returns (value, first degree where it is attained).
    """
    J = list(J)
    J0 = [g.substitute_value(0, 0, drop=True) for g in J]
    J0 = [g for g in J0 if not g.is_zero()]
    prev = None
    for delta in range(max_degree + 1):
        h = graded_piece_basis(J0, [], delta, num_vars=3).dimension
        if prev is not None and h == prev[1]:
            return h, prev[0]
        prev = (delta, h)
    raise ValueError("Hilbert function did not stabilize; not a curve ideal")


def theta_exponent(d: int, n: int) -> int:
    """The coefficient-growth exponent d * C(d + n, n)."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    return d * comb(d + n, n)


def bezout_bound(e: int, deg_g: int) -> int:
    """Maximal intersection count of a degree-e curve with a degree-deg_g
    form sharing no component."""
    if e < 1 or deg_g < 1:
        raise ValueError("need positive degrees")
    return e * deg_g
