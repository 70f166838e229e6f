import random
from fractions import Fraction

import pytest

from latfm.intmat import (
    complete_primitive_vector,
    complete_primitive_vector_gcd,
    det,
    hermite_normal_form,
    identity,
    invariant_factors,
    kernel_basis,
    mat_mul,
    mat_vec,
    rank,
    rational_solve,
    smith_normal_form,
    solve_integer,
    transpose,
    unimodular_inverse,
    xgcd,
)


def random_matrix(rng, nrows, ncols, bound=6):
    return tuple(
        tuple(rng.randint(-bound, bound) for _ in range(ncols)) for _ in range(nrows)
    )


def fraction_det(m):
    # independent determinant: plain fraction elimination
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            c = a[i][k] / a[k][k]
            a[i] = [x - c * y for x, y in zip(a[i], a[k])]
    out = Fraction(sign)
    for k in range(n):
        out *= a[k][k]
    assert out.denominator == 1
    return int(out)


def test_xgcd():
    for a, b in [(12, 18), (-12, 18), (0, 5), (5, 0), (0, 0), (7, 13), (-4, -6)]:
        g, x, y = xgcd(a, b)
        assert g == x * a + y * b
        assert g >= 0
        if a or b:
            assert a % g == 0 and b % g == 0


def test_det_known_values():
    assert det(((0, 1), (1, 0))) == -1
    assert det(((2, 3), (3, 0))) == -9
    assert det(((2,),)) == 2
    assert det(((1, 2), (2, 4))) == 0


def test_det_matches_fraction_elimination():
    rng = random.Random(4821)
    for _ in range(60):
        n = rng.randint(1, 5)
        m = random_matrix(rng, n, n)
        assert det(m) == fraction_det(m)


@pytest.mark.parametrize(
    "matrix,factors",
    [
        (((2, 0), (0, 2)), (2, 2)),
        (((2, 3), (3, 0)), (1, 9)),  # gcd of entries 1, |det| = 9
        (((12,),), (12,)),
        (((1, 0), (0, 1)), (1, 1)),
    ],
)
def test_snf_known_factors(matrix, factors):
    _, d, _ = smith_normal_form(matrix)
    assert tuple(d[i][i] for i in range(len(factors))) == factors


def test_snf_properties_random():
    rng = random.Random(90125)
    for _ in range(80):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        m = random_matrix(rng, nrows, ncols)
        u, d, v = smith_normal_form(m)
        assert mat_mul(u, mat_mul(m, v)) == d
        assert abs(det(u)) == 1
        assert abs(det(v)) == 1
        diag = [d[i][i] for i in range(min(nrows, ncols))]
        for i in range(nrows):
            for j in range(ncols):
                if i != j:
                    assert d[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            assert a >= 0 and b >= 0
            if a:
                assert b % a == 0
            else:
                assert b == 0


def test_hnf_canonical_properties():
    rng = random.Random(777)
    for _ in range(60):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        m = random_matrix(rng, nrows, ncols)
        h = hermite_normal_form(m)
        assert hermite_normal_form(h) == h  # idempotent
        # row lattice is preserved: same invariant factors, every HNF row is an
        # integer combination of the original rows and vice versa
        if h:
            assert invariant_factors(m) == invariant_factors(h)
            for row in h:
                assert solve_integer(transpose(m), row) is not None
            for row in m:
                if any(row):
                    assert solve_integer(transpose(h), row) is not None
        pivots = []
        for row in h:
            j = next(k for k, x in enumerate(row) if x)
            assert row[j] > 0
            pivots.append(j)
            for above in range(len(pivots) - 1):
                assert 0 <= h[above][j] < row[j]
        assert pivots == sorted(pivots)


def test_kernel_basis():
    rng = random.Random(2024)
    for _ in range(60):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 5)
        m = random_matrix(rng, nrows, ncols)
        kern = kernel_basis(m)
        for vec in kern:
            assert mat_vec(m, vec) == (0,) * nrows
        assert len(kern) == ncols - rank(m)
        if kern:
            # saturated: the kernel basis extends to a basis of Z^ncols
            assert all(f == 1 for f in invariant_factors(kern))


def test_solve_integer():
    m = ((2, 0), (0, 3))
    assert solve_integer(m, (4, 9)) == (2, 3)
    assert solve_integer(m, (1, 0)) is None
    rng = random.Random(5150)
    for _ in range(40):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        m = random_matrix(rng, nrows, ncols)
        x = tuple(rng.randint(-5, 5) for _ in range(ncols))
        target = mat_vec(m, x)
        found = solve_integer(m, target)
        assert found is not None
        assert mat_vec(m, found) == target


def test_rational_solve():
    m = ((2, 1), (1, 1))
    assert rational_solve(m, (1, 0)) == (Fraction(1), Fraction(-1))
    assert rational_solve(((1, 1), (2, 2)), (1, 3)) is None


def test_unimodular_inverse():
    m = ((2, 1), (1, 1))
    inv = unimodular_inverse(m)
    assert mat_mul(m, inv) == identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse(((2, 0), (0, 2)))


@pytest.mark.parametrize("completion", [complete_primitive_vector,
                                        complete_primitive_vector_gcd])
def test_primitive_completion(completion):
    rng = random.Random(31415)
    cases = [(1,), (0, 1), (-1, 0), (2, 3), (6, 10, 15), (0, 0, 1, 0)]
    for _ in range(30):
        k = rng.randint(1, 5)
        vec = tuple(rng.randint(-9, 9) for _ in range(k))
        from math import gcd
        g = 0
        for x in vec:
            g = gcd(g, x)
        if g == 1:
            cases.append(vec)
    for vec in cases:
        w = completion(vec)
        assert abs(det(w)) == 1
        assert tuple(row[0] for row in w) == vec
    with pytest.raises(ValueError):
        completion((2, 4))
