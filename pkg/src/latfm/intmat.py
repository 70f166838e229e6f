"""Exact linear algebra over Z and Q on plain tuples.

Matrices are tuples of row tuples, vectors are tuples.  Entries are Python
ints (arbitrary precision) or Fractions; nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction

Vec = tuple
Mat = tuple


def freeze(rows) -> Mat:
    return tuple(tuple(entry for entry in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_dot(u: Vec, v: Vec):
    return sum(x * y for x, y in zip(u, v))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def det(m: Mat) -> int:
    """Exact determinant of an integer matrix (Bareiss fraction-free elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def is_unimodular(m: Mat) -> bool:
    return len(m) == len(m[0]) and abs(det(m)) == 1 if m else True


def smith_normal_form(m: Mat) -> tuple[Mat, Mat, Mat]:
    """Return (U, D, V) with U*m*V = D diagonal, d_i >= 0, d_i | d_{i+1},
    and U, V unimodular."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    a = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        asrc, adst = a[src], a[dst]
        for k in range(ncols):
            adst[k] += q * asrc[k]
        usrc, udst = u[src], u[dst]
        for k in range(nrows):
            udst[k] += q * usrc[k]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            where = None
            for i in range(t, nrows):
                row = a[i]
                for j in range(t, ncols):
                    x = abs(row[j])
                    if x and (best is None or x < best):
                        best, where = x, (i, j)
            if where is None:
                break
            i0, j0 = where
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            if a[t][t] < 0:
                negate_row(t)
            pivot = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                q = a[i][t] // pivot
                if q:
                    add_row(t, i, -q)
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, ncols):
                q = a[t][j] // pivot
                if q:
                    add_col(t, j, -q)
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, nrows):
                row = a[i]
                if any(row[j] % pivot for j in range(t + 1, ncols)):
                    offender = i
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if a[t][t] == 0:
            break
    return freeze(u), freeze(a), freeze(v)


def invariant_factors(m: Mat) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith normal form."""
    _, d, _ = smith_normal_form(m)
    k = min(len(m), len(m[0]) if m else 0)
    return tuple(d[i][i] for i in range(k) if d[i][i])


def hermite_normal_form(m: Mat) -> Mat:
    """Canonical row-style HNF: full-rank rows, positive pivots, entries above
    each pivot reduced into [0, pivot)."""
    nrows = len(m)
    if nrows == 0:
        return ()
    ncols = len(m[0])
    a = [list(row) for row in m]
    r = 0
    for j in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][j]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            while a[i][j]:
                q = a[r][j] // a[i][j]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                a[r], a[i] = a[i], a[r]
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return freeze(a[:r])


def kernel_basis(m: Mat) -> tuple[Vec, ...]:
    """Basis of the saturated integer kernel {x : m.x = 0} (columns of the SNF
    right transform at zero invariant factors)."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    if ncols == 0:
        return ()
    if nrows == 0:
        return tuple(identity(ncols))
    _, d, v = smith_normal_form(m)
    out = []
    for j in range(ncols):
        dj = d[j][j] if j < nrows else 0
        if dj == 0:
            out.append(tuple(v[i][j] for i in range(ncols)))
    return tuple(out)


def solve_integer(m: Mat, rhs: Vec) -> Vec | None:
    """One integer solution of m.x = rhs, or None if none exists."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    u, d, v = smith_normal_form(m)
    b = mat_vec(u, rhs)
    y = [0] * ncols
    for i in range(nrows):
        di = d[i][i] if i < ncols else 0
        if di == 0:
            if b[i]:
                return None
        else:
            if b[i] % di:
                return None
            y[i] = b[i] // di
    return mat_vec(v, tuple(y))


def rational_solve(m: Mat, rhs: Vec) -> tuple[Fraction, ...] | None:
    """One rational solution of m.x = rhs, or None if inconsistent."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, rhs)]
    pivots = []
    r = 0
    for j in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][j]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][j]
        a[r] = [x / inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    for i in range(r, nrows):
        if a[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, j in enumerate(pivots):
        x[j] = a[i][ncols]
    return tuple(x)


def rank(m: Mat) -> int:
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    for j in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][j]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][j]
        a[r] = [x / inv for x in a[r]]
        for i in range(r + 1, nrows):
            if a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def unimodular_inverse(m: Mat) -> Mat:
    """Integer inverse of a unimodular matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == k)) for k in range(n)]
         for i, row in enumerate(m)]
    for j in range(n):
        piv = None
        for i in range(j, n):
            if a[i][j]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        a[j], a[piv] = a[piv], a[j]
        inv = a[j][j]
        a[j] = [x / inv for x in a[j]]
        for i in range(n):
            if i != j and a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[j])]
    out = []
    for i in range(n):
        row = a[i][n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def complete_primitive_vector(c: Vec) -> Mat:
    """Unimodular W with first column c (c primitive), via the Smith transform."""
    k = len(c)
    col = tuple((x,) for x in c)
    u, d, v = smith_normal_form(col)
    if d[0][0] != 1:
        raise ValueError("vector is not primitive")
    w = unimodular_inverse(u)
    sign = v[0][0]
    return tuple(
        tuple(sign * row[0] if j == 0 else row[j] for j in range(k)) for row in w
    )


def complete_primitive_vector_gcd(c: Vec) -> Mat:
    """Unimodular W with first column c, built from a ladder of 2x2 gcd steps.

    Used as an independent cross-check of complete_primitive_vector.
    """
    k = len(c)
    t = [list(row) for row in identity(k)]
    vec = list(c)
    for i in range(1, k):
        a, b = vec[0], vec[i]
        if b == 0:
            continue
        g, x, y = xgcd(a, b)
        p, q = a // g, b // g
        row0 = [x * r0 + y * ri for r0, ri in zip(t[0], t[i])]
        rowi = [-q * r0 + p * ri for r0, ri in zip(t[0], t[i])]
        t[0], t[i] = row0, rowi
        vec[0], vec[i] = g, 0
    if vec[0] == -1:
        t[0] = [-x for x in t[0]]
        vec[0] = 1
    if vec[0] != 1:
        raise ValueError("vector is not primitive")
    return unimodular_inverse(freeze(t))
