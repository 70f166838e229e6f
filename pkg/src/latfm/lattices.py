"""Integral lattices with exact Gram-matrix arithmetic.

A lattice is a free Z-module of finite rank carrying a non-degenerate
symmetric integer bilinear form; everything is stored as an exact Gram
matrix.  Vectors are columns, so a change of basis B acts on the Gram
matrix as B^t G B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import NamedTuple

from .errors import (
    DegenerateError,
    LatfmError,
    NotIsotropicError,
    NotPrimitiveError,
    NotSymmetricError,
    ZeroScaleError,
)
from .intmat import (
    Mat,
    Vec,
    complete_primitive_vector,
    det,
    freeze,
    hermite_normal_form,
    invariant_factors,
    kernel_basis,
    mat_mul,
    mat_vec,
    rank as matrix_rank,
    solve_integer,
    transpose,
    unimodular_inverse,
)


class Signature(NamedTuple):
    plus: int
    minus: int

    @property
    def rank(self) -> int:
        return self.plus + self.minus


def _signature_of_gram(gram: Mat) -> Signature:
    """Sylvester signature by exact symmetric elimination over Q.

    A nonzero diagonal entry is used as an ordinary pivot; if every active
    diagonal entry vanishes, a nonzero off-diagonal entry spans a hyperbolic
    2x2 block contributing (1, 1), which is eliminated as a block pivot.
    """
    work = [[Fraction(x) for x in row] for row in gram]
    active = list(range(len(gram)))
    plus = minus = 0
    while active:
        p = next((i for i in active if work[i][i] != 0), None)
        if p is not None:
            val = work[p][p]
            if val > 0:
                plus += 1
            else:
                minus += 1
            rest = [i for i in active if i != p]
            for i in rest:
                ci = work[i][p] / val
                if ci:
                    for j in rest:
                        work[i][j] -= ci * work[p][j]
            active = rest
            continue
        pq = next(
            ((i, j) for i in active for j in active if i < j and work[i][j] != 0),
            None,
        )
        if pq is None:
            raise DegenerateError("form is degenerate")
        p, q = pq
        a = work[p][q]
        plus += 1
        minus += 1
        rest = [i for i in active if i != p and i != q]
        for i in rest:
            cp = work[i][p] / a
            cq = work[i][q] / a
            if cp or cq:
                for j in rest:
                    work[i][j] -= cp * work[q][j] + cq * work[p][j]
        active = rest
    return Signature(plus, minus)


@dataclass(frozen=True)
class Lattice:
    """Non-degenerate integral lattice given by its Gram matrix."""

    gram: Mat

    def __post_init__(self):
        g = freeze(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise LatfmError("Gram matrix must be square of positive size")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise NotSymmetricError(f"gram[{i}][{j}] != gram[{j}][{i}]")
        if self.det == 0:
            raise DegenerateError("Gram matrix has determinant zero")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> Signature:
        return _signature_of_gram(self.gram)

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def dot(self, x: Vec, y: Vec):
        gy = mat_vec(self.gram, y)
        return sum(a * b for a, b in zip(x, gy))

    def square(self, x: Vec):
        return self.dot(x, x)


def make_lattice(gram) -> Lattice:
    return Lattice(freeze(gram))


def determinant(lattice: Lattice) -> int:
    return lattice.det


def is_even(lattice: Lattice) -> bool:
    return lattice.is_even


def signature(lattice: Lattice) -> Signature:
    return lattice.signature


def direct_sum(*lattices: Lattice) -> Lattice:
    if not lattices:
        raise LatfmError("direct sum of no lattices")
    n = sum(lat.rank for lat in lattices)
    rows = [[0] * n for _ in range(n)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                rows[offset + i][offset + j] = lat.gram[i][j]
        offset += lat.rank
    return Lattice(freeze(rows))


def rescale(lattice: Lattice, k: int) -> Lattice:
    if k == 0:
        raise ZeroScaleError("cannot rescale by zero")
    return Lattice(freeze((k * x for x in row) for row in lattice.gram))


@dataclass(frozen=True)
class SublatticeEmbedding:
    """Sublattice of an ambient lattice, spanned by the given coordinate vectors."""

    ambient: Lattice
    basis: tuple[Vec, ...]

    def __post_init__(self):
        basis = freeze(self.basis)
        object.__setattr__(self, "basis", basis)
        n = self.ambient.rank
        if any(len(v) != n for v in basis):
            raise LatfmError("basis vector length does not match ambient rank")
        if basis and matrix_rank(basis) != len(basis):
            raise LatfmError("basis vectors are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Mat:
        # ambient.rank x rank; columns are the basis vectors
        return transpose(self.basis)

    @cached_property
    def induced_gram(self) -> Mat:
        b = self.matrix
        return mat_mul(transpose(b), mat_mul(self.ambient.gram, b))

    def lattice(self) -> Lattice:
        return Lattice(self.induced_gram)


def sublattice(ambient: Lattice, basis) -> SublatticeEmbedding:
    return SublatticeEmbedding(ambient, freeze(basis))


def orthogonal_complement(v: SublatticeEmbedding) -> SublatticeEmbedding:
    """Saturated orthogonal complement, with HNF-canonical basis."""
    pairing = mat_mul(v.basis, v.ambient.gram)  # rank x n, rows = b(v_i, -)
    kern = kernel_basis(pairing)
    return SublatticeEmbedding(v.ambient, hermite_normal_form(kern))


def is_primitive(v: SublatticeEmbedding) -> bool:
    """True iff ambient/V is torsion-free (all coordinate invariant factors 1)."""
    if not v.basis:
        return True
    return all(f == 1 for f in invariant_factors(v.matrix))


def is_primitive_vector(x: Vec) -> bool:
    g = 0
    for entry in x:
        g = gcd(g, entry)
    return g == 1


@dataclass(frozen=True)
class IsotropicQuotient:
    """Quotient V/Zv of a sublattice by a primitive isotropic vector it contains,
    together with the projection V -> V/Zv in coordinates."""

    lattice: Lattice
    source: SublatticeEmbedding
    quotient_basis: tuple[Vec, ...]  # ambient-coordinate lifts of the quotient basis
    _projection: Mat  # (rank-1) x rank, applied to source coordinates

    def project(self, x: Vec) -> Vec:
        """Coordinates in the quotient of an ambient vector lying in V."""
        coords = solve_integer(self.source.matrix, x)
        if coords is None:
            raise LatfmError("vector does not lie in the sublattice")
        return mat_vec(self._projection, coords)


def isotropic_quotient(
    v_perp: SublatticeEmbedding, v: Vec, completion=complete_primitive_vector
) -> IsotropicQuotient:
    ambient = v_perp.ambient
    if ambient.square(v) != 0:
        raise NotIsotropicError("vector has nonzero square")
    if not is_primitive_vector(v):
        raise NotPrimitiveError("vector is not primitive in the ambient lattice")
    gv = mat_vec(ambient.gram, v)
    if any(vec_pairing != 0 for vec_pairing in mat_vec(v_perp.basis, gv)):
        raise LatfmError("sublattice is not contained in the orthogonal of v")
    if v_perp.rank != ambient.rank - 1:
        raise LatfmError("sublattice does not span the full orthogonal of v")
    coords = solve_integer(v_perp.matrix, v)
    if coords is None:
        raise LatfmError("v does not lie in the sublattice")
    if not is_primitive_vector(coords):
        raise NotPrimitiveError("v is not primitive inside the sublattice")
    w = completion(coords)
    k = len(coords)
    lifted = []
    for j in range(1, k):
        col = tuple(w[i][j] for i in range(k))
        lifted.append(mat_vec(v_perp.matrix, col))
    gram = tuple(
        tuple(ambient.dot(x, y) for y in lifted) for x in lifted
    )
    projection = unimodular_inverse(w)[1:]
    return IsotropicQuotient(
        lattice=Lattice(gram),
        source=v_perp,
        quotient_basis=tuple(lifted),
        _projection=freeze(projection),
    )


def quotient_by_isotropic(v_perp: SublatticeEmbedding, v: Vec) -> Lattice:
    """Lattice V/Zv for a primitive isotropic v with V = v-perp."""
    return isotropic_quotient(v_perp, v).lattice


def _e8_gram() -> Mat:
    # Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 2
    edges = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7))
    rows = [[0] * 8 for _ in range(8)]
    for i in range(8):
        rows[i][i] = 2
    for i, j in edges:
        rows[i][j] = rows[j][i] = -1
    return freeze(rows)


U = Lattice(((0, 1), (1, 0)))
E8 = Lattice(_e8_gram())
E8_MINUS = rescale(E8, -1)
K3 = direct_sum(U, U, U, E8_MINUS, E8_MINUS)
