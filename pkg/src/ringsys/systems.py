"""Linear systems over a commutative ring and their morphisms.

A system is a state module R^n, an endomorphism, and an input
submodule given by a generator matrix.  Systems form a symmetric
monoidal category under direct sum, with the zero system as unit; the
constructions here (direct sum, trivial systems, dynamic enlargement,
projections/injections of the biproduct) are all matrix-level and
exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DescriptorMismatch, ShapeError, UnsupportedRing
from .linalg import RingMatrix, column_canonical, membership
from .rings import PolyQuotient, RingDescriptor


@dataclass(frozen=True)
class LinearSystem:
    """State rank, endomorphism, and input-submodule generators.

    Over the rationals, prime fields, and the integers the generator
    matrix is canonicalised on construction, so two systems with the
    same input submodule compare equal.  Over polynomial quotient
    rings submodule equality is undecidable here and the generators
    are kept verbatim.
    """

    ring: RingDescriptor
    state_rank: int
    endo: RingMatrix
    input_gens: RingMatrix

    def __post_init__(self):
        n = self.state_rank
        if self.endo.rows != n or self.endo.cols != n:
            raise ShapeError(f"endomorphism must be {n}x{n}")
        if self.input_gens.rows != n:
            raise ShapeError("input generators must have state_rank rows")
        if self.endo.ring != self.ring or self.input_gens.ring != self.ring:
            raise DescriptorMismatch("system parts live in different rings")
        if not isinstance(self.ring, PolyQuotient):
            object.__setattr__(self, "input_gens", column_canonical(self.input_gens))


def from_pair(a: RingMatrix, b: RingMatrix) -> LinearSystem:
    """System of a matrix pair: state R^n, endomorphism a, inputs col(b).

    The correspondence is many-to-one: pairs whose input matrices span
    the same submodule give equal systems.
    """
    if a.rows != a.cols:
        raise ShapeError("state matrix must be square")
    if b.rows != a.rows:
        raise ShapeError("input matrix must have as many rows as the state matrix")
    if a.ring != b.ring:
        raise DescriptorMismatch("pair matrices live in different rings")
    return LinearSystem(a.ring, a.rows, a, b)


def gamma(ring: RingDescriptor, p: int) -> LinearSystem:
    """Trivial ancillary system (R^p, 0, R^p)."""
    if p < 0:
        raise ValueError("rank must be nonnegative")
    return LinearSystem(ring, p, RingMatrix.zeros(ring, p, p), RingMatrix.identity(ring, p))


def zero_system(ring: RingDescriptor) -> LinearSystem:
    """The monoidal unit (0, 0, 0)."""
    return gamma(ring, 0)


def direct_sum(s1: LinearSystem, s2: LinearSystem) -> LinearSystem:
    """Block-diagonal sum of states, endomorphisms, and inputs."""
    if s1.ring != s2.ring:
        raise DescriptorMismatch("cannot sum systems over different rings")
    return LinearSystem(
        s1.ring,
        s1.state_rank + s2.state_rank,
        s1.endo.block_diag(s2.endo),
        s1.input_gens.block_diag(s2.input_gens),
    )


def dynamic_enlarge(sigma: LinearSystem, p: int) -> LinearSystem:
    """Adjoin p free ancillary state variables in front of sigma.

    The ancillary block comes first, matching the leading identity
    block of the enlarged pair form; this ordering is a file-format
    convention as well.
    """
    return direct_sum(gamma(sigma.ring, p), sigma)


def enlarged_pair(a: RingMatrix, b: RingMatrix, p: int) -> tuple[RingMatrix, RingMatrix]:
    """Pair form of dynamic enlargement: (0_p + a, I_p + b) block-diagonally."""
    ring = a.ring
    return (
        RingMatrix.zeros(ring, p, p).block_diag(a),
        RingMatrix.identity(ring, p).block_diag(b),
    )


def is_morphism(phi: RingMatrix, source: LinearSystem, target: LinearSystem) -> bool:
    """Whether phi maps source into target compatibly.

    Checks phi(B1) inside B2 and Im(f2 phi - phi f1) inside B2, column
    by column.  Needs decidable membership, so quotient rings are
    rejected; use certificate verification there instead.
    """
    if source.ring != target.ring:
        raise DescriptorMismatch("morphism endpoints live in different rings")
    if isinstance(source.ring, PolyQuotient):
        raise UnsupportedRing("membership is undecidable here; verify a certificate instead")
    if phi.rows != target.state_rank or phi.cols != source.state_rank:
        raise ShapeError("morphism matrix has the wrong shape")
    g2 = target.input_gens
    mapped = phi @ source.input_gens
    for j in range(mapped.cols):
        if not membership(mapped.column(j), g2):
            return False
    defect = target.endo @ phi - phi @ source.endo
    for j in range(defect.cols):
        if not membership(defect.column(j), g2):
            return False
    return True


@dataclass(frozen=True)
class SystemMorphism:
    """A checked homomorphism of linear systems.

    Construction validates the defining conditions, so holding a
    SystemMorphism is proof of morphism-hood.
    """

    source: LinearSystem
    target: LinearSystem
    matrix: RingMatrix

    def __post_init__(self):
        if not is_morphism(self.matrix, self.source, self.target):
            raise ValueError("matrix does not define a morphism of systems")

    def compose(self, earlier: "SystemMorphism") -> "SystemMorphism":
        """self after earlier (matrix product on the state spaces)."""
        if earlier.target != self.source:
            raise ShapeError("composition endpoints do not match")
        return SystemMorphism(earlier.source, self.target, self.matrix @ earlier.matrix)


def identity_morphism(sigma: LinearSystem) -> SystemMorphism:
    return SystemMorphism(sigma, sigma, RingMatrix.identity(sigma.ring, sigma.state_rank))


def swap_matrix(s1: LinearSystem, s2: LinearSystem) -> RingMatrix:
    """Block swap witnessing s1 + s2 = s2 + s1."""
    ring = s1.ring
    n1, n2 = s1.state_rank, s2.state_rank
    top = RingMatrix.zeros(ring, n2, n1).hstack(RingMatrix.identity(ring, n2))
    bottom = RingMatrix.identity(ring, n1).hstack(RingMatrix.zeros(ring, n1, n2))
    return top.vstack(bottom)


def biproduct_witnesses(
    s1: LinearSystem, s2: LinearSystem
) -> tuple[SystemMorphism, SystemMorphism, SystemMorphism, SystemMorphism]:
    """Projections and injections (pi1, pi2, iota1, iota2) of s1 + s2."""
    total = direct_sum(s1, s2)
    ring = s1.ring
    n1, n2 = s1.state_rank, s2.state_rank
    i1 = RingMatrix.identity(ring, n1)
    i2 = RingMatrix.identity(ring, n2)
    z12 = RingMatrix.zeros(ring, n1, n2)
    z21 = RingMatrix.zeros(ring, n2, n1)
    pi1 = SystemMorphism(total, s1, i1.hstack(z12))
    pi2 = SystemMorphism(total, s2, z21.hstack(i2))
    iota1 = SystemMorphism(s1, total, i1.vstack(z21))
    iota2 = SystemMorphism(s2, total, z12.vstack(i2))
    return pi1, pi2, iota1, iota2
