"""Finitely presented modules over Z or Z/m as a concrete abelian category.

A module is ``coker(R^k -> R^g)`` for an integer relation matrix whose
columns are the relations.  Presentations are kept in a canonical column
Hermite form, so two presentations of the same relation lattice are equal as
Python objects; isomorphic but differently presented modules are *not*.
Morphisms are matrices on generators; equality of morphisms is always tested
modulo the target's relations (:func:`morphisms_equal`), never by comparing
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import prod
from typing import Sequence

from .errors import (EndpointMismatch, MalformedDiagram, NotWellDefined,
                     RingMismatch, YonedaError)
from .exactlin import (ZZ, Matrix, RingSpec, _smith_both, block_diag, hstack,
                       kernel_columns, lattice_basis, reduce_vector,
                       solve_columns, solve_modular, vstack)


@dataclass(frozen=True)
class FpModule:
    ring: RingSpec
    gens: int
    relations: Matrix
    _basis: tuple = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.ring, RingSpec):
            object.__setattr__(self, "ring", RingSpec(self.ring))
        if self.relations.rows != self.gens:
            raise YonedaError(
                f"relation matrix has {self.relations.rows} rows for {self.gens} generators")
        rels, basis = _canonical(self.relations, self.gens, self.ring.modulus)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "_basis", basis)

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    @property
    def lattice(self) -> Matrix:
        """Basis of the full relation lattice over Z (``m * Z^g`` included)."""
        return Matrix.from_columns([v for _, v in self._basis], self.gens)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of the element with coordinates v."""
        return reduce_vector(self._basis, v, self.modulus)

    def is_zero_element(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def is_zero(self) -> bool:
        return len(self._basis) == self.gens and all(v[p] == 1 for p, v in self._basis)

    def is_free(self) -> bool:
        return self.relations.cols == 0

    def order(self) -> int | None:
        """Number of elements, or None when the module is infinite."""
        if len(self._basis) < self.gens:
            return None
        return prod(v[p] for p, v in self._basis)

    def elements(self):
        """Iterate canonical representatives of all elements (finite modules only)."""
        if self.order() is None:
            raise YonedaError("cannot enumerate an infinite module")
        ranges = [range(v[p]) for p, v in self._basis]
        for x in product(*ranges):
            yield x

    def __str__(self):
        rows = ";".join(",".join(str(x) for x in r) for r in self.relations.data)
        return f"FpModule({self.ring}, gens={self.gens}, [{rows}])"


@lru_cache(maxsize=8192)
def _canonical(relations: Matrix, gens: int, m: int):
    """Echelon basis of the relation lattice and the stored relation columns."""
    basis = lattice_basis(relations.columns(), gens, m)
    if m:
        kept = [v for p, v in basis if not (v[p] == m and sum(v) == m)]
    else:
        kept = [v for _, v in basis]
    return Matrix.from_columns(kept, gens), basis


def present_module(ring: RingSpec | int, gens: int, relations: Matrix | None = None) -> FpModule:
    ring = ring if isinstance(ring, RingSpec) else RingSpec(ring)
    if relations is None:
        relations = Matrix.zeros(gens, 0)
    return FpModule(ring, gens, relations)


def free_module(ring: RingSpec | int, rank: int) -> FpModule:
    return present_module(ring, rank)


def zero_module(ring: RingSpec | int) -> FpModule:
    return present_module(ring, 0)


def cyclic_module(ring: RingSpec | int, order: int) -> FpModule:
    """R / (order); ``order == 0`` gives the free module of rank one."""
    return present_module(ring, 1, Matrix([[order]], 1, 1))


@dataclass(frozen=True)
class ModMorphism:
    source: FpModule
    target: FpModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.gens, self.source.gens):
            raise YonedaError(
                f"morphism matrix is {self.matrix.shape}, expected "
                f"{(self.target.gens, self.source.gens)}")
        if self.source.ring != self.target.ring:
            raise RingMismatch("morphism between modules over different rings")
        m = self.target.modulus
        if m:
            object.__setattr__(self, "matrix", self.matrix.reduce(m))

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    def __matmul__(self, other: "ModMorphism") -> "ModMorphism":
        return compose(self, other)

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        _same_ends(self, other)
        return ModMorphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModMorphism") -> "ModMorphism":
        _same_ends(self, other)
        return ModMorphism(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "ModMorphism":
        return ModMorphism(self.source, self.target, -self.matrix)

    def scale(self, c: int) -> "ModMorphism":
        return ModMorphism(self.source, self.target, self.matrix.scale(c))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [sum(a * x for a, x in zip(row, v)) for row in self.matrix.data]
        return self.target.reduce(out)


def _same_ends(f: ModMorphism, g: ModMorphism):
    if f.source != g.source or f.target != g.target:
        raise EndpointMismatch("morphisms do not share source and target")


def is_well_defined(source: FpModule, target: FpModule, matrix: Matrix) -> bool:
    img = matrix @ source.relations
    return all(target.is_zero_element(c) for c in img.columns())


def make_morphism(source: FpModule, target: FpModule, matrix: Matrix) -> ModMorphism:
    """Validated constructor: raises NotWellDefined if relations are not respected.

    Membership of ``matrix @ relations`` in the target's relation lattice is
    decided by echelon reduction, which is equivalent to the existence of a
    certificate X with ``matrix @ R_src = R_tgt @ X``.
    """
    if matrix.shape != (target.gens, source.gens):
        raise YonedaError(f"matrix shape {matrix.shape} does not match "
                          f"{target.gens}x{source.gens}")
    if not is_well_defined(source, target, matrix):
        raise NotWellDefined("matrix does not map source relations into target relations")
    return ModMorphism(source, target, matrix)


def identity(M: FpModule) -> ModMorphism:
    return ModMorphism(M, M, Matrix.identity(M.gens))


def zero_morphism(source: FpModule, target: FpModule) -> ModMorphism:
    return ModMorphism(source, target, Matrix.zeros(target.gens, source.gens))


def morphisms_equal(f: ModMorphism, g: ModMorphism) -> bool:
    _same_ends(f, g)
    return is_zero_morphism(f - g)


def is_zero_morphism(f: ModMorphism) -> bool:
    return all(f.target.is_zero_element(c) for c in f.matrix.columns())


def compose(g: ModMorphism, f: ModMorphism) -> ModMorphism:
    """g after f."""
    if f.target != g.source:
        raise EndpointMismatch("compose: target of f is not the source of g")
    return ModMorphism(f.source, g.target, g.matrix @ f.matrix)


def compose_all(*maps: ModMorphism) -> ModMorphism:
    """compose_all(h, g, f) == h after g after f."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        out = compose(g, out)
    return out


# -- spans and lifting -------------------------------------------------------

def in_span(columns: Matrix, target: FpModule, vectors: Matrix) -> bool:
    """True iff every column of ``vectors`` lies in ``im(columns)`` in target."""
    basis = lattice_basis(columns.columns() + target.relations.columns(), target.gens,
                          target.modulus)
    return all(not any(reduce_vector(basis, v, target.modulus)) for v in vectors.columns())


def lift_matrix(f: ModMorphism, T: Matrix) -> Matrix | None:
    """Some X with ``f.matrix @ X == T`` modulo the target's relations."""
    Y = f.target
    A = hstack(f.matrix, Y.lattice) if Y.lattice.cols else f.matrix
    X = solve_columns(A, T, ZZ)
    if X is None:
        return None
    X = X.submatrix(range(f.source.gens), range(X.cols))
    return X.reduce(Y.modulus)


def lift(f: ModMorphism, t: ModMorphism) -> ModMorphism | None:
    """A morphism u with ``f @ u == t``, or None.

    When ``t.source`` is not free and f is not mono, the particular solution may
    fail to be well defined; None is returned in that case too, so callers that
    need a well-defined lift through a non-mono should use a Hom system instead.
    """
    if f.target != t.target:
        raise EndpointMismatch("lift: f and t have different targets")
    X = lift_matrix(f, t.matrix)
    if X is None or not is_well_defined(t.source, f.source, X):
        return None
    return ModMorphism(t.source, f.source, X)


# -- canonical diagonal form -------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """An isomorphism between M and a diagonal presentation S of M.

    ``factors[i]`` is the invariant factor of generator i of S; 0 marks a free
    Z-summand and m marks a free summand over Z/m.  Unit factors are dropped.
    """

    module: FpModule
    to_s: ModMorphism
    from_s: ModMorphism
    factors: tuple[int, ...]


@lru_cache(maxsize=4096)
def smith_form(M: FpModule) -> SmithForm:
    g = M.gens
    B = M.lattice
    s = _smith_both(B) if B.cols else None
    diag = list(s.diag) if s else []
    d = diag + [0] * (g - len(diag))
    kept = [i for i in range(g) if d[i] != 1]
    factors = tuple(d[i] for i in kept)
    S = present_module(M.ring, len(kept), Matrix.diagonal(factors))
    if s:
        U, Ui = s.U, s.Uinv
    else:
        U = Ui = Matrix.identity(g)
    to_s = ModMorphism(M, S, U.submatrix(kept, range(g)))
    from_s = ModMorphism(S, M, Ui.submatrix(range(g), kept))
    return SmithForm(S, to_s, from_s, factors)


def invariant_factor_report(M: FpModule) -> tuple[int, ...]:
    return smith_form(M).factors


def solve_from_free(M: Matrix, T: Matrix, A: FpModule) -> Matrix | None:
    """Find an integer matrix D with ``D @ M == T`` modulo the relations of A.

    D is a morphism from a free module; rows decouple once A is rewritten in
    diagonal form, so each row is a small congruence system.
    """
    sf = smith_form(A)
    T2 = sf.to_s.matrix @ T
    rows = []
    for i, d in enumerate(sf.factors):
        rhs = Matrix([[x] for x in T2.data[i]], T2.cols, 1)
        x = solve_modular(M.T, rhs, RingSpec(d))
        if x is None:
            return None
        rows.append(x.column(0))
    D2 = Matrix(rows, len(rows), M.rows)
    return (sf.from_s.matrix @ D2).reduce(A.modulus)


# -- kernels, cokernels, images ---------------------------------------------

def kernel(f: ModMorphism) -> tuple[FpModule, ModMorphism]:
    """Kernel of f with its inclusion into f.source.

    Generators are the echelon basis of ``{x : f(x) in relations(target)}``,
    skipping those already zero in the source.
    """
    X, Y = f.source, f.target
    m = X.modulus
    g = X.gens
    block = hstack(f.matrix, -Y.lattice) if Y.lattice.cols else f.matrix
    K0 = kernel_columns(block, ZZ)
    pre = [c[:g] for c in K0.columns()]
    basis = lattice_basis(pre, g, m)
    H = [v for _, v in basis if not X.is_zero_element(v)]
    Hm = Matrix.from_columns(H, g)
    k = len(H)
    if k:
        rel_block = hstack(Hm, -X.lattice) if X.lattice.cols else Hm
        R = kernel_columns(rel_block, ZZ)
        rel = R.submatrix(range(k), range(R.cols))
    else:
        rel = Matrix.zeros(0, 0)
    K = present_module(X.ring, k, rel)
    return K, ModMorphism(K, X, Hm)


def cokernel(f: ModMorphism) -> tuple[FpModule, ModMorphism]:
    Y = f.target
    Q = present_module(Y.ring, Y.gens, hstack(Y.relations, f.matrix))
    return Q, ModMorphism(Y, Q, Matrix.identity(Y.gens))


def image(f: ModMorphism) -> tuple[FpModule, ModMorphism, ModMorphism]:
    """``(I, incl, epi)`` with ``f == incl @ epi``; I is generated by f's columns."""
    X, Y = f.source, f.target
    g = X.gens
    block = hstack(f.matrix, -Y.lattice) if Y.lattice.cols else f.matrix
    R = kernel_columns(block, ZZ)
    I = present_module(X.ring, g, R.submatrix(range(g), range(R.cols)))
    return I, ModMorphism(I, Y, f.matrix), ModMorphism(X, I, Matrix.identity(g))


def is_mono(f: ModMorphism) -> bool:
    return kernel(f)[0].is_zero()


def is_epi(f: ModMorphism) -> bool:
    Y = f.target
    return in_span(f.matrix, Y, Matrix.identity(Y.gens))


def is_iso(f: ModMorphism) -> bool:
    return is_epi(f) and is_mono(f)


def sequence_is_exact(chain: Sequence[ModMorphism], left_zero: bool = True,
                      right_zero: bool = True) -> bool:
    """Exactness of ``[0 ->] X0 -> X1 -> ... -> Xk [-> 0]``.

    With the default flags the chain is flanked by zero objects, so the first
    map must be mono and the last epi.
    """
    if not chain:
        raise YonedaError("empty chain")
    for f, g in zip(chain, chain[1:]):
        if f.target != g.source:
            raise EndpointMismatch("chain is not composable")
    if left_zero and not is_mono(chain[0]):
        return False
    if right_zero and not is_epi(chain[-1]):
        return False
    for f, g in zip(chain, chain[1:]):
        if not is_zero_morphism(compose(g, f)):
            return False
        _, incl = kernel(g)
        if not in_span(f.matrix, g.source, incl.matrix):
            return False
    return True


# -- biproducts, pullbacks, pushouts -----------------------------------------

def biproduct(mods: Sequence[FpModule], ring: RingSpec | None = None
              ) -> tuple[FpModule, list[ModMorphism], list[ModMorphism]]:
    """Direct sum with injections and projections, in input order.

    ``ring`` only matters for the empty family, whose biproduct is zero.
    """
    S, inj, proj = _biproduct(tuple(mods), ring)
    return S, list(inj), list(proj)


@lru_cache(maxsize=4096)
def _biproduct(mods: tuple[FpModule, ...], ring: RingSpec | None):
    if mods:
        ring = mods[0].ring
        if any(M.ring != ring for M in mods):
            raise RingMismatch("biproduct of modules over different rings")
    elif ring is None:
        ring = ZZ
    total = sum(M.gens for M in mods)
    rels = block_diag(*[M.relations for M in mods]) if mods else Matrix.zeros(0, 0)
    S = present_module(ring, total, rels)
    inj, proj = [], []
    offset = 0
    for M in mods:
        E = [[int(i == offset + j) for j in range(M.gens)] for i in range(total)]
        inj.append(ModMorphism(M, S, Matrix(E, total, M.gens)))
        proj.append(ModMorphism(S, M, Matrix(E, total, M.gens).T))
        offset += M.gens
    return S, tuple(inj), tuple(proj)


def direct_sum_morphism(maps: Sequence[ModMorphism]) -> ModMorphism:
    """``f1 (+) f2 (+) ...`` between the biproducts of sources and targets."""
    S = biproduct([f.source for f in maps])[0]
    T = biproduct([f.target for f in maps])[0]
    return ModMorphism(S, T, block_diag(*[f.matrix for f in maps]))


def pullback(g: ModMorphism, a: ModMorphism) -> tuple[FpModule, ModMorphism, ModMorphism]:
    """Pullback of ``g: B -> C`` and ``a: X -> C``; ``g @ pr_left == a @ pr_right``."""
    if g.target != a.target:
        raise EndpointMismatch("pullback: morphisms have different targets")
    S, _, (pb, px) = biproduct([g.source, a.source])
    P, incl = kernel(ModMorphism(S, g.target, hstack(g.matrix, -a.matrix)))
    return P, compose(pb, incl), compose(px, incl)


def pushout(f: ModMorphism, a: ModMorphism) -> tuple[FpModule, ModMorphism, ModMorphism]:
    """Pushout of ``f: A -> B`` and ``a: A -> X``; ``in_left @ f == in_right @ a``."""
    if f.source != a.source:
        raise EndpointMismatch("pushout: morphisms have different sources")
    S, (ib, ix), _ = biproduct([f.target, a.target])
    Q, proj = cokernel(ModMorphism(f.source, S, vstack(f.matrix, -a.matrix)))
    return Q, compose(proj, ib), compose(proj, ix)


# -- finite colimits and limits ----------------------------------------------

@dataclass(frozen=True)
class DiagramSpec:
    """A finite diagram: objects by index and a generating list of arrows.

    Only a generating set of arrows needs to be listed; (co)compatibility with
    generators implies it for all composites.
    """

    objects: tuple[FpModule, ...]
    arrows: tuple[tuple[int, int, ModMorphism], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        n = len(self.objects)
        if n == 0:
            raise MalformedDiagram("diagram has no objects")
        for s, t, F in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise MalformedDiagram(f"arrow index out of range: {s} -> {t}")
            if F.source != self.objects[s] or F.target != self.objects[t]:
                raise MalformedDiagram(f"arrow {s} -> {t} does not match its objects")


def colimit(d: DiagramSpec) -> tuple[FpModule, list[ModMorphism]]:
    """Colimit as the cokernel of ``(+)F(s(l)) -> (+)F(i)`` with blocks ``u_s - u_t F(l)``."""
    S, inj, _ = biproduct(d.objects)
    D, _, _ = biproduct([d.objects[s] for s, _, _ in d.arrows], S.ring)
    blocks = [inj[s].matrix - inj[t].matrix @ F.matrix for s, t, F in d.arrows]
    phi = ModMorphism(D, S, hstack(*blocks) if blocks else Matrix.zeros(S.gens, 0))
    C, p = cokernel(phi)
    return C, [compose(p, u) for u in inj]


def limit(d: DiagramSpec) -> tuple[FpModule, list[ModMorphism]]:
    """Limit as the kernel of ``prod F(i) -> prod F(t(l))`` with blocks ``F(l) p_s - p_t``."""
    P, _, proj = biproduct(d.objects)
    T, _, _ = biproduct([d.objects[t] for _, t, _ in d.arrows], P.ring)
    blocks = [F.matrix @ proj[s].matrix - proj[t].matrix for s, t, F in d.arrows]
    phi = ModMorphism(P, T, vstack(*blocks) if blocks else Matrix.zeros(0, P.gens))
    L, incl = kernel(phi)
    return L, [compose(pr, incl) for pr in proj]


def is_cocone(d: DiagramSpec, cocone: Sequence[ModMorphism]) -> bool:
    return all(morphisms_equal(compose(cocone[t], F), cocone[s]) for s, t, F in d.arrows)


def is_cone(d: DiagramSpec, cone: Sequence[ModMorphism]) -> bool:
    return all(morphisms_equal(compose(F, cone[s]), cone[t]) for s, t, F in d.arrows)


def colimit_factor(d: DiagramSpec, C: FpModule, family: Sequence[ModMorphism]) -> ModMorphism:
    """The map out of :func:`colimit`'s object induced by a co-compatible family.

    The colimit is generated by the generators of all objects in order, so the
    induced map is the block row of the family's matrices.
    """
    X = family[0].target
    return make_morphism(C, X, hstack(*[f.matrix for f in family]))


def limit_factor(d: DiagramSpec, L: FpModule, incl_cone: Sequence[ModMorphism],
                 family: Sequence[ModMorphism]) -> ModMorphism | None:
    """The map into :func:`limit`'s object induced by a compatible family."""
    W = family[0].source
    P, _, _ = biproduct(d.objects)
    into_product = ModMorphism(W, P, vstack(*[f.matrix for f in family]))
    # the limit's generators sit inside the product; recover the inclusion
    incl = ModMorphism(L, P, vstack(*[c.matrix for c in incl_cone]))
    return lift(incl, into_product)
