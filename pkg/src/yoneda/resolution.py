"""Free-resolution oracle for extension classes.

``Ext^n(C, A)`` is computed as ``H^n(Hom(F., A))`` for a deterministic free
resolution ``F. -> C``.  A Yoneda n-extension is sent to a cocycle by lifting
the identity of C along the spliced sequence; class equality of extensions
is then equality of reduced cohomology coordinates.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from . import abcat
from .abcat import (FpModule, ModMorphism, biproduct, cokernel, free_module,
                    kernel, smith_form)
from .errors import EndpointMismatch, YonedaError
from .exactlin import Matrix, kron
from .yext import NExtension, ShortExactSeq, as_next

_res_cache: dict[FpModule, list[ModMorphism]] = {}
_res_lock = threading.Lock()


def free_resolution(C: FpModule, length: int) -> list[ModMorphism]:
    """``[eps, d_1, ..., d_length]`` with ``eps: F_0 -> C`` and ``d_k: F_k -> F_{k-1}``.

    F_0 is free on the generators of C.  Each further term is free on the
    diagonal-form generators of the previous kernel, in order.  Once a kernel
    vanishes every later term is the zero module.
    """
    if length < 0:
        raise YonedaError("resolution length must be nonnegative")
    with _res_lock:
        maps = _res_cache.get(C)
        if maps is None:
            F0 = free_module(C.ring, C.gens)
            maps = [ModMorphism(F0, C, Matrix.identity(C.gens))]
            _res_cache[C] = maps
        while len(maps) <= length:
            K, incl = kernel(maps[-1])
            sf = smith_form(K)
            F = free_module(C.ring, sf.module.gens)
            maps.append(ModMorphism(F, maps[-1].source,
                                    incl.matrix @ sf.from_s.matrix))
        return list(maps[:length + 1])


def _hom_free(A: FpModule, rank: int) -> FpModule:
    return biproduct([A] * rank, A.ring)[0]


def _vec(M: Matrix) -> list[int]:
    return [x for col in M.columns() for x in col]


def _unvec(v, rows: int, cols: int) -> Matrix:
    return Matrix.from_columns([v[j * rows:(j + 1) * rows] for j in range(cols)], rows)


class ExtGroup:
    """Presentation of ``Ext^n(C, A)`` together with coordinate maps."""

    def __init__(self, C: FpModule, A: FpModule, n: int):
        if n < 1:
            raise YonedaError("Ext degree must be at least 1")
        if C.ring != A.ring:
            raise YonedaError("Ext between modules over different rings")
        self.C, self.A, self.n = C, A, n
        self.resolution = free_resolution(C, n + 1)
        ranks = [d.source.gens for d in self.resolution]
        self.ranks = ranks
        a = A.gens
        self.cochains = [_hom_free(A, r) for r in ranks]

        def coboundary(k):
            D = self.resolution[k].matrix
            return ModMorphism(self.cochains[k - 1], self.cochains[k],
                               kron(D.T, Matrix.identity(a)))

        Z, self._incl = kernel(coboundary(n + 1))
        W = abcat.lift(self._incl, coboundary(n))
        if W is None:
            raise YonedaError("coboundaries do not compose to zero")
        H, _ = cokernel(W)
        self._smith = smith_form(H)
        self.factors: tuple[int, ...] = self._smith.factors

    def order(self) -> int | None:
        if any(d == 0 for d in self.factors):
            return None
        return prod(self.factors)

    def coords_of_cocycle(self, psi: Matrix) -> tuple[int, ...]:
        """Coordinates of the class of ``psi: F_n -> A`` (an ``a x rank_n`` matrix)."""
        v = Matrix([[x] for x in _vec(psi)], self.A.gens * self.ranks[self.n], 1)
        u = abcat.lift_matrix(self._incl, v)
        if u is None:
            raise YonedaError("matrix is not a cocycle")
        c = self._smith.to_s.matrix @ u
        return self._smith.module.reduce(c.column(0))

    def cocycle_of_coords(self, coords) -> Matrix:
        c = Matrix([[x] for x in coords], len(coords), 1)
        v = self._incl.matrix @ (self._smith.from_s.matrix @ c)
        return _unvec(v.column(0), self.A.gens, self.ranks[self.n]).reduce(self.A.modulus)

    def element(self, coords) -> "ExtClass":
        return ExtClass(self.C, self.A, self.n, self.factors,
                        self._smith.module.reduce(coords))

    def zero(self) -> "ExtClass":
        return self.element([0] * len(self.factors))


@lru_cache(maxsize=2048)
def ext_group_data(C: FpModule, A: FpModule, n: int) -> ExtGroup:
    return ExtGroup(C, A, n)


def ext_group(C: FpModule, A: FpModule, n: int) -> list[int]:
    """Invariant factors of ``Ext^n(C, A)``; an empty list means the zero group."""
    return list(ext_group_data(C, A, n).factors)


def ext_order(C: FpModule, A: FpModule, n: int) -> int | None:
    return ext_group_data(C, A, n).order()


def format_group(factors, modulus: int = 0) -> str:
    if not factors:
        return "0"
    return " x ".join("Z" if d == 0 else f"Z/{d}" for d in factors)


@dataclass(frozen=True)
class ExtClass:
    C: FpModule
    A: FpModule
    degree: int
    invariant_factors: tuple[int, ...]
    coords: tuple[int, ...]

    def _check(self, other: "ExtClass"):
        if (self.C, self.A, self.degree) != (other.C, other.A, other.degree):
            raise EndpointMismatch("classes live in different Ext groups")

    @property
    def group(self) -> ExtGroup:
        return ext_group_data(self.C, self.A, self.degree)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "ExtClass":
        return self.group.element([-a for a in self.coords])

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        if self.is_zero():
            return "0"
        return f"({', '.join(map(str, self.coords))}) in {format_group(self.invariant_factors)}"


def comparison_cocycle(E: ShortExactSeq | NExtension) -> Matrix:
    """Lift ``1_C`` along E to a cocycle ``F_n -> A``."""
    E = as_next(E)
    n = E.degree
    res = free_resolution(E.C, n)
    rs = list(reversed(E.seqs))
    phi = abcat.lift_matrix(rs[0].g, res[0].matrix)
    psi = None
    for k in range(1, n + 1):
        t = phi @ res[k].matrix
        psi = abcat.lift_matrix(rs[k - 1].f, t)
        if psi is None:
            raise YonedaError("extension is not exact where the lift needs it")
        if k < n:
            phi = abcat.lift_matrix(rs[k].g, psi)
            if phi is None:
                raise YonedaError("extension factor is not epi")
    return psi


def yoneda_class(E: ShortExactSeq | NExtension) -> ExtClass:
    E = as_next(E)
    G = ext_group_data(E.C, E.A, E.degree)
    return G.element(G.coords_of_cocycle(comparison_cocycle(E)))


def classes_equal(E: ShortExactSeq | NExtension, E2: ShortExactSeq | NExtension) -> bool:
    E, E2 = as_next(E), as_next(E2)
    if E.A != E2.A or E.C != E2.C:
        raise EndpointMismatch("classes_equal: extensions do not share both ends")
    if E.degree != E2.degree:
        raise EndpointMismatch("classes_equal: extensions have different degrees")
    return yoneda_class(E).coords == yoneda_class(E2).coords


def class_is_zero(E: ShortExactSeq | NExtension) -> bool:
    return yoneda_class(E).is_zero()


# -- cohomology maps induced by morphisms -------------------------------------

def lift_chain_map(gamma: ModMorphism, length: int) -> list[Matrix]:
    """Matrices ``gamma_k: F'_k -> F_k`` over ``gamma: C' -> C`` for k <= length."""
    src = free_resolution(gamma.source, length)
    tgt = free_resolution(gamma.target, length)
    maps = [abcat.lift_matrix(tgt[0], gamma.matrix @ src[0].matrix)]
    for k in range(1, length + 1):
        maps.append(abcat.lift_matrix(tgt[k], maps[k - 1] @ src[k].matrix))
        if maps[-1] is None:
            raise YonedaError("chain map lift failed")
    return maps


def induced_left(alpha: ModMorphism, cls: ExtClass) -> ExtClass:
    """The class ``alpha_*(cls)`` in ``Ext^n(C, A')`` for ``alpha: A -> A'``."""
    if alpha.source != cls.A:
        raise EndpointMismatch("induced_left: alpha does not start at A")
    psi = cls.group.cocycle_of_coords(cls.coords)
    G = ext_group_data(cls.C, alpha.target, cls.degree)
    return G.element(G.coords_of_cocycle(alpha.matrix @ psi))


def induced_right(cls: ExtClass, gamma: ModMorphism) -> ExtClass:
    """The class ``gamma^*(cls)`` in ``Ext^n(C', A)`` for ``gamma: C' -> C``."""
    if gamma.target != cls.C:
        raise EndpointMismatch("induced_right: gamma does not land in C")
    psi = cls.group.cocycle_of_coords(cls.coords)
    gn = lift_chain_map(gamma, cls.degree)[cls.degree]
    G = ext_group_data(gamma.source, cls.A, cls.degree)
    return G.element(G.coords_of_cocycle(psi @ gn))
