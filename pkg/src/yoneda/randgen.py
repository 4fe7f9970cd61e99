"""Seeded random modules, morphisms and extensions.

Everything is built so that the contract holds by construction: morphisms
are drawn in diagonal coordinates where well-definedness is a divisibility
condition, and extensions with prescribed ends are pushouts of a free cover,
which reaches every extension class.
"""

from __future__ import annotations

import random
from math import gcd

from . import abcat
from .abcat import (FpModule, ModMorphism, compose, free_module, identity,
                    kernel, present_module, smith_form)
from .exactlin import Matrix, RingSpec
from .yext import NExtension, ShortExactSeq, act_left

KINDS = ("module", "morphism", "ses", "next")


def _hom_step(d: int, e: int) -> int:
    """Generator of the admissible images of ``R/d -> R/e`` (0 forces zero)."""
    if e == 0:
        return 1 if d == 0 else 0
    return e // gcd(d, e)


class RandomGen:
    """Random instances over one ring; deterministic for a given seed."""

    def __init__(self, ring: RingSpec | int = 0, seed: int = 0, max_gens: int = 4,
                 max_entry: int = 8):
        self.ring = ring if isinstance(ring, RingSpec) else RingSpec(ring)
        self.rng = random.Random(seed)
        self.max_gens = max_gens
        self.max_entry = max_entry

    def _entry(self) -> int:
        m = self.ring.modulus
        if m:
            zd = [d for d in range(2, m) if gcd(d, m) > 1 and d <= self.max_entry]
            if zd and self.rng.random() < 0.8:
                return self.rng.choice(zd)
            return self.rng.randrange(min(m, self.max_entry + 1))
        return self.rng.randint(-self.max_entry, self.max_entry)

    def module(self, max_gens: int | None = None, min_gens: int = 1) -> FpModule:
        top = self.max_gens if max_gens is None else max_gens
        g = self.rng.randint(min(min_gens, top), top)
        # free modules have vanishing Ext, so keep them a minority
        k = 0 if self.rng.random() < 0.15 else self.rng.randint(1, g)
        cols = [[self._entry() for _ in range(g)] for _ in range(k)]
        # sparse-ish relations give a mix of free and torsion summands
        for c in cols:
            for i in range(g):
                if self.rng.random() < 0.35:
                    c[i] = 0
        return present_module(self.ring, g, Matrix.from_columns(cols, g))

    def morphism(self, src: FpModule | None = None, tgt: FpModule | None = None) -> ModMorphism:
        src = self.module() if src is None else src
        tgt = self.module() if tgt is None else tgt
        ss, st = smith_form(src), smith_form(tgt)
        H = []
        for e in st.factors:
            row = []
            for d in ss.factors:
                step = _hom_step(d, e)
                if step == 0:
                    row.append(0)
                elif e:
                    row.append(step * self.rng.randrange(e // step))
                else:
                    row.append(self.rng.randint(-self.max_entry, self.max_entry))
            H.append(row)
        Hm = Matrix(H, len(st.factors), len(ss.factors))
        return compose(st.from_s, compose(ModMorphism(ss.module, st.module, Hm), ss.to_s))

    def scalar(self) -> int:
        m = self.ring.modulus
        return self.rng.randrange(m) if m else self.rng.randint(-3, 3)

    def cover(self, C: FpModule) -> ShortExactSeq:
        """``0 -> K -> F -> C -> 0`` with F free on the generators of C."""
        F = free_module(self.ring, C.gens)
        eps = ModMorphism(F, C, Matrix.identity(C.gens))
        K, incl = kernel(eps)
        return ShortExactSeq(incl, eps)

    def ses(self, A: FpModule | None = None, C: FpModule | None = None) -> ShortExactSeq:
        """A random extension of C by A.

        With both ends given, push the free cover of C out along a random
        ``K -> A``.  With no ends given, embed the image of a random morphism
        into a random B and take the cokernel.
        """
        if A is None and C is None:
            B = self.module()
            f = self.morphism(self.module(), B)
            _, incl, _ = abcat.image(f)
            _, proj = abcat.cokernel(incl)
            return ShortExactSeq(incl, proj)
        A = self.module() if A is None else A
        C = self.module() if C is None else C
        E0 = self.cover(C)
        return act_left(self.morphism(E0.A, A), E0)

    def next(self, A: FpModule | None = None, C: FpModule | None = None,
             n: int = 2) -> NExtension:
        """A random n-extension; the linking objects are random modules or syzygies."""
        A = self.module() if A is None else A
        C = self.module() if C is None else C
        if n == 1:
            return NExtension((self.ses(A, C),))
        if self.rng.random() < 0.5:
            return self._syzygy_next(A, C, n)
        if self.rng.random() < 0.5:
            last = self.cover(C)
            K = last.A
        else:
            K = self.module(max_gens=2)
            last = self.ses(K, C)
        return NExtension(self.next(A, K, n - 1).seqs + (last,))

    def _syzygy_next(self, A: FpModule, C: FpModule, n: int) -> NExtension:
        """Truncated free resolution of C pushed out along a random map from the n-th syzygy.

        Every class of ``Ext^n(C, A)`` arises this way.
        """
        covers = []
        K = C
        for _ in range(n - 1):
            covers.append(self.cover(K))
            K = covers[-1].A
        return NExtension((self.ses(A, K),) + tuple(reversed(covers)))

    def mono(self, A: FpModule | None = None) -> ModMorphism:
        """A random monomorphism, as the inclusion of an image."""
        f = self.morphism(self.module() if A is None else A, self.module())
        return abcat.image(f)[1]

    def endo_scalar(self, M: FpModule) -> ModMorphism:
        return identity(M).scale(self.scalar())


def random_instance(ring: RingSpec | int, kind: str, seed: int, max_gens: int = 4,
                    max_entry: int = 8):
    """One random value of the given kind; identical for identical arguments."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    gen = RandomGen(ring, seed, max_gens, max_entry)
    if kind == "module":
        return gen.module()
    if kind == "morphism":
        return gen.morphism()
    if kind == "ses":
        return gen.ses()
    return gen.next(n=2)
