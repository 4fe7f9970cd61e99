"""Yoneda extensions: short exact sequences, their actions, sums and splices.

Extensions are stored as concrete representatives.  Pullback and pushout
actions rewrite the new middle object into diagonal form (keeping the two
ends as given), so repeated sums do not inflate generator counts; the
morphism back to (or from) the original sequence is kept as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import abcat
from .abcat import (FpModule, ModMorphism, biproduct, compose, identity,
                    is_zero_morphism, kernel, morphisms_equal, smith_form,
                    solve_from_free, zero_module, zero_morphism)
from .errors import EndpointMismatch, NotExact, YonedaError
from .exactlin import Matrix, hstack, vstack


@dataclass(frozen=True)
class SesMorphism:
    """A morphism ``(alpha, beta, gamma)`` of short exact sequences."""

    source: "ShortExactSeq"
    target: "ShortExactSeq"
    alpha: ModMorphism
    beta: ModMorphism
    gamma: ModMorphism

    def commutes(self) -> bool:
        s, t = self.source, self.target
        return (morphisms_equal(compose(self.beta, s.f), compose(t.f, self.alpha))
                and morphisms_equal(compose(self.gamma, s.g), compose(t.g, self.beta)))


@dataclass(frozen=True)
class ShortExactSeq:
    """``0 -> A -f-> B -g-> C -> 0``.

    Construct through :func:`make_ses` to have exactness verified; the library's
    own constructions build exact sequences and skip the check.
    """

    f: ModMorphism
    g: ModMorphism
    certificate: SesMorphism | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.f.target != self.g.source:
            raise EndpointMismatch("target of f is not the source of g")

    @property
    def A(self) -> FpModule:
        return self.f.source

    @property
    def B(self) -> FpModule:
        return self.f.target

    @property
    def C(self) -> FpModule:
        return self.g.target

    @property
    def ring(self):
        return self.A.ring

    def is_exact(self) -> bool:
        return abcat.sequence_is_exact([self.f, self.g])


def make_ses(f: ModMorphism, g: ModMorphism) -> ShortExactSeq:
    E = ShortExactSeq(f, g)
    if not E.is_exact():
        raise NotExact("0 -> A -> B -> C -> 0 is not exact")
    return E


def split_ses(A: FpModule, C: FpModule) -> ShortExactSeq:
    S, (ia, ic), (pa, pc) = biproduct([A, C])
    return ShortExactSeq(ia, pc)


def tidy_with_maps(E: ShortExactSeq) -> tuple[ShortExactSeq, ModMorphism, ModMorphism]:
    sf = smith_form(E.B)
    return (ShortExactSeq(compose(sf.to_s, E.f), compose(E.g, sf.from_s)),
            sf.to_s, sf.from_s)


def tidy(E: ShortExactSeq) -> ShortExactSeq:
    """An equivalent sequence whose middle is in diagonal form."""
    return tidy_with_maps(E)[0]


def act_right(E: ShortExactSeq, gamma: ModMorphism) -> ShortExactSeq:
    """Pullback ``E gamma`` along ``gamma: C' -> C``.

    The result carries the certificate ``(1, p, gamma): E gamma -> E``.
    """
    if gamma.target != E.C:
        raise EndpointMismatch("act_right: gamma does not land in the right end")
    Cp = gamma.source
    S, _, (pb, pc) = biproduct([E.B, Cp])
    P, incl = kernel(ModMorphism(S, E.C, hstack(E.g.matrix, -gamma.matrix)))
    a_in = ModMorphism(E.A, S, vstack(E.f.matrix, Matrix.zeros(Cp.gens, E.A.gens)))
    fP = abcat.lift(incl, a_in)
    gP = compose(pc, incl)
    raw = ShortExactSeq(fP, gP)
    out, _, back = tidy_with_maps(raw)
    beta = compose(compose(pb, incl), back)
    cert = SesMorphism(out, E, identity(E.A), beta, gamma)
    return ShortExactSeq(out.f, out.g, cert)


def act_left(alpha: ModMorphism, E: ShortExactSeq) -> ShortExactSeq:
    """Pushout ``alpha E`` along ``alpha: A -> X``, certificate ``(alpha, q, 1): E -> alpha E``."""
    if alpha.source != E.A:
        raise EndpointMismatch("act_left: alpha does not start at the left end")
    X = alpha.target
    S, (ib, ix), _ = biproduct([E.B, X])
    Q, proj = abcat.cokernel(ModMorphism(E.A, S, vstack(E.f.matrix, -alpha.matrix)))
    fQ = compose(proj, ix)
    gQ = ModMorphism(Q, E.C, hstack(E.g.matrix, Matrix.zeros(E.C.gens, X.gens)))
    out, to_s, _ = tidy_with_maps(ShortExactSeq(fQ, gQ))
    beta = compose(to_s, compose(proj, ib))
    cert = SesMorphism(E, out, alpha, beta, identity(E.C))
    return ShortExactSeq(out.f, out.g, cert)


def direct_sum_ses(seqs: Sequence[ShortExactSeq]) -> ShortExactSeq:
    return ShortExactSeq(abcat.direct_sum_morphism([E.f for E in seqs]),
                         abcat.direct_sum_morphism([E.g for E in seqs]))


def codiagonal(A: FpModule, copies: int = 2) -> ModMorphism:
    S = biproduct([A] * copies)[0]
    return ModMorphism(S, A, hstack(*[Matrix.identity(A.gens)] * copies))


def diagonal(C: FpModule, copies: int = 2) -> ModMorphism:
    S = biproduct([C] * copies)[0]
    return ModMorphism(C, S, vstack(*[Matrix.identity(C.gens)] * copies))


def _same_ends(E: ShortExactSeq, E2: ShortExactSeq):
    if E.A != E2.A or E.C != E2.C:
        raise EndpointMismatch("extensions do not share both ends")


def baer_sum(E: ShortExactSeq, E2: ShortExactSeq) -> ShortExactSeq:
    _same_ends(E, E2)
    D = direct_sum_ses([E, E2])
    return act_left(codiagonal(E.A), act_right(D, diagonal(E.C)))


def negate(E: ShortExactSeq) -> ShortExactSeq:
    return act_left(identity(E.A).scale(-1), E)


def find_ses_morphism(src: ShortExactSeq, tgt: ShortExactSeq, alpha: ModMorphism,
                      gamma: ModMorphism) -> SesMorphism | None:
    """Search for beta making ``(alpha, beta, gamma): src -> tgt`` a morphism.

    Any lift beta0 of ``gamma g_src`` through ``g_tgt`` can be corrected by
    ``f_tgt delta`` with delta a free matrix into ``tgt.A``; both remaining
    conditions (well-definedness and ``beta f_src = f_tgt alpha``) become one
    congruence system for delta.
    """
    if alpha.source != src.A or alpha.target != tgt.A:
        raise EndpointMismatch("alpha does not connect the left ends")
    if gamma.source != src.C or gamma.target != tgt.C:
        raise EndpointMismatch("gamma does not connect the right ends")
    B0, B1 = src.B, tgt.B
    beta0 = abcat.lift_matrix(tgt.g, gamma.matrix @ src.g.matrix)
    if beta0 is None:
        raise YonedaError("right map of target sequence is not epi")
    Y1 = abcat.lift_matrix(tgt.f, beta0 @ B0.relations)
    Y2 = abcat.lift_matrix(tgt.f, beta0 @ src.f.matrix - tgt.f.matrix @ alpha.matrix)
    if Y1 is None or Y2 is None:
        raise YonedaError("target sequence is not exact in the middle")
    delta = solve_from_free(hstack(B0.relations, src.f.matrix), -hstack(Y1, Y2), tgt.A)
    if delta is None:
        return None
    beta = ModMorphism(B0, B1, beta0 + tgt.f.matrix @ delta)
    return SesMorphism(src, tgt, alpha, beta, gamma)


def equivalent1(E: ShortExactSeq, E2: ShortExactSeq) -> bool:
    """Is there a fixed-ends morphism ``(1, beta, 1): E -> E2``?"""
    _same_ends(E, E2)
    return find_ses_morphism(E, E2, identity(E.A), identity(E.C)) is not None


def section(E: ShortExactSeq) -> ModMorphism | None:
    """A splitting ``s: C -> B`` with ``g s = 1``, or None."""
    s0 = abcat.lift_matrix(E.g, Matrix.identity(E.C.gens))
    Y = abcat.lift_matrix(E.f, s0 @ E.C.relations)
    delta = solve_from_free(E.C.relations, -Y, E.A)
    if delta is None:
        return None
    return ModMorphism(E.C, E.B, s0 + E.f.matrix @ delta)


def is_split(E: ShortExactSeq) -> bool:
    return section(E) is not None


# ---------------------------------------------------------------------------
# n-extensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NExtension:
    """A length-n exact sequence held by its natural decomposition.

    ``seqs`` is ordered ``[eta_n, ..., eta_1]``: ``seqs[0]`` starts at the left
    end A, ``seqs[-1]`` ends at the right end C, and the right end of each
    factor is the left end of the next.
    """

    seqs: tuple[ShortExactSeq, ...]

    def __post_init__(self):
        seqs = tuple(self.seqs)
        object.__setattr__(self, "seqs", seqs)
        if not seqs:
            raise YonedaError("an n-extension needs at least one factor")
        for a, b in zip(seqs, seqs[1:]):
            if a.C != b.A:
                raise EndpointMismatch("adjacent factors do not share their linking object")

    @property
    def degree(self) -> int:
        return len(self.seqs)

    @property
    def A(self) -> FpModule:
        return self.seqs[0].A

    @property
    def C(self) -> FpModule:
        return self.seqs[-1].C

    @property
    def ring(self):
        return self.A.ring

    def splice(self) -> list[ModMorphism]:
        """The long sequence ``A -> X_n -> ... -> X_1 -> C`` as n + 1 maps."""
        s = self.seqs
        chain = [s[0].f]
        for left, right in zip(s, s[1:]):
            chain.append(compose(right.f, left.g))
        chain.append(s[-1].g)
        return chain


def as_next(E: ShortExactSeq | NExtension) -> NExtension:
    return E if isinstance(E, NExtension) else NExtension((E,))


def compose_ext(E: ShortExactSeq | NExtension, E2: ShortExactSeq | NExtension) -> NExtension:
    """Yoneda splice: E ending at K followed by E2 starting at K."""
    E, E2 = as_next(E), as_next(E2)
    if E.C != E2.A:
        raise EndpointMismatch("compose_ext: right end of E is not the left end of E2")
    return NExtension(E.seqs + E2.seqs)


def natural_decomposition(chain: Sequence[ModMorphism]) -> NExtension:
    """Split an exact ``0 -> A -> X_n -> ... -> X_1 -> C -> 0`` at its images.

    Each linking object is presented as the image inside the next term, with
    the corestriction given by the identity matrix on generators.
    """
    chain = list(chain)
    if len(chain) < 2:
        raise YonedaError("a length-n sequence has n + 1 maps, n >= 1")
    if not abcat.sequence_is_exact(chain):
        raise NotExact("natural_decomposition needs an exact sequence")
    seqs = []
    left_in = chain[0]
    for h in chain[1:-1]:
        _, incl, epi = abcat.image(h)
        seqs.append(ShortExactSeq(left_in, epi))
        left_in = incl
    seqs.append(ShortExactSeq(left_in, chain[-1]))
    return NExtension(tuple(seqs))


def split_next(A: FpModule, C: FpModule, n: int) -> NExtension:
    """The zero class representative ``A =1 A -0- ... -0- C =1 C``."""
    if n < 1:
        raise YonedaError("degree must be at least 1")
    if n == 1:
        return NExtension((split_ses(A, C),))
    Z = zero_module(A.ring)
    first = ShortExactSeq(identity(A), zero_morphism(A, Z))
    mid = ShortExactSeq(identity(Z), identity(Z))
    last = ShortExactSeq(zero_morphism(Z, C), identity(C))
    return NExtension((first,) + (mid,) * (n - 2) + (last,))


def nact_left(alpha: ModMorphism, E: ShortExactSeq | NExtension) -> NExtension:
    E = as_next(E)
    return NExtension((act_left(alpha, E.seqs[0]),) + E.seqs[1:])


def nact_right(E: ShortExactSeq | NExtension, gamma: ModMorphism) -> NExtension:
    E = as_next(E)
    return NExtension(E.seqs[:-1] + (act_right(E.seqs[-1], gamma),))


def direct_sum_next(exts: Sequence[ShortExactSeq | NExtension]) -> NExtension:
    exts = [as_next(E) for E in exts]
    n = exts[0].degree
    if any(E.degree != n for E in exts):
        raise YonedaError("direct sum of extensions of different degrees")
    return NExtension(tuple(direct_sum_ses([E.seqs[k] for E in exts]) for k in range(n)))


def nsum(E: ShortExactSeq | NExtension, E2: ShortExactSeq | NExtension) -> NExtension:
    """Baer sum of n-extensions: codiagonal on the left, diagonal on the right."""
    E, E2 = as_next(E), as_next(E2)
    if E.A != E2.A or E.C != E2.C or E.degree != E2.degree:
        raise EndpointMismatch("nsum: extensions differ in ends or degree")
    D = direct_sum_next([E, E2])
    return nact_left(codiagonal(E.A), nact_right(D, diagonal(E.C)))


def nnegate(E: ShortExactSeq | NExtension) -> NExtension:
    E = as_next(E)
    return nact_left(identity(E.A).scale(-1), E)
