"""Extensions against finite coproducts and products.

For a finite family the coproduct ``(+)A_i`` is the biproduct.  ``psi_n``
restricts an extension of ``(+)A_i`` along the injections; ``theta`` glues a
family of 1-extensions with a common left end through the colimit of their
left maps, and ``psi_n_inverse`` extends this to degree n by splicing with
componentwise direct sums.  The dual statements use products, projections
and limits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from . import abcat
from .abcat import (DiagramSpec, FpModule, ModMorphism, biproduct, colimit,
                    compose, identity, is_mono, limit, make_morphism,
                    morphisms_equal, zero_morphism)
from .errors import EndpointMismatch, NotMono, YonedaError
from .exactlin import Matrix, hstack, vstack
from .resolution import classes_equal, ext_order
from .yext import (NExtension, SesMorphism, ShortExactSeq, tidy_with_maps,
                   as_next, direct_sum_ses, nact_left, nact_right, section)


@dataclass(frozen=True)
class ExtFamily:
    """Extensions of a common degree sharing one end.

    With ``side="left"`` the shared object is the left end B (the setting of
    ``theta``); with ``side="right"`` it is the right end (the dual setting).
    """

    components: tuple[NExtension, ...]
    side: str = "left"

    def __post_init__(self):
        comps = tuple(as_next(E) for E in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise YonedaError("an extension family must be nonempty")
        if self.side not in ("left", "right"):
            raise YonedaError(f"unknown family side {self.side!r}")
        n, ring = comps[0].degree, comps[0].ring
        for E in comps:
            if E.degree != n:
                raise YonedaError("family members have different degrees")
            if E.ring != ring:
                raise YonedaError("family members live over different rings")
        shared = [E.A if self.side == "left" else E.C for E in comps]
        if any(X != shared[0] for X in shared):
            raise EndpointMismatch(f"family members do not share their {self.side} end")

    @property
    def degree(self) -> int:
        return self.components[0].degree

    @property
    def B(self) -> FpModule:
        E = self.components[0]
        return E.A if self.side == "left" else E.C

    def __len__(self):
        return len(self.components)


def _as_family(fam, side: str) -> ExtFamily:
    if isinstance(fam, ExtFamily):
        if fam.side != side:
            raise YonedaError(f"expected a family sharing the {side} end")
        return fam
    return ExtFamily(tuple(fam), side)


def _check_injections(E: NExtension, injections: Sequence[ModMorphism]):
    S, inj, _ = biproduct([u.source for u in injections])
    if E.C != S:
        raise EndpointMismatch("right end of E is not the biproduct of the injection sources")
    for u, v in zip(injections, inj):
        if u.target != S or not morphisms_equal(u, v):
            raise EndpointMismatch("injections are not the canonical ones")


def _check_projections(E: NExtension, projections: Sequence[ModMorphism]):
    S, _, proj = biproduct([p.target for p in projections])
    if E.A != S:
        raise EndpointMismatch("left end of E is not the product of the projection targets")
    for p, q in zip(projections, proj):
        if p.source != S or not morphisms_equal(p, q):
            raise EndpointMismatch("projections are not the canonical ones")


def psi_n(E: ShortExactSeq | NExtension, injections: Sequence[ModMorphism]) -> list[NExtension]:
    """``(E mu_i)_i`` for the canonical injections ``mu_i: A_i -> (+)A_i``."""
    E = as_next(E)
    _check_injections(E, injections)
    return [nact_right(E, mu) for mu in injections]


def phi_n(E: ShortExactSeq | NExtension, projections: Sequence[ModMorphism]) -> list[NExtension]:
    """``(pi_i E)_i`` for the canonical projections ``pi_i: prod A_i -> A_i``."""
    E = as_next(E)
    _check_projections(E, projections)
    return [nact_left(pi, E) for pi in projections]


@dataclass(frozen=True)
class GluedSequence:
    """Result of :func:`theta` or :func:`theta_dual` with its certificates."""

    seq: ShortExactSeq
    certificates: tuple[SesMorphism, ...] = field(compare=False)


def theta(fam) -> ShortExactSeq:
    return theta_certified(fam).seq


def theta_certified(fam) -> GluedSequence:
    """Glue ``eta_i: 0 -> B -f_i-> X_i -g_i-> C_i -> 0`` into one sequence.

    The middle is the colimit of the wide diagram ``B -> X_i`` and the right
    end is ``(+)C_i``.  Certificates ``(1, u_i, mu_i): eta_i -> eta`` are
    returned in family order.
    """
    fam = _as_family(fam, "left")
    if fam.degree != 1:
        raise YonedaError("theta takes a family of short exact sequences")
    seqs = [E.seqs[0] for E in fam.components]
    B = fam.B
    d = DiagramSpec((B,) + tuple(E.B for E in seqs),
                    tuple((0, i + 1, E.f) for i, E in enumerate(seqs)))
    L, cocone = colimit(d)
    f = cocone[0]
    if not is_mono(f):
        raise NotMono("colimit map from the shared end is not mono")
    S, mus, _ = biproduct([E.C for E in seqs], B.ring)
    family = [zero_morphism(B, S)] + [compose(mu, E.g) for mu, E in zip(mus, seqs)]
    g = abcat.colimit_factor(d, L, family)
    out, to_s, _ = tidy_with_maps(ShortExactSeq(f, g))
    certs = tuple(SesMorphism(E, out, identity(B), compose(to_s, u), mu)
                  for E, u, mu in zip(seqs, cocone[1:], mus))
    return GluedSequence(out, certs)


def theta_dual(fam) -> ShortExactSeq:
    return theta_dual_certified(fam).seq


def theta_dual_certified(fam) -> GluedSequence:
    """Glue ``eta_i: 0 -> A_i -> X_i -g_i-> C -> 0`` through the limit of the g_i.

    The result ``0 -> prod A_i -> lim -> C -> 0`` carries certificates
    ``(pi_i, p_i, 1): eta -> eta_i``.
    """
    fam = _as_family(fam, "right")
    if fam.degree != 1:
        raise YonedaError("theta_dual takes a family of short exact sequences")
    seqs = [E.seqs[0] for E in fam.components]
    C = fam.B
    d = DiagramSpec((C,) + tuple(E.B for E in seqs),
                    tuple((i + 1, 0, E.g) for i, E in enumerate(seqs)))
    L, cone = limit(d)
    g = cone[0]
    if not abcat.is_epi(g):
        raise YonedaError("limit map onto the shared end is not epi")
    P, _, pis = biproduct([E.A for E in seqs], C.ring)
    Pd, _, _ = biproduct(d.objects)
    incl = ModMorphism(L, Pd, vstack(*[c.matrix for c in cone]))
    into = ModMorphism(P, Pd, vstack(Matrix.zeros(C.gens, P.gens),
                                     *[(E.f.matrix @ pi.matrix) for E, pi in zip(seqs, pis)]))
    f = abcat.lift(incl, into)
    if f is None:
        raise YonedaError("product of left ends does not factor through the limit")
    out, _, from_s = tidy_with_maps(ShortExactSeq(f, g))
    certs = tuple(SesMorphism(out, E, pi, compose(p, from_s), identity(C))
                  for E, p, pi in zip(seqs, cone[1:], pis))
    return GluedSequence(out, certs)


def psi_n_inverse(tuples, n: int | None = None) -> NExtension:
    """An extension of ``(+)C_i`` whose restrictions are the given classes.

    Glue the leftmost factors with :func:`theta`, then splice with the
    componentwise direct sums of the remaining factors, left to right.
    """
    fam = _as_family(tuples, "left")
    if n is not None and n != fam.degree:
        raise YonedaError(f"family has degree {fam.degree}, expected {n}")
    comps = fam.components
    first = theta(ExtFamily(tuple(as_next(E.seqs[0]) for E in comps)))
    rest = [direct_sum_ses([E.seqs[k] for E in comps]) for k in range(1, fam.degree)]
    return NExtension((first,) + tuple(rest))


def phi_n_inverse(tuples, n: int | None = None) -> NExtension:
    """Dual of :func:`psi_n_inverse` for families sharing their right end."""
    fam = _as_family(tuples, "right")
    if n is not None and n != fam.degree:
        raise YonedaError(f"family has degree {fam.degree}, expected {n}")
    comps = fam.components
    last = theta_dual(ExtFamily(tuple(as_next(E.seqs[-1]) for E in comps), "right"))
    rest = [direct_sum_ses([E.seqs[k] for E in comps]) for k in range(fam.degree - 1)]
    return NExtension(tuple(rest) + (last,))


def psi1_section(E: ShortExactSeq, injections: Sequence[ModMorphism]) -> ModMorphism | None:
    """A section of E assembled from sections of the restrictions ``E mu_i``.

    Returns None as soon as one restriction does not split.
    """
    _check_injections(as_next(E), injections)
    pieces = []
    for mu in injections:
        Ei = nact_right(E, mu).seqs[0]
        h = section(Ei)
        if h is None:
            return None
        pieces.append(compose(Ei.certificate.beta, h))
    h = make_morphism(E.C, E.B, hstack(*[p.matrix for p in pieces]))
    if not morphisms_equal(compose(E.g, h), identity(E.C)):
        raise YonedaError("assembled map is not a section")
    return h


# -- the colimit of pushouts along a family of monos -------------------------

@dataclass
class Ab4Report:
    """Equations verified by :func:`ab4_colim_check`, in order."""

    checks: list[tuple[str, bool]] = field(default_factory=list)
    colim: FpModule | None = None
    Lambda: ModMorphism | None = None
    Lambda_inv: ModMorphism | None = None

    def add(self, name: str, ok: bool):
        self.checks.append((name, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def lines(self) -> list[str]:
        return [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in self.checks]


def ab4_colim_check(alphas: Sequence[ModMorphism]) -> Ab4Report:
    """Identify the colimit of the pushouts of ``alpha_i`` along ``mu_i`` with ``(+)B_i``.

    Each ``E_i`` is the pushout of ``alpha_i: A_i -> B_i`` and the injection
    ``mu_i: A_i -> (+)A_i``, with ``f_i: (+)A_i -> E_i``.  ``Lambda`` out of
    ``colim(f_i)`` is induced by ``alpha = (+)alpha_i`` and the maps
    ``gamma_i = [g_i | alpha]``; ``Lambda'`` sends the i-th summand through
    ``u_i mu'_i``.
    """
    alphas = list(alphas)
    if not alphas:
        raise YonedaError("ab4_colim_check needs a nonempty family")
    for a in alphas:
        if not is_mono(a):
            raise NotMono("ab4_colim_check: family member is not mono")
    SA, mus, _ = biproduct([a.source for a in alphas])
    SB, gs, _ = biproduct([a.target for a in alphas])
    alpha = abcat.direct_sum_morphism(alphas)
    pushouts = [abcat.pushout(a, mu) for a, mu in zip(alphas, mus)]
    d = DiagramSpec((SA,) + tuple(P for P, _, _ in pushouts),
                    tuple((0, i + 1, fi) for i, (_, _, fi) in enumerate(pushouts)))
    L, cocone = colimit(d)
    f, us = cocone[0], cocone[1:]
    rep = Ab4Report(colim=L)
    gammas = [make_morphism(P, SB, hstack(g.matrix, alpha.matrix))
              for (P, _, _), g in zip(pushouts, gs)]
    for i, ((P, mup, fi), g, gam) in enumerate(zip(pushouts, gs, gammas), start=1):
        rep.add(f"gamma_{i} mu'_{i} = g_{i}", morphisms_equal(compose(gam, mup), g))
        rep.add(f"gamma_{i} f_{i} = alpha", morphisms_equal(compose(gam, fi), alpha))
    Lam = abcat.colimit_factor(d, L, [alpha] + gammas)
    Lam_inv = make_morphism(SB, L, hstack(*[compose(u, mup).matrix
                                           for u, (_, mup, _) in zip(us, pushouts)]))
    rep.Lambda, rep.Lambda_inv = Lam, Lam_inv
    for i, (u, gam) in enumerate(zip(us, gammas), start=1):
        rep.add(f"Lambda u_{i} = gamma_{i}", morphisms_equal(compose(Lam, u), gam))
    rep.add("Lambda f = (+)alpha_i", morphisms_equal(compose(Lam, f), alpha))
    rep.add("Lambda Lambda' = 1", morphisms_equal(compose(Lam, Lam_inv), identity(SB)))
    rep.add("Lambda' Lambda = 1", morphisms_equal(compose(Lam_inv, Lam), identity(L)))
    rep.add("(+)alpha_i mono", is_mono(alpha))
    return rep


# -- group orders --------------------------------------------------------------

def coproduct_orders(As: Sequence[FpModule], B: FpModule, n: int) -> tuple[int | None, int | None]:
    """``(|Ext^n((+)A_i, B)|, prod |Ext^n(A_i, B)|)``; None marks an infinite group."""
    S = biproduct(list(As))[0]
    whole = ext_order(S, B, n)
    parts = [ext_order(A, B, n) for A in As]
    return whole, (None if any(p is None for p in parts) else prod(parts))


def product_orders(B: FpModule, As: Sequence[FpModule], n: int) -> tuple[int | None, int | None]:
    """``(|Ext^n(B, prod A_i)|, prod |Ext^n(B, A_i)|)``."""
    S = biproduct(list(As))[0]
    whole = ext_order(B, S, n)
    parts = [ext_order(B, A, n) for A in As]
    return whole, (None if any(p is None for p in parts) else prod(parts))


def components_equal(left: Sequence[NExtension], right: Sequence[NExtension]) -> bool:
    return len(left) == len(right) and all(classes_equal(a, b) for a, b in zip(left, right))
