"""Randomised law checks shared by the test-suite and the ``laws`` command.

Every suite function takes a :class:`RandomGen` and returns a list of
``Check(name, ok, witness)``; one call is one random instance.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from .abcat import (biproduct, compose, direct_sum_morphism, identity,
                    zero_morphism)
from .coprodext import (ExtFamily, ab4_colim_check, coproduct_orders, phi_n,
                        phi_n_inverse, product_orders, psi1_section, psi_n,
                        psi_n_inverse, theta)
from .randgen import RandomGen
from .resolution import (class_is_zero, classes_equal, induced_left,
                         induced_right, yoneda_class)
from .yext import (NExtension, act_left, act_right, as_next, baer_sum,
                   compose_ext, direct_sum_next, direct_sum_ses, equivalent1,
                   find_ses_morphism, is_split, nact_left, nact_right, negate,
                   nsum, split_next, split_ses)


class Check(NamedTuple):
    name: str
    ok: bool
    witness: str = ""


def _both(name: str, E, F) -> list[Check]:
    """Degree-one equality decided by the oracle and by a fixed-ends morphism."""
    c = classes_equal(E, F)
    e = equivalent1(E, F)
    return [Check(name, c and e, f"oracle={c} morphism={e}"),
            Check(name + " [deciders agree]", c == e, f"oracle={c} morphism={e}")]


def _cls(name: str, E, F) -> Check:
    ok = classes_equal(E, F)
    return Check(name, ok, f"{yoneda_class(E)} vs {yoneda_class(F)}")


def baer_group(gen: RandomGen) -> list[Check]:
    A, C = gen.module(), gen.module()
    E, F, G = gen.ses(A, C), gen.ses(A, C), gen.ses(A, C)
    Z = split_ses(A, C)
    out = []
    out += _both("commutativity", baer_sum(E, F), baer_sum(F, E))
    out += _both("associativity", baer_sum(baer_sum(E, F), G), baer_sum(E, baer_sum(F, G)))
    out += _both("identity", baer_sum(E, Z), E)
    out += _both("inverse", baer_sum(E, negate(E)), Z)
    out.append(Check("split iff zero class", is_split(E) == class_is_zero(E),
                     str(yoneda_class(E))))
    return out


def bilinear_one(gen: RandomGen) -> list[Check]:
    """Identities for 1-extensions and morphism actions."""
    A, C, A2, C2 = gen.module(), gen.module(), gen.module(2), gen.module(2)
    E, E1 = gen.ses(A, C), gen.ses(A, C)
    E2 = gen.ses(A2, C2)
    X, Y = gen.module(2), gen.module(2)
    a, a1 = gen.morphism(A, X), gen.morphism(A, X)
    a2 = gen.morphism(A2, gen.module(2))
    c, c1 = gen.morphism(Y, C), gen.morphism(Y, C)
    c2 = gen.morphism(gen.module(2), C2)
    aa = gen.morphism(X, gen.module(2))
    cc = gen.morphism(gen.module(2), Y)
    D = direct_sum_ses([E, E2])
    out = []
    out += _both("1E = E", act_left(identity(A), E), E)
    out += _both("E1 = E", act_right(E, identity(C)), E)
    out += _both("(a'a)E = a'(aE)", act_left(compose(aa, a), E), act_left(aa, act_left(a, E)))
    out += _both("E(cc') = (Ec)c'", act_right(E, compose(c, cc)), act_right(act_right(E, c), cc))
    out += _both("(aE)c = a(Ec)", act_right(act_left(a, E), c), act_left(a, act_right(E, c)))
    out += _both("(a (+) a')(E (+) E') = aE (+) a'E'",
                 act_left(direct_sum_morphism([a, a2]), D),
                 direct_sum_ses([act_left(a, E), act_left(a2, E2)]))
    out += _both("(a+a')E = aE + a'E", act_left(a + a1, E),
                 baer_sum(act_left(a, E), act_left(a1, E)))
    out += _both("a(E+E') = aE + aE'", act_left(a, baer_sum(E, E1)),
                 baer_sum(act_left(a, E), act_left(a, E1)))
    out += _both("(E (+) E')(c (+) c') = Ec (+) E'c'",
                 act_right(D, direct_sum_morphism([c, c2])),
                 direct_sum_ses([act_right(E, c), act_right(E2, c2)]))
    out += _both("E(c+c') = Ec + Ec'", act_right(E, c + c1),
                 baer_sum(act_right(E, c), act_right(E, c1)))
    out += _both("(E+E')c = Ec + E'c", act_right(baer_sum(E, E1), c),
                 baer_sum(act_right(E, c), act_right(E1, c)))
    out += _both("0E = split", act_left(zero_morphism(A, X), E), split_ses(X, C))
    out += _both("E0 = split", act_right(E, zero_morphism(Y, C)), split_ses(A, Y))
    return out


def bilinear_n(gen: RandomGen) -> list[Check]:
    """Identities for spliced extensions (degree two by default)."""
    A, C, D = gen.module(2), gen.module(2), gen.module(2)
    A2, C2, D2 = gen.module(2), gen.module(2), gen.module(2)
    E, E1 = gen.ses(A, C), gen.ses(A, C)
    F, F1 = gen.ses(C, D), gen.ses(C, D)
    E2, F2 = gen.ses(A2, C2), gen.ses(C2, D2)
    EF = compose_ext(E, F)
    EF1 = compose_ext(E1, F)
    X, Y = gen.module(2), gen.module(2)
    a, a1 = gen.morphism(A, X), gen.morphism(A, X)
    a2 = gen.morphism(A2, gen.module(2))
    g, g1 = gen.morphism(Y, D), gen.morphism(Y, D)
    g2 = gen.morphism(gen.module(2), D2)
    aa = gen.morphism(X, gen.module(2))
    Cp = gen.module(2)
    b = gen.morphism(Cp, C)
    Fp = gen.ses(Cp, D)
    EF2 = compose_ext(E2, F2)
    DS = direct_sum_next([EF, EF2])
    out = [
        _cls("(Eb)F = E(bF)", compose_ext(act_right(E, b), Fp), compose_ext(E, act_left(b, Fp))),
        _cls("1E = E", nact_left(identity(A), EF), EF),
        _cls("E1 = E", nact_right(EF, identity(D)), EF),
        _cls("(a'a)E = a'(aE)", nact_left(compose(aa, a), EF), nact_left(aa, nact_left(a, EF))),
        _cls("(a (+) a')(E (+) E') = aE (+) a'E'", nact_left(direct_sum_morphism([a, a2]), DS),
             direct_sum_next([nact_left(a, EF), nact_left(a2, EF2)])),
        _cls("(E (+) E')(g (+) g') = Eg (+) E'g'", nact_right(DS, direct_sum_morphism([g, g2])),
             direct_sum_next([nact_right(EF, g), nact_right(EF2, g2)])),
        _cls("(E (+) E')(F (+) F') = EF (+) E'F'",
             compose_ext(direct_sum_ses([E, E2]), direct_sum_ses([F, F2])), DS),
        _cls("(E+E')F = EF + E'F", compose_ext(baer_sum(E, E1), F), nsum(EF, EF1)),
        _cls("E(F+F') = EF + EF'", compose_ext(E, baer_sum(F, F1)),
             nsum(EF, compose_ext(E, F1))),
        _cls("(a+a')E = aE + a'E", nact_left(a + a1, EF),
             nsum(nact_left(a, EF), nact_left(a1, EF))),
        _cls("E(g+g') = Eg + Eg'", nact_right(EF, g + g1),
             nsum(nact_right(EF, g), nact_right(EF, g1))),
        _cls("a(E+E') = aE + aE'", nact_left(a, nsum(EF, EF1)),
             nsum(nact_left(a, EF), nact_left(a, EF1))),
        _cls("(E+E')g = Eg + E'g", nact_right(nsum(EF, EF1), g),
             nsum(nact_right(EF, g), nact_right(EF1, g))),
        _cls("E + split = E", nsum(EF, split_next(A, D, 2)), EF),
        _cls("E + (-1)E = split", nsum(EF, nact_left(identity(A).scale(-1), EF)),
             split_next(A, D, 2)),
    ]
    return out


def factorization(gen: RandomGen) -> list[Check]:
    """A morphism (a, b, c): E' -> E exists exactly when Ec and aE' agree."""
    A, C = gen.module(), gen.module()
    E = gen.ses(A, C)
    if gen.rng.random() < 0.5:
        c = gen.morphism(gen.module(), C)
        a = identity(A)
        Ep = act_right(E, c)
    else:
        Ap, Cp = gen.module(), gen.module()
        Ep = gen.ses(Ap, Cp)
        a, c = gen.morphism(Ap, A), gen.morphism(Cp, C)
    found = find_ses_morphism(Ep, E, a, c)
    same = classes_equal(act_right(E, c), act_left(a, Ep))
    out = [Check("morphism exists iff Ec = aE'", (found is not None) == same,
                 f"morphism={found is not None} classes={same}")]
    if found is not None:
        out.append(Check("found morphism commutes", found.commutes()))
    return out


def _family_ends(gen: RandomGen, k: int):
    return [gen.module(2) for _ in range(k)], gen.module(2)


def psi_one(gen: RandomGen, k: int) -> list[Check]:
    As, B = _family_ends(gen, k)
    _, inj, _ = biproduct(As)
    etas = [gen.ses(B, A) for A in As]
    T = theta(ExtFamily(tuple(as_next(e) for e in etas)))
    back = psi_n(T, inj)
    out = [Check("psi theta = id", all(equivalent1(b.seqs[0], e) for b, e in zip(back, etas)),
                 f"|I|={k}")]
    S = biproduct(As)[0]
    E = gen.ses(B, S)
    comps = psi_n(E, inj)
    again = theta(ExtFamily(tuple(comps)))
    out.append(Check("theta psi = id", equivalent1(again, E), str(yoneda_class(E))))
    h = psi1_section(E, inj)
    allsplit = all(is_split(c.seqs[0]) for c in comps)
    out.append(Check("split components give a section", (h is not None) == allsplit
                     and (h is None or is_split(E)), f"all split={allsplit}"))
    return out


def psi_higher(gen: RandomGen, n: int, k: int) -> list[Check]:
    As, B = _family_ends(gen, k)
    _, inj, _ = biproduct(As)
    S = biproduct(As)[0]
    etas = [gen.next(B, A, n) for A in As]
    P = psi_n_inverse(ExtFamily(tuple(etas)), n)
    out = [Check("psi psi^-1 = id", all(classes_equal(x, e) for x, e in zip(psi_n(P, inj), etas)),
                 f"n={n} |I|={k}")]
    E, E1 = gen.next(B, S, n), gen.next(B, S, n)
    again = psi_n_inverse(ExtFamily(tuple(psi_n(E, inj))), n)
    out.append(_cls("psi^-1 psi = id", again, E))
    lhs = psi_n(nsum(E, E1), inj)
    rhs = [nsum(x, y) for x, y in zip(psi_n(E, inj), psi_n(E1, inj))]
    out.append(Check("psi additive", all(classes_equal(x, y) for x, y in zip(lhs, rhs))))
    return out


def phi_any(gen: RandomGen, n: int, k: int) -> list[Check]:
    As, B = _family_ends(gen, k)
    P, _, pis = biproduct(As)
    etas = [gen.next(A, B, n) for A in As]
    Q = phi_n_inverse(ExtFamily(tuple(etas), "right"), n)
    decide = (lambda x, y: equivalent1(x.seqs[0], y.seqs[0])) if n == 1 else classes_equal
    out = [Check("phi phi^-1 = id", all(decide(x, e) for x, e in zip(phi_n(Q, pis), etas)),
                 f"n={n} |I|={k}")]
    E, E1 = gen.next(P, B, n), gen.next(P, B, n)
    again = phi_n_inverse(ExtFamily(tuple(phi_n(E, pis)), "right"), n)
    out.append(Check("phi^-1 phi = id", decide(again, E), str(yoneda_class(E))))
    lhs = phi_n(nsum(E, E1), pis)
    rhs = [nsum(x, y) for x, y in zip(phi_n(E, pis), phi_n(E1, pis))]
    out.append(Check("phi additive", all(classes_equal(x, y) for x, y in zip(lhs, rhs))))
    return out


def cardinality(gen: RandomGen, n: int, k: int) -> list[Check]:
    As, B = _family_ends(gen, k)
    whole, parts = coproduct_orders(As, B, n)
    pwhole, pparts = product_orders(B, As, n)
    return [
        Check("|Ext((+)A_i, B)| = prod |Ext(A_i, B)|", whole == parts, f"{whole} vs {parts}"),
        Check("|Ext(B, prod A_i)| = prod |Ext(B, A_i)|", pwhole == pparts, f"{pwhole} vs {pparts}"),
        Check("vanishing", (whole == 1) == (parts == 1), f"n={n} |I|={k}"),
    ]


def ab4(gen: RandomGen, k: int) -> list[Check]:
    rep = ab4_colim_check([gen.mono(gen.module(2)) for _ in range(k)])
    bad = [name for name, ok in rep.checks if not ok]
    return [Check("Lambda iso and f = (+)alpha_i", rep.ok, ", ".join(bad) or f"|I|={k}")]


def coherence(gen: RandomGen, n: int = 1) -> list[Check]:
    A, C = gen.module(), gen.module()
    if n == 1:
        E, F = gen.ses(A, C), gen.ses(A, C)
        S = baer_sum(E, F)
    else:
        E, F = gen.next(A, C, n), gen.next(A, C, n)
        S = nsum(E, F)
    a = gen.morphism(A, gen.module())
    c = gen.morphism(gen.module(), C)
    kE, kF = yoneda_class(E), yoneda_class(F)
    aE = nact_left(a, E)
    Ec = nact_right(E, c)
    return [
        Check("class additive", yoneda_class(S) == kE + kF, f"{yoneda_class(S)} = {kE} + {kF}"),
        Check("class of aE = a_*(class E)", yoneda_class(aE) == induced_left(a, kE),
              str(yoneda_class(aE))),
        Check("class of Ec = c^*(class E)", yoneda_class(Ec) == induced_right(kE, c),
              str(yoneda_class(Ec))),
        Check("class of split is 0", yoneda_class(split_next(A, C, n)).is_zero()),
    ]


# suite name -> function of (gen, case index) returning checks
SUITES: dict[str, Callable[[RandomGen, int], list[Check]]] = {
    "baer-group": lambda gen, i: baer_group(gen),
    "bilinear": lambda gen, i: bilinear_one(gen),
    "bilinear-n": lambda gen, i: bilinear_n(gen),
    "factorization": lambda gen, i: factorization(gen),
    "psi-roundtrip": lambda gen, i: psi_one(gen, 1 + i % 4),
    "psin-roundtrip": lambda gen, i: psi_higher(gen, 2 + i % 2, 1 + (i // 2) % 3),
    "phi-roundtrip": lambda gen, i: phi_any(gen, 1 + i % 3, 1 + (i // 3) % 3),
    "cardinality": lambda gen, i: cardinality(gen, 1 + i % 3, 1 + (i // 3) % 3),
    "ab4": lambda gen, i: ab4(gen, 1 + i % 4),
    "coherence": lambda gen, i: coherence(gen, 1 + i % 2),
}
