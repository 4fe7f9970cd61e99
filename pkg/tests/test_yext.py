import itertools

import pytest

from yoneda.abcat import (compose, free_module, identity,
                          make_morphism, morphisms_equal, present_module,
                          sequence_is_exact, smith_form, zero_morphism)
from yoneda.errors import EndpointMismatch, NotExact, NotWellDefined
from yoneda.exactlin import Matrix, RingSpec
from yoneda.laws import (baer_group, bilinear_n, bilinear_one, factorization)
from yoneda.randgen import RandomGen
from yoneda.resolution import class_is_zero, classes_equal, yoneda_class
from yoneda.yext import (NExtension, ShortExactSeq, act_left, act_right,
                         baer_sum, compose_ext, equivalent1, is_split,
                         make_ses, nact_left, nact_right, natural_decomposition,
                         negate, nsum, section, split_next, split_ses)

Z4 = RingSpec(4)


def m1(x):
    return Matrix([[x]], 1, 1)


@pytest.fixture
def eta():
    M2 = present_module(Z4, 1, m1(2))
    R = free_module(Z4, 1)
    return make_ses(make_morphism(M2, R, m1(2)), make_morphism(R, M2, m1(1)))


def test_make_ses_rejects_non_exact(eta):
    with pytest.raises(NotExact):
        make_ses(zero_morphism(eta.A, eta.B), eta.g)


def test_eta_is_not_split_brute_force(eta):
    # every candidate section C -> B is a 1x1 matrix over Z/4
    for s in range(4):
        try:
            cand = make_morphism(eta.C, eta.B, m1(s))
        except NotWellDefined:
            continue
        assert not morphisms_equal(compose(eta.g, cand), identity(eta.C))
    assert not is_split(eta)
    assert section(eta) is None


def test_split_and_free_right_end(eta):
    assert is_split(split_ses(eta.A, eta.C))
    gen = RandomGen(8, "free-end")
    for _ in range(20):
        A = gen.module()
        E = gen.ses(A, free_module(gen.ring, gen.rng.randint(1, 3)))
        s = section(E)
        assert s is not None and morphisms_equal(compose(E.g, s), identity(E.C))


def test_actions_examples(eta):
    R = eta.B
    assert equivalent1(act_right(eta, identity(eta.C)), eta)
    assert equivalent1(act_left(identity(eta.A), eta), eta)
    assert is_split(act_right(eta, zero_morphism(eta.C, eta.C)))
    assert is_split(act_left(zero_morphism(eta.A, eta.A), eta))
    g = eta.g
    pulled = act_right(eta, g)
    assert pulled.C == R and is_split(pulled)
    assert pulled.certificate.commutes()
    pushed = act_left(eta.f, eta)
    assert pushed.certificate.commutes()


def test_action_endpoint_errors(eta):
    with pytest.raises(EndpointMismatch):
        act_right(eta, identity(eta.B))
    with pytest.raises(EndpointMismatch):
        act_left(identity(eta.B), eta)


def test_baer_sum_examples(eta):
    Z = split_ses(eta.A, eta.C)
    assert equivalent1(baer_sum(eta, Z), eta)
    twice = baer_sum(eta, eta)
    assert is_split(twice) and class_is_zero(twice)
    assert equivalent1(twice, Z)
    assert equivalent1(negate(eta), eta)


def test_equivalent1_examples(eta):
    assert equivalent1(eta, eta)
    assert not equivalent1(eta, split_ses(eta.A, eta.C))
    # conjugate the middle by an automorphism of B
    u = make_morphism(eta.B, eta.B, m1(3))
    twisted = ShortExactSeq(compose(u, eta.f), compose(eta.g, make_morphism(eta.B, eta.B, m1(3))))
    assert twisted.is_exact()
    assert equivalent1(eta, twisted)
    # the diagonal form of the middle gives an equivalent sequence
    sf = smith_form(eta.B)
    assert equivalent1(eta, ShortExactSeq(compose(sf.to_s, eta.f), compose(eta.g, sf.from_s)))


def test_equivalent1_endpoint_mismatch(eta):
    other = split_ses(eta.B, eta.C)
    with pytest.raises(EndpointMismatch):
        equivalent1(eta, other)


def test_compose_and_decomposition(eta):
    ee = compose_ext(eta, eta)
    assert ee.degree == 2
    chain = ee.splice()
    assert morphisms_equal(chain[1], compose(eta.f, eta.g))
    assert sequence_is_exact(chain)
    nd = natural_decomposition(chain)
    assert nd.degree == 2 and nd.seqs[0].C == eta.A
    assert all(morphisms_equal(a, b) for a, b in zip(nd.splice(), chain))
    assert natural_decomposition([eta.f, eta.g]).seqs[0] == eta
    assert not yoneda_class(ee).is_zero()
    assert not classes_equal(ee, split_next(eta.A, eta.C, 2))
    with pytest.raises(EndpointMismatch):
        compose_ext(eta, split_ses(eta.B, eta.C))


def test_natural_decomposition_rejects_non_exact(eta):
    with pytest.raises(NotExact):
        natural_decomposition([eta.f, identity(eta.B), eta.g])


def test_natural_decomposition_random_round_trip():
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"nd{m}")
        for _ in range(10):
            E = gen.next(n=gen.rng.randint(2, 3))
            chain = E.splice()
            nd = natural_decomposition(chain)
            assert all(morphisms_equal(a, b) for a, b in zip(nd.splice(), chain))
            assert classes_equal(nd, E)


def test_nsum_examples(eta):
    ee = compose_ext(eta, eta)
    Z2 = split_next(eta.A, eta.C, 2)
    assert classes_equal(nsum(ee, Z2), ee)
    assert class_is_zero(nsum(ee, ee))
    assert classes_equal(nact_left(identity(eta.A), ee), ee)
    assert classes_equal(nact_right(ee, identity(eta.C)), ee)
    with pytest.raises(EndpointMismatch):
        nsum(ee, NExtension((eta,)))


def test_associativity_of_composition_at_class_level():
    gen = RandomGen(4, "assoc")
    for _ in range(20):
        A, B, C, D = (gen.module(2) for _ in range(4))
        E, F, G = gen.ses(A, B), gen.ses(B, C), gen.ses(C, D)
        left = compose_ext(compose_ext(E, F), G)
        right = compose_ext(E, compose_ext(F, G))
        assert classes_equal(left, right)


def test_split_next_shape(eta):
    Z3 = split_next(eta.A, eta.C, 3)
    assert Z3.degree == 3 and Z3.A == eta.A and Z3.C == eta.C
    assert sequence_is_exact(Z3.splice())
    assert class_is_zero(Z3)


def _assert_all(checks):
    bad = [c for c in checks if not c.ok]
    assert not bad, bad


@pytest.mark.parametrize("ring", [0, 4, 8, 12])
def test_baer_group_laws(ring):
    for i in range(20):
        _assert_all(baer_group(RandomGen(ring, f"bg/{ring}/{i}", max_gens=3)))


@pytest.mark.parametrize("ring", [0, 4, 8, 12])
def test_bilinearity_one(ring):
    for i in range(10):
        _assert_all(bilinear_one(RandomGen(ring, f"b1/{ring}/{i}", max_gens=3)))


@pytest.mark.parametrize("ring", [0, 4, 8, 12])
def test_bilinearity_n(ring):
    for i in range(10):
        _assert_all(bilinear_n(RandomGen(ring, f"bn/{ring}/{i}")))


@pytest.mark.parametrize("ring", [0, 4, 8, 12])
def test_factorization_lemma(ring):
    for i in range(25):
        _assert_all(factorization(RandomGen(ring, f"fl/{ring}/{i}", max_gens=3)))


def test_factorisation_of_certificate(eta):
    """(a, b, c) with target eta factors through eta c."""
    gen = RandomGen(4, "cert")
    for _ in range(20):
        c = gen.morphism(gen.module(2), eta.C)
        Ep = act_right(eta, c)
        cert = Ep.certificate
        assert cert.commutes()
        assert equivalent1(act_right(eta, c), act_left(identity(eta.A), Ep))


def test_split_iff_zero_class_random():
    seen_nonzero = 0
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"sz{m}")
        for _ in range(60):
            E = gen.ses(gen.module(), gen.module())
            assert is_split(E) == class_is_zero(E)
            seen_nonzero += not class_is_zero(E)
    assert seen_nonzero >= 20


def test_deciders_agree_on_random_pairs():
    agree = 0
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"dec{m}", max_gens=2)
        for _ in range(50):
            A, C = gen.module(), gen.module()
            E, F = gen.ses(A, C), gen.ses(A, C)
            assert equivalent1(E, F) == classes_equal(E, F)
            agree += 1
    assert agree >= 200


def test_small_exhaustive_z4_classes():
    """Every pushout of the free cover of M2 along K -> M2; both classes occur."""
    M2 = present_module(Z4, 1, m1(2))
    E0 = RandomGen(4, 0).cover(M2)
    K = E0.A
    classes = set()
    for entries in itertools.product(range(4), repeat=K.gens):
        try:
            h = make_morphism(K, M2, Matrix([list(entries)], 1, K.gens))
        except NotWellDefined:
            continue
        E = act_left(h, E0)
        assert is_split(E) == class_is_zero(E)
        classes.add(yoneda_class(E).coords)
    assert classes == {(0,), (1,)}
