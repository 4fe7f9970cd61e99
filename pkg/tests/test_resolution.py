import itertools
from math import gcd

import pytest
from sympy import Matrix as SMatrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from yoneda.abcat import (cyclic_module, free_module, make_morphism,
                          present_module, sequence_is_exact)
from yoneda.errors import EndpointMismatch, NotWellDefined, YonedaError
from yoneda.exactlin import Matrix, RingSpec
from yoneda.randgen import RandomGen
from yoneda.resolution import (ExtClass, class_is_zero, ext_group,
                               ext_group_data, ext_order, format_group,
                               free_resolution, induced_left, induced_right,
                               yoneda_class)
from yoneda.yext import (act_left, act_right, baer_sum, compose_ext, make_ses,
                         nact_left, nact_right, negate, nsum, split_ses)

Z4 = RingSpec(4)


# -- an independent oracle: cyclic decomposition plus brute force -------------

def cyclic_factors(M):
    """Orders of a cyclic decomposition of M via sympy; 0 marks a free Z summand."""
    m = M.modulus
    cols = [list(c) for c in M.relations.columns()]
    if m:
        cols += [[m if i == j else 0 for i in range(M.gens)] for j in range(M.gens)]
    if not cols:
        return [0] * M.gens
    S = SMatrix(M.gens, len(cols), lambda i, j: cols[j][i])
    nz = [abs(int(x)) for x in sympy_invariants(S) if x != 0]
    return [d for d in nz if d != 1] + [0] * (M.gens - len(nz))


def brute_cyclic_ext(m, n, d, e):
    """|Ext^n(R/d, R/e)| over R = Z/m (or Z when m == 0) from the periodic complex."""
    if m == 0:
        if n >= 2 or d == 0:
            return 1
        return d if e == 0 else gcd(d, e)
    # R/d has the resolution ... -> R -d-> R -(m/d)-> R -d-> R -> R/d
    first, second = (m // d, d) if n % 2 else (d, m // d)
    kernel = [x for x in range(e) if (first * x) % e == 0]
    image = {(second * x) % e for x in range(e)}
    return len(kernel) // len(image)


def oracle_order(C, A, n):
    out = 1
    for d in cyclic_factors(C):
        for e in cyclic_factors(A):
            out *= brute_cyclic_ext(C.modulus, n, d, e)
    return out


def m1(x):
    return Matrix([[x]], 1, 1)


def test_brute_cyclic_oracle_sanity():
    assert brute_cyclic_ext(4, 1, 2, 2) == 2
    assert brute_cyclic_ext(4, 2, 2, 4) == 1
    assert brute_cyclic_ext(0, 1, 2, 0) == 2
    assert brute_cyclic_ext(8, 1, 2, 4) == 2


# -- resolutions ---------------------------------------------------------------

def test_resolution_of_free_module():
    F = free_module(0, 2)
    res = free_resolution(F, 3)
    assert res[0].source == F
    assert all(d.source.gens == 0 for d in res[1:])


def test_resolution_of_m2_over_z4_is_periodic():
    M2 = cyclic_module(4, 2)
    res = free_resolution(M2, 4)
    assert [d.source.gens for d in res] == [1] * 5
    for d in res[1:]:
        assert d.matrix.reduce(4) == m1(2)
    assert sequence_is_exact(list(reversed(res)), left_zero=False)


def test_resolution_of_z2_over_z_stops():
    res = free_resolution(cyclic_module(0, 2), 3)
    assert [d.source.gens for d in res] == [1, 1, 0, 0]
    assert sequence_is_exact(list(reversed(res)), left_zero=True)


def test_resolution_exact_random():
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"res{m}", max_gens=3)
        for _ in range(15):
            res = free_resolution(gen.module(), 3)
            assert all(d.source.is_free() for d in res)
            assert sequence_is_exact(list(reversed(res)), left_zero=False)


def test_negative_length_rejected():
    with pytest.raises(YonedaError):
        free_resolution(cyclic_module(0, 2), -1)


# -- groups ----------------------------------------------------------------------

def test_ext_group_examples():
    M2 = cyclic_module(4, 2)
    for n in (1, 2, 3):
        assert ext_group(M2, M2, n) == [2]
    Z2, ZZ = cyclic_module(0, 2), free_module(0, 1)
    assert ext_group(Z2, ZZ, 1) == [2]
    assert ext_group(Z2, ZZ, 2) == []
    assert ext_order(Z2, ZZ, 2) == 1
    assert ext_group(free_module(4, 2), M2, 1) == []


def test_ext_group_errors():
    with pytest.raises(YonedaError):
        ext_group(cyclic_module(4, 2), cyclic_module(4, 2), 0)
    with pytest.raises(YonedaError):
        ext_group(cyclic_module(4, 2), cyclic_module(8, 2), 1)


def test_ext_order_matches_cyclic_oracle():
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"ord{m}", max_gens=3)
        for _ in range(30):
            C, A = gen.module(), gen.module()
            for n in (1, 2, 3):
                assert ext_order(C, A, n) == oracle_order(C, A, n), (C, A, n)


def test_ext_over_integers_vanishes_above_one():
    gen = RandomGen(0, "z-high")
    for _ in range(50):
        C, A = gen.module(), gen.module()
        assert ext_group(C, A, 2) == [] and ext_group(C, A, 3) == []


def test_format_group():
    assert format_group([]) == "0"
    assert format_group([2, 4]) == "Z/2 x Z/4"
    assert format_group([0]) == "Z"


def test_coordinates_round_trip():
    for m in (0, 4, 8):
        gen = RandomGen(m, f"coords{m}", max_gens=2)
        for _ in range(20):
            C, A = gen.module(), gen.module()
            n = gen.rng.randint(1, 2)
            G = ext_group_data(C, A, n)
            coords = [gen.rng.randint(-5, 5) for _ in G.factors]
            expect = G.element(coords).coords
            assert G.coords_of_cocycle(G.cocycle_of_coords(coords)) == expect


def test_every_class_is_realised_small():
    """Pushouts of the free cover along all maps K -> A hit every class."""
    gen = RandomGen(4, "realise", max_gens=2)
    done = 0
    while done < 8:
        C, A = gen.module(), gen.module()
        E0 = gen.cover(C)
        K = E0.A
        if A.gens * K.gens > 4:
            continue
        seen = set()
        for entries in itertools.product(range(4), repeat=A.gens * K.gens):
            rows = [list(entries[i * K.gens:(i + 1) * K.gens]) for i in range(A.gens)]
            try:
                h = make_morphism(K, A, Matrix(rows, A.gens, K.gens))
            except NotWellDefined:
                continue
            seen.add(yoneda_class(act_left(h, E0)).coords)
        assert len(seen) == ext_order(C, A, 1)
        done += 1


# -- classes ---------------------------------------------------------------------

def test_class_examples():
    M2 = present_module(Z4, 1, m1(2))
    R = free_module(Z4, 1)
    eta = make_ses(make_morphism(M2, R, m1(2)), make_morphism(R, M2, m1(1)))
    c = yoneda_class(eta)
    assert str(c) == "(1) in Z/2"
    assert str(c + c) == "0"
    assert class_is_zero(split_ses(M2, M2))
    assert not class_is_zero(compose_ext(eta, eta))
    pulled = act_right(eta, make_morphism(R, M2, m1(1)))
    assert class_is_zero(pulled)
    assert induced_right(c, make_morphism(R, M2, m1(1))).is_zero()


def test_class_map_is_additive():
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"add{m}", max_gens=3)
        for _ in range(20):
            A, C = gen.module(), gen.module()
            E, F = gen.ses(A, C), gen.ses(A, C)
            assert yoneda_class(baer_sum(E, F)) == yoneda_class(E) + yoneda_class(F)
            assert yoneda_class(negate(E)) == -yoneda_class(E)


def test_class_map_additive_higher():
    for m in (4, 8):
        gen = RandomGen(m, f"addn{m}", max_gens=2)
        for _ in range(15):
            A, C = gen.module(), gen.module()
            n = gen.rng.randint(2, 3)
            E, F = gen.next(A, C, n), gen.next(A, C, n)
            assert yoneda_class(nsum(E, F)) == yoneda_class(E) + yoneda_class(F)


def test_induced_maps_match_actions():
    for m in (0, 4, 8, 12):
        gen = RandomGen(m, f"ind{m}", max_gens=3)
        for _ in range(20):
            E = gen.ses()
            a = gen.morphism(E.A)
            c = gen.morphism(None, E.C)
            assert induced_left(a, yoneda_class(E)) == yoneda_class(act_left(a, E))
            assert induced_right(yoneda_class(E), c) == yoneda_class(act_right(E, c))


def test_induced_maps_match_actions_higher():
    for m in (4, 8):
        gen = RandomGen(m, f"indn{m}", max_gens=2)
        for _ in range(15):
            E = gen.next(n=gen.rng.randint(2, 3))
            a = gen.morphism(E.A)
            c = gen.morphism(None, E.C)
            assert induced_left(a, yoneda_class(E)) == yoneda_class(nact_left(a, E))
            assert induced_right(yoneda_class(E), c) == yoneda_class(nact_right(E, c))


def test_class_arithmetic_mismatch():
    a = ext_group_data(cyclic_module(4, 2), cyclic_module(4, 2), 1).zero()
    b = ext_group_data(cyclic_module(4, 2), cyclic_module(4, 2), 2).zero()
    assert isinstance(a, ExtClass)
    with pytest.raises(EndpointMismatch):
        a + b
    with pytest.raises(EndpointMismatch):
        induced_left(make_morphism(free_module(4, 1), cyclic_module(4, 2), m1(1)), a)
