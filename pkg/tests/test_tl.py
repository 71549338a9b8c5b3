import random
from fractions import Fraction

import pytest

from helpers import naive_compose
from pae import tl
from pae.scalars import GaussianRational as G


def rnd_element(m, n, rng, nterms=3):
    mats = list(tl.enumerate_matchings(m, n))
    if not mats:
        return None
    terms = {}
    for _ in range(nterms):
        terms[rng.choice(mats)] = G(rng.randint(-3, 3), rng.randint(-2, 2))
    return tl.TLElement(m, n, terms)


def test_compose_examples():
    e1 = tl.e_generator(1, 3)
    assert tl.compose(e1, e1) == e1.scale(2)
    f3 = tl.jones_wenzl(3)
    assert tl.compose(tl.identity(3), f3) == f3
    assert tl.compose(f3, tl.identity(3)) == f3


def test_compose_against_path_tracing_oracle():
    rng = random.Random(42)
    checked = 0
    while checked < 40:
        m, n, p = rng.randint(0, 4), rng.randint(0, 4), rng.randint(0, 4)
        if (m + n) % 2 or (n + p) % 2:
            continue
        f, g = rnd_element(m, n, rng), rnd_element(n, p, rng)
        if f is None or g is None:
            continue
        assert tl.compose(f, g) == naive_compose(f, g)
        checked += 1


def test_compose_arity_error():
    with pytest.raises(tl.ArityError):
        tl.compose(tl.identity(2), tl.identity(3))


def test_tensor():
    assert tl.tensor(tl.identity(1), tl.identity(1)) == tl.identity(2)
    lhs = tl.tensor(tl.jones_wenzl(1), tl.jones_wenzl(1))
    rhs = tl.jones_wenzl(2) + tl.e_generator(1, 2).scale(Fraction(1, 2))
    assert lhs == rhs
    cupcap = tl.tensor(tl.TLElement.single(0, 2, (1, 0)), tl.TLElement.single(2, 0, (1, 0)))
    assert (cupcap.m, cupcap.n) == (2, 2)


def test_dual_and_adjoint():
    e1 = tl.e_generator(1, 3)
    assert tl.adjoint(e1.scale(G(0, 1))) == e1.scale(G(0, -1))
    cup = tl.TLElement.single(0, 2, (1, 0))
    cap = tl.TLElement.single(2, 0, (1, 0))
    assert tl.dual(cup) == cap  # rotation by pi turns the arc over
    # rotation by pi sends e_j in TL_k to e_(k-j)
    assert tl.dual(tl.e_generator(1, 4)) == tl.e_generator(3, 4)
    rng = random.Random(3)
    for _ in range(10):
        x = rnd_element(3, 3, rng)
        assert tl.adjoint(tl.adjoint(x)) == x
        assert tl.dual(tl.dual(x)) == x


def test_traces():
    assert tl.trace_close_right(tl.identity(1)) == G(2)
    assert tl.trace_close_right(tl.jones_wenzl(4)) == G(5)
    assert tl.trace_close_right(tl.e_generator(1, 2)) == G(2)


def test_left_trace_agrees_all_small_arities():
    rng = random.Random(9)
    for k in range(1, 5):
        for _ in range(8):
            x = rnd_element(k, k, rng)
            assert tl.trace_close_left(x) == tl.trace_close_right(x)


def test_partial_traces():
    assert tl.partial_trace_right(tl.jones_wenzl(2)) == tl.jones_wenzl(1).scale(Fraction(3, 2))
    assert tl.partial_trace_right(tl.jones_wenzl(4)) == tl.jones_wenzl(3).scale(Fraction(5, 4))
    got = tl.partial_trace_right(tl.identity(1))
    assert got == tl.empty_diagram().scale(2)
    with pytest.raises(tl.ArityError):
        tl.partial_trace_right(tl.empty_diagram())


def test_partial_trace_consistency_with_full_trace():
    rng = random.Random(17)
    for k in (2, 3, 4):
        for _ in range(6):
            x = rnd_element(k, k, rng)
            stepped = x
            for _ in range(k):
                stepped = tl.partial_trace_right(stepped)
            assert stepped.coefficient(()) == tl.trace_close_right(x)


def test_e_generator_relations():
    for k in (2, 3, 4, 5):
        for j in range(1, k):
            e = tl.e_generator(j, k)
            assert tl.compose(e, e) == e.scale(2)
        for j in range(1, k - 1):
            ej, ej1 = tl.e_generator(j, k), tl.e_generator(j + 1, k)
            assert tl.compose(tl.compose(ej, ej1), ej) == ej
            assert tl.compose(tl.compose(ej1, ej), ej1) == ej1
    with pytest.raises(tl.ArityError):
        tl.e_generator(4, 4)


def test_jones_wenzl_small():
    assert tl.jones_wenzl(0) == tl.empty_diagram()
    assert tl.jones_wenzl(2) == tl.identity(2) - tl.e_generator(1, 2).scale(Fraction(1, 2))
    e1, e2 = tl.e_generator(1, 3), tl.e_generator(2, 3)
    want = (
        tl.identity(3)
        - e1.scale(Fraction(2, 3))
        - e2.scale(Fraction(2, 3))
        + tl.compose(e1, e2).scale(Fraction(1, 3))
        + tl.compose(e2, e1).scale(Fraction(1, 3))
    )
    assert tl.jones_wenzl(3) == want


def test_jones_wenzl_constructions_agree():
    for k in range(1, 9):
        assert tl.jones_wenzl_fk(k) == tl.jones_wenzl(k)


def test_fk_identity_coefficient():
    for k in range(1, 9):
        ident = next(iter(tl.identity(k).terms))
        assert tl.jones_wenzl_fk(k).coefficient(ident) == G(1)


def test_recursive_absorption():
    for k in range(1, 5):
        q = tl.jones_wenzl(k)
        a = tl.tensor(q, tl.identity(1))
        mid = tl.compose(tl.compose(a, tl.e_generator(k, k + 1)), a)
        p = a - mid.scale(Fraction(k, k + 1))
        assert tl.compose(p, a) == p
        assert tl.compose(a, p) == p


def test_catalan_basis_count():
    for k in range(0, 9):
        assert sum(1 for _ in tl.enumerate_matchings(k, k)) == tl.catalan(k)


def test_matchings_are_noncrossing():
    for m, n in ((3, 3), (2, 4), (0, 6)):
        for p in tl.enumerate_matchings(m, n):
            assert tl.matching_is_noncrossing(m, n, p)


def test_quantum_numbers():
    assert tl.quantum_int(2) == 2
    assert tl.quantum_int(0) == 0
    assert tl.quantum_factorial(5) == 120


def test_net_and_theta():
    assert abs(tl.net(5, 0, 0)) == 6
    for m, n in ((2, 2), (1, 3), (4, 0)):
        assert tl.net(m, n, 0) == (-1) ** (m + n) * (m + n + 1)
    assert abs(tl.theta(5, 5, 4)) == Fraction(14, 5)
    assert abs(tl.theta(7, 7, 8)) == Fraction(396, 245)
    assert abs(tl.net(3, 3, 3)) == Fraction(21, 10)
    with pytest.raises(tl.InadmissibleTriple):
        tl.theta(1, 1, 3)


def test_chen_coefficients():
    assert tl.chen_coefficients(5, 5) == [
        (0, Fraction(1, 6)),
        (2, Fraction(5, 7)),
        (4, Fraction(25, 14)),
        (6, Fraction(25, 9)),
        (8, Fraction(5, 2)),
        (10, Fraction(1)),
    ]
    assert [c for _, c in tl.chen_coefficients(7, 7)] == [
        Fraction(1, 8), Fraction(7, 12), Fraction(7, 4), Fraction(245, 66),
        Fraction(245, 44), Fraction(147, 26), Fraction(7, 2), Fraction(1),
    ]


def test_chen_reconstruction_small():
    for a, b in ((1, 1), (2, 1), (2, 2)):
        acc = tl.TLElement(a + b, a + b)
        for k, c in tl.chen_coefficients(a, b):
            acc = acc + tl.chen_sandwich(a, b, k).scale(c)
        assert acc == tl.tensor(tl.jones_wenzl(a), tl.jones_wenzl(b))


def test_render_e_words():
    assert tl.render_e_words(tl.jones_wenzl(2)) == "id(2) - 1/2 e(1,2)"
    txt = tl.render_e_words(tl.jones_wenzl(3))
    assert txt.startswith("id(3) - 2/3 e(1,3) - 2/3 e(2,3)")


def test_render_element():
    e1 = tl.e_generator(1, 2)
    assert "[(1, 2), (3, 4)]" in str(e1)


def test_jw_cap():
    with pytest.raises(tl.ArityError):
        tl.jones_wenzl(tl.jw_cap() + 1)
