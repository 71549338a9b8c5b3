import random
from fractions import Fraction

import pytest

from helpers import brute_force_closed, random_closed_word, word_element
from pae import engine as E
from pae import tl
from pae.scalars import GaussianRational as G


def powg(z, m):
    out = G(1)
    for _ in range(m):
        out = out * z
    return out


def nested_cups(v):
    acc = E.cup()
    for t in range(1, v):
        acc = E.compose(acc, E.tensor(E.tensor(E.strand(t), E.cup()), E.strand(t)))
    return acc


def s_up():
    return E.compose(nested_cups(4), E.tensor(E.s_box(), E.strand(4)))


def rainbowed_s():
    return E.adjoint(s_up())


# -- construction -----------------------------------------------------------


def test_from_morse_examples():
    loop = E.from_morse([["cup"], ["cap"]])
    assert loop.m == loop.n == 0
    assert E.evaluate_closed(loop) == G(2)

    s = E.from_morse([["S"]])
    assert (s.m, s.n) == (4, 4)
    assert s == E.s_box()

    zig = E.from_morse([[("id", 1), "cup"], ["cap", ("id", 1)]])
    assert zig == E.strand(1)


def test_compose_arity_error():
    with pytest.raises(tl.ArityError):
        E.compose(E.cup(), E.s_box())


def test_resolve_crossings_noop():
    s = E.s_box()
    assert E.resolve_crossings(s) == s


def test_kinks():
    # closing a crossing into a curl: the over sign is -i, the under +i
    assert E.evaluate_closed(E.trace_close(E.crossing("over"))) == G(0, -2)
    assert E.evaluate_closed(E.trace_close(E.crossing("under"))) == G(0, 2)


def test_reidemeister_two_three():
    rii = E.compose(E.crossing("over"), E.crossing("under"))
    assert E.equal(E.resolve_crossings(rii), E.strand(2))
    over, under = E.crossing("over"), E.crossing("under")

    def wide(x, left):
        pad = E.strand(1)
        return E.tensor(pad, x) if left else E.tensor(x, pad)

    lhs = E.compose(E.compose(wide(over, False), wide(over, True)), wide(over, False))
    rhs = E.compose(E.compose(wide(over, True), wide(over, False)), wide(over, True))
    assert E.equal(E.resolve_crossings(lhs), E.resolve_crossings(rhs))


def test_hopf_link_against_brute_force():
    word = [["cup"], [("id", 1), "cup", ("id", 1)], ["over", "over"],
            ["over", "over"], [("id", 1), "cap", ("id", 1)], ["cap"]]
    el = word_element(word)
    assert E.evaluate_closed(el) == brute_force_closed(el)


def test_brute_force_agreement_random():
    rng = random.Random(1234)
    for _ in range(50):
        word = random_closed_word(rng, max_s=0, max_cross=6, allow_jw=False)
        el = word_element(word)
        assert E.evaluate_closed(el) == brute_force_closed(el)


def test_closed_values_core():
    assert E.evaluate_closed(E.empty()) == G(1)
    assert E.evaluate_closed(E.trace_close(E.strand(1))) == G(2)
    s = E.s_box()
    assert E.evaluate_closed(E.trace_close(E.compose(s, s))) == G(30)
    assert E.evaluate_closed(E.trace_close(s)) == G(0)


def test_not_closed():
    with pytest.raises(E.NotClosed):
        E.evaluate_closed(E.s_box())


def test_jw_box_matches_tl_elements():
    for k in range(1, 7):
        assert E.equal(E.jw_box(k), E.from_tl(tl.jones_wenzl(k)))


def test_jw_traces_via_engine():
    for k in range(0, 9):
        assert E.evaluate_closed(E.trace_close(E.jw_box(k))) == G(k + 1)


def test_rotation_identities():
    s = E.s_box()
    r = s
    for _ in range(8):
        r = E.rotate_F(r)
    assert r == s
    assert E.equal(E.rotate_F(s), s)
    assert not E.is_zero(s)


def test_adjoint_dual():
    s = E.s_box()
    assert E.adjoint(s.scale(G(0, 1))) == s.scale(G(0, -1))
    x = E.compose(E.e_element(1, 4), s)
    assert E.adjoint(E.adjoint(x)) == x
    assert E.dual(E.dual(x)) == x


def test_absorption():
    s, f4 = E.s_box(), E.jw_box(4)
    assert E.equal(E.compose(f4, s), s)
    assert E.equal(E.compose(s, f4), s)
    for j in (1, 2, 3):
        fj = E.tensor(E.jw_box(j), E.strand(4 - j))
        assert E.equal(E.compose(fj, s), s)


def test_s_squared_relation():
    s, f4 = E.s_box(), E.jw_box(4)
    assert E.is_zero(E.compose(s, s) - s - f4.scale(6))


def test_inner_products():
    s, f4 = E.s_box(), E.jw_box(4)
    assert E.inner(s, s) == G(30)
    assert E.inner(f4, f4) == G(5)
    assert E.inner(s, f4) == G(0)


def test_box_slide():
    rs = rainbowed_s()
    idx = E.strand

    def move_left(m, tag):
        acc = idx(8)
        for t in range(m, 0, -1):
            acc = E.compose(acc, E.tensor(E.tensor(idx(t - 1), E.crossing(tag)), idx(8 - t - 1)))
        return E.compose(acc, rs)

    for m in range(0, 8):
        lhs = E.resolve_crossings(move_left(m, "under"))
        assert E.is_zero(lhs - rs.scale(powg(G(0, 1), m))), f"under m={m}"
        lhs = E.resolve_crossings(move_left(m, "over"))
        assert E.is_zero(lhs - rs.scale(powg(G(0, -1), m))), f"over m={m}"


def test_jellyfish_relation():
    rs = rainbowed_s()
    idx = E.strand
    lhs = E.compose(E.compose(idx(10), E.tensor(E.tensor(idx(1), rs), idx(1))), E.cap())
    acc = idx(10)
    for t in range(1, 9):
        acc = E.compose(acc, E.tensor(E.tensor(idx(t - 1), E.crossing("under")), idx(10 - t - 1)))
    rhs = E.compose(E.compose(acc, E.tensor(idx(8), E.cap())), rs)
    assert E.is_zero(lhs - rhs)


def test_crossing_switch_identities():
    def closed_two(t1, t2):
        row1 = E.compose(E.cup(), E.crossing(t1))
        row2 = E.compose(row1, E.crossing(t2))
        return E.compose(row2, E.cap())

    xx = E.evaluate_closed(closed_two("over", "over"))
    yy = E.evaluate_closed(closed_two("under", "under"))
    xy = E.evaluate_closed(closed_two("over", "under"))
    yx = E.evaluate_closed(closed_two("under", "over"))
    assert xx == yy == -xy == -yx


def test_multiplicativity():
    d1 = E.trace_close(E.compose(E.s_box(), E.s_box()))
    d2 = E.trace_close(E.jw_box(3))
    assert (
        E.evaluate_closed(E.tensor(d1, d2))
        == E.evaluate_closed(d1) * E.evaluate_closed(d2)
    )


def test_positivity_spot_checks():
    s, f4 = E.s_box(), E.jw_box(4)
    corpus = [s, f4, E.compose(s, f4), E.crossing("over"),
              E.compose(E.e_element(1, 4), s)]
    for x in corpus:
        v = E.norm_sq(x)
        assert v.is_real() and v.re >= 0


def test_reduction_order_independence():
    bot = E.compose(E.tensor(s_up(), s_up()),
                    E.tensor(E.tensor(E.strand(6), E.adjoint(nested_cups(2))), E.strand(6)))
    d = E.compose(E.compose(bot, E.jw_box(12)), E.adjoint(bot))
    E.clear_caches()
    first = E.evaluate_closed(d, E.EvalConfig(strategy="first"))
    E.clear_caches()
    last = E.evaluate_closed(d, E.EvalConfig(strategy="last"))
    assert first == last == G(Fraction(3750, 77))


def test_gram():
    assert E.gram_rank([E.empty()]) == 1
    id2, e1 = E.strand(2), E.e_element(1, 2)
    g = E.gram_matrix([id2, e1])
    assert g == [[G(4), G(2)], [G(2), G(4)]]
    assert E.matrix_rank(g) == 2
    assert E.gram_rank([E.jw_box(4), E.s_box()]) == 2
    assert E.gram_rank([]) == 0


def test_trace_steps_emitted():
    steps = []
    cfg = E.EvalConfig(trace=steps.append)
    E.clear_caches()
    E.evaluate_closed(E.trace_close(E.compose(E.s_box(), E.s_box())), cfg)
    kinds = {s.kind for s in steps}
    assert "s_squared" in kinds and "done" in kinds


def test_stats():
    cfg = E.EvalConfig()
    E.clear_caches()
    E.evaluate_closed(E.trace_close(E.compose(E.s_box(), E.s_box())), cfg)
    assert cfg.stats.s2_applications >= 1
    cfg2 = E.EvalConfig()
    E.evaluate_closed(E.trace_close(E.crossing("over")), cfg2)
    assert cfg2.stats.crossings_resolved == 1
