"""Acceptance suite: one test per criterion, each printing a pass/fail
line with its timing against the stated runtime budget.  All comparisons
are exact in Q(i); there are no tolerances anywhere.

Set PAE_EXTENDED=1 to also run the long-gated variants (the two-strand
twist); the deep-projection vanishing family itself is fast enough to run
unconditionally here, while the CLI keeps it behind --extended.
"""

import os
import random
import time
from fractions import Fraction

import pytest

from helpers import (
    brute_force_closed,
    crossing_count,
    random_closed_word,
    switch_tags,
    twisted_pair,
    untwisted_pair,
    word_element,
)
from pae import dsl, engine, projections as P, tl
from pae.scalars import GaussianRational as G

EXTENDED = os.environ.get("PAE_EXTENDED", "") not in ("", "0")


def report(num, name, ok, secs, budget):
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} "
          f"({secs:.1f}s of {budget}s budget)", flush=True)
    assert ok
    assert secs <= budget, f"criterion {num} exceeded its runtime budget"


def _value(src):
    return engine.evaluate_closed(dsl.elaborate(dsl.parse_expression(src)))


def test_criterion_1_closed_values():
    engine.clear_caches()
    t0 = time.monotonic()
    quick = [
        ("tr(S ; S)", G(30)),
        (P.four_box_src(5), G(225)),
        (P.four_box_src(6), G(300)),
        (P.four_box_src(7), G(450)),
        (P.four_box_jw_src(4), G(30)),
    ]
    ok = True
    for src, want in quick:
        t1 = time.monotonic()
        got = _value(src)
        each = time.monotonic() - t1
        ok = ok and got == want and each <= 1.0
    t1 = time.monotonic()
    got = _value(P.four_box_jw_src(2))
    f12_time = time.monotonic() - t1
    ok = ok and got == G(Fraction(3750, 77)) and f12_time <= 300.0
    report(1, "closed values", ok, time.monotonic() - t0, 305)


def test_criterion_2_vanishing():
    t0 = time.monotonic()
    rep = P.verify_vanishing(extended=True)
    report(2, "vanishing family", rep.passed, time.monotonic() - t0, 1800)


def test_criterion_3_theta_tables():
    t0 = time.monotonic()
    rep = P.verify_theta()
    table_checks = [c for c in rep.checks if c.id.startswith("theta-")]
    ok = rep.passed and len(table_checks) == 21
    report(3, "theta and net tables", ok, time.monotonic() - t0, 30)


def test_criterion_4_jones_wenzl():
    t0 = time.monotonic()
    rep = P.verify_jones_wenzl()
    report(4, "Jones-Wenzl suite", rep.passed, time.monotonic() - t0, 30)


def test_criterion_5_relations():
    t0 = time.monotonic()
    rep = P.verify_relations()
    needed = {"s-squared", "leaf-Q4", "leaf-P6", "click-S", "jellyfish"}
    ok = rep.passed and needed <= {c.id for c in rep.checks}
    report(5, "relation suite", ok, time.monotonic() - t0, 120)


def test_criterion_6_projections_fusion():
    t0 = time.monotonic()
    rep = P.verify_traces().merged(P.verify_partial_traces()).merged(P.verify_fusion())
    for name in ("P4", "Q4", "P5", "P6"):
        rep = rep.merged(P.verify_projection(name))
    report(6, "projection and fusion suite", rep.passed, time.monotonic() - t0, 300)


def test_criterion_7_well_definedness():
    from test_well_defined import check_corpus, corpus

    t0 = time.monotonic()
    rng = random.Random(0xE7E7)
    words = corpus(rng, n_random=187)  # plus 13 templates = 200 diagrams
    assert len(words) >= 200
    mismatches, nonzero = check_corpus(words, rng)
    ok = not mismatches and nonzero >= 12
    report(7, "well-definedness (200 diagrams)", ok, time.monotonic() - t0, 600)


def test_criterion_8_oracle_equivalence():
    t0 = time.monotonic()
    rng = random.Random(8888)
    ok = True
    for _ in range(120):
        word = random_closed_word(rng, max_s=0, max_cross=6, allow_jw=False)
        el = word_element(word)
        ok = ok and engine.evaluate_closed(el) == brute_force_closed(el)
    report(8, "crossing oracle equivalence", ok, time.monotonic() - t0, 60)


def test_twist_identity_bounded():
    """Companion invariant: a full twist of the interface cable scales the
    two-box element by (-1)^c; c = 2 only with PAE_EXTENDED=1."""
    t0 = time.monotonic()
    cs = (1, 2) if EXTENDED else (1,)
    ok = True
    for c in cs:
        lhs = engine.resolve_crossings(twisted_pair(c))
        ok = ok and engine.is_zero(lhs - untwisted_pair(c).scale((-1) ** c))
    report("7b", f"twist identity c in {cs}", ok, time.monotonic() - t0, 300)
