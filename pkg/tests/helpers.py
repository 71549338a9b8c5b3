"""Shared test helpers: independent oracles and random diagram generators.

The oracles deliberately re-derive results through different code paths
than the library: composition by naive path tracing, crossing resolution by
exhaustive smoothing enumeration with direct loop counting.
"""

from __future__ import annotations

import random
from typing import Dict, List, Sequence, Tuple

from pae import engine
from pae.engine import SElement, SGraph, X_KIND, Y_KIND
from pae.scalars import GaussianRational, I, MINUS_I, ONE
from pae.tl import Matching, TLElement

# ---------------------------------------------------------------------------
# naive TL composition oracle


def naive_compose_matchings(m: int, n: int, pf: Matching, p: int, pg: Matching
                            ) -> Tuple[Matching, int]:
    """Glue pg on top of pf by explicit path walking over a shared table."""
    # nodes: ('f', x) for x in 0..m+n-1, ('g', x) for x in 0..n+p-1;
    # junction t welds ('f', m+t) to ('g', t)
    link = {}
    for t in range(n):
        link[("f", m + t)] = ("g", t)
        link[("g", t)] = ("f", m + t)

    def is_out(node):
        side, x = node
        return (side == "f" and x < m) or (side == "g" and x >= n)

    def step(node):
        side, x = node
        return (side, (pf if side == "f" else pg)[x])

    out = {}
    visited = set()
    outs = [("f", j) for j in range(m)] + [("g", n + t) for t in range(p)]
    for start in outs:
        if start in out:
            continue
        node = step(start)
        while not is_out(node):
            visited.add(node)
            node = link[node]
            visited.add(node)
            node = step(node)
        out[start] = node
        out[node] = start

    loops = 0
    for t in range(n):
        if ("f", m + t) in visited:
            continue
        loops += 1
        x = t
        while ("f", m + x) not in visited:
            visited.add(("f", m + x))
            visited.add(("g", x))
            y = pg[x]
            visited.add(("g", y))
            visited.add(("f", m + y))
            x = pf[m + y] - m

    def outkey(node):
        side, x = node
        return x if side == "f" else m + (x - n)

    pairing = [0] * (m + p)
    for a, b in out.items():
        pairing[outkey(a)] = outkey(b)
    return tuple(pairing), loops


def naive_compose(f: TLElement, g: TLElement) -> TLElement:
    acc: Dict[Matching, GaussianRational] = {}
    for pf, cf in f.terms.items():
        for pg, cg in g.terms.items():
            pairing, loops = naive_compose_matchings(f.m, f.n, pf, g.n, pg)
            c = cf * cg * (2 ** loops)
            got = acc.get(pairing)
            got = c if got is None else got + c
            if got.is_zero():
                acc.pop(pairing, None)
            else:
                acc[pairing] = got
    return TLElement(f.m, g.n, acc)


# ---------------------------------------------------------------------------
# brute-force smoothing enumeration for closed TL-plus-crossings diagrams


def brute_force_closed(x: SElement) -> GaussianRational:
    """Sum over all smoothing assignments with direct loop counting.

    Only valid for closed elements whose graphs contain crossings and
    strands (no S or Jones-Wenzl boxes)."""
    assert x.m == 0 and x.n == 0
    total = GaussianRational(0)
    for g, coeff in x.terms.items():
        assert all(k in (X_KIND, Y_KIND) for k in g.kinds)
        c = len(g.kinds)
        sites = g.sites
        for mask in range(1 << c):
            w = ONE
            partner = list(g.adj) + [0] * sites
            for i, kind in enumerate(g.kinds):
                base = g.offs[i]
                pick_h = bool(mask >> i & 1)
                if kind == X_KIND:
                    w = w * (I if pick_h else MINUS_I)
                else:
                    w = w * (I if not pick_h else MINUS_I)
                if pick_h:
                    pairs = ((base, base + 1), (base + 2, base + 3))
                else:
                    pairs = ((base, base + 3), (base + 1, base + 2))
                for a, b in pairs:
                    partner[a + sites] = b + sites
                    partner[b + sites] = a + sites
            # loops: cycles alternating strand edges and smoothing arcs
            seen = [False] * sites
            loops = 0
            for s in range(sites):
                if seen[s]:
                    continue
                loops += 1
                cur = s
                while not seen[cur]:
                    seen[cur] = True
                    nxt = partner[cur]  # strand edge
                    seen[nxt] = True
                    cur = partner[nxt + sites] - sites  # smoothing arc
            total = total + coeff * w * (2 ** loops)
        if not g.kinds:
            total = total + coeff
    return total


# ---------------------------------------------------------------------------
# random Morse words


def random_closed_word(rng: random.Random, max_s: int = 4, max_cross: int = 10,
                       max_rows: int = 14, allow_jw: bool = True) -> List[List]:
    """A random closed diagram as a Morse word (list of rows, bottom up).

    Biased toward stacking S-boxes directly on top of each other so that a
    useful fraction of the sampled diagrams evaluates to something nonzero."""
    rows: List[List] = []
    width = 0
    s_used = 0
    cross_used = 0
    budget = max_rows
    while budget > 0:
        budget -= 1
        if width == 0:
            rows.append(["cup"] * rng.randint(1, 3))
            width = 2 * len(rows[-1])
            continue
        row: List = []
        pos = 0
        cups_in_row = 0
        s_positions: List[int] = []
        out_pos = 0
        while pos < width:
            remaining = width - pos
            options: List = [("id", 1)]
            if remaining >= 2:
                options += ["cap", "over", "under", "cap"]
                if allow_jw:
                    options.append(("f", 2))
            if remaining >= 3 and allow_jw:
                options.append(("f", 3))
            if remaining >= 4 and s_used < max_s:
                options += ["S", "S", "S"]
            if cups_in_row < 2 and rng.random() < 0.3:
                options.append("cup")
            cell = rng.choice(options)
            if cell in ("over", "under") and cross_used >= max_cross:
                cell = ("id", 2)
            if cell == "cup":
                cups_in_row += 1
            if cell == "S":
                s_used += 1
                s_positions.append(out_pos)
            if cell in ("over", "under"):
                cross_used += 1
            row.append(cell)
            pos += _cell_in(cell)
            out_pos += _cell_out(cell)
        rows.append(row)
        width = sum(_cell_out(c) for c in row)
        # stack a second S right on top of the previous one half the time
        if s_positions and s_used < max_s and rng.random() < 0.6:
            at = rng.choice(s_positions)
            stack_row: List = []
            if at:
                stack_row.append(("id", at))
            stack_row.append("S")
            if width - at - 4:
                stack_row.append(("id", width - at - 4))
            rows.append(stack_row)
            s_used += 1
    # close whatever is left with nested caps
    while width > 0:
        row = []
        pos = 0
        closed_one = False
        while pos < width:
            if not closed_one and width >= 2 and pos + 2 <= width:
                row.append("cap")
                pos += 2
                closed_one = True
            else:
                row.append(("id", 1))
                pos += 1
        rows.append(row)
        width -= 2
    return rows


def _cell_in(cell) -> int:
    if cell == "cup":
        return 0
    if cell == "cap":
        return 2
    if cell in ("over", "under"):
        return 2
    if cell == "S":
        return 4
    if isinstance(cell, tuple) and cell[0] in ("f", "id"):
        return cell[1]
    raise ValueError(cell)


def _cell_out(cell) -> int:
    if cell == "cup":
        return 2
    if cell == "cap":
        return 0
    if cell in ("over", "under", ):
        return 2
    if cell == "S":
        return 4
    if isinstance(cell, tuple) and cell[0] in ("f", "id"):
        return cell[1]
    raise ValueError(cell)


def word_element(word: List[List]) -> SElement:
    return engine.from_morse(word)


def switch_tags(word: List[List], sites: Sequence[int]) -> List[List]:
    """Swap over/under at the given crossing sites (counted in word order)."""
    flipped = []
    count = 0
    for row in word:
        new_row = []
        for cell in row:
            if cell in ("over", "under"):
                if count in sites:
                    cell = "under" if cell == "over" else "over"
                count += 1
            new_row.append(cell)
        flipped.append(new_row)
    return flipped


def crossing_count(word: List[List]) -> int:
    return sum(1 for row in word for cell in row if cell in ("over", "under"))


def insert_rii(word: List[List], rng: random.Random) -> List[List]:
    """Insert a cancelling over/under pair on two adjacent strands."""
    out = [list(r) for r in word]
    # find a row boundary with width >= 2
    widths = []
    w = 0
    for row in out:
        w = sum(_cell_out(c) for c in row)
        widths.append(w)
    spots = [i for i, w in enumerate(widths) if w >= 2]
    if not spots:
        return out
    at = rng.choice(spots)
    w = widths[at]
    pos = rng.randrange(0, w - 1)
    row1 = ([("id", pos)] if pos else []) + ["over"] + ([("id", w - pos - 2)] if w - pos - 2 else [])
    row2 = ([("id", pos)] if pos else []) + ["under"] + ([("id", w - pos - 2)] if w - pos - 2 else [])
    return out[: at + 1] + [row1, row2] + out[at + 1:]


def nested_cups_el(v: int) -> SElement:
    acc = engine.cup()
    for t in range(1, v):
        acc = engine.compose(acc, engine.tensor(engine.tensor(engine.strand(t), engine.cup()),
                                                engine.strand(t)))
    return acc


def s_up_el() -> SElement:
    return engine.compose(nested_cups_el(4), engine.tensor(engine.s_box(), engine.strand(4)))


def move_right(el: SElement, pos: int, count: int, tag: str) -> SElement:
    width = el.n
    for t in range(pos, pos + count):
        row = engine.tensor(engine.tensor(engine.strand(t - 1), engine.crossing(tag)),
                            engine.strand(width - t - 1))
        el = engine.compose(el, row)
    return el


def curl(el: SElement, pos: int, tag: str) -> SElement:
    w = el.n
    el = engine.compose(el, engine.tensor(engine.tensor(engine.strand(pos), engine.cup()),
                                          engine.strand(w - pos)))
    el = engine.compose(el, engine.tensor(engine.tensor(engine.strand(pos - 1), engine.crossing(tag)),
                                          engine.strand(w - pos + 1)))
    el = engine.compose(el, engine.tensor(engine.tensor(engine.strand(pos), engine.cap()),
                                          engine.strand(w - pos)))
    return el


def untwisted_pair(c: int) -> SElement:
    v = 8 - c
    el = engine.tensor(s_up_el(), s_up_el())
    mid = engine.tensor(engine.tensor(engine.strand(v), engine.adjoint(nested_cups_el(c))),
                        engine.strand(v))
    return engine.compose(el, mid)


def twisted_pair(c: int) -> SElement:
    """The two-box interface cable given a full positive twist: the cable
    wraps once over the right box and its ports walk out to meet it, with a
    framing-neutralizing curl on odd cable widths."""
    v = 8 - c
    el = engine.tensor(s_up_el(), s_up_el())
    for s in range(c):
        el = move_right(el, 8 - s, 8, "over")
    for s in range(c):
        el = move_right(el, v + c - s, 8 - c, "over")
    if c % 2:
        el = curl(el, v + (8 - c) + 1, "under")
    mid = engine.tensor(engine.strand(v + (8 - c)), engine.adjoint(nested_cups_el(c)))
    return engine.compose(el, mid)


def rotate_presentation(word: List[List], rng: random.Random) -> SElement:
    """A sphere isotopy of the closed diagram: cut the stack at a row
    boundary of width w, present it as the w-strand trace of upper over
    lower instead of building bottom-up.  Falls back to the identity
    presentation when no nonzero-width cut exists."""
    widths = []
    w = 0
    for row in word:
        w = sum(_cell_out(c) for c in row)
        widths.append(w)
    cuts = [i for i in range(len(word) - 1) if widths[i] > 0]
    if not cuts:
        return word_element(word)
    at = rng.choice(cuts)
    lower = word[: at + 1]
    upper = word[at + 1:]
    lo = engine.from_morse(lower)   # 0 -> w
    up = engine.from_morse(upper)   # w -> 0
    swapped = engine.compose(up, lo)  # w -> w, upper first
    return engine.trace_close(swapped)


def slide_distant_rows(word: List[List], rng: random.Random) -> List[List]:
    """Split a row with two or more active cells into two rows: the chosen
    cell slides below its row-mates (a far-commutation isotopy)."""
    out = [list(r) for r in word]
    cands = []
    for i, row in enumerate(out):
        active = [j for j, c in enumerate(row) if not (isinstance(c, tuple) and c[0] == "id")]
        if len(active) >= 2:
            cands.append((i, active))
    if not cands:
        return out
    i, active = rng.choice(cands)
    row = out[i]
    j = rng.choice(active)
    row_a: List = []
    row_b: List = []
    for t, c in enumerate(row):
        if t == j:
            row_a.append(c)
            ow = _cell_out(c)
            if ow:
                row_b.append(("id", ow))
        else:
            iw = _cell_in(c)
            if iw:
                row_a.append(("id", iw))
            row_b.append(c)
    return out[:i] + [row_a, row_b] + out[i + 1:]
