"""Planar diagram engine: S-boxes, pending Jones-Wenzl boxes, crossings.

A diagram is a combinatorial map: boxes with cyclically ordered ports, a
set of boundary points (m on the bottom, n on top), and a perfect matching
of all ports and boundary points by strands.  Closed loops are never stored;
they are popped into the coefficient (factor 2 each) as soon as they form.

Evaluation of a closed diagram resolves every crossing into its two
smoothings (coefficients +/- i), splits connected components (values
multiply), kills any component in which a box is capped by a strand joining
cyclically adjacent ports, merges pairs of S-boxes joined by four parallel
strands via  S.S = 6 f(4) + S,  and expands pending Jones-Wenzl boxes one
step at a time with eager dead-branch pruning.  The S-box is treated as
rotation invariant when matching interfaces; that identity is re-verified
independently by the test suites through the trace form.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .scalars import GaussianRational, I, MINUS_I, ONE, ZERO, render_gaussian
from .tl import ArityError, TLElement

S_KIND = -1
X_KIND = -2
Y_KIND = -3
# kind >= 0 is a pending Jones-Wenzl box f(kind)

DELTA = 2


class NotClosed(ValueError):
    pass


class StuckDiagram(RuntimeError):
    """A crossing-free component with S-boxes admits no reduction step.

    This is unreachable for diagrams of the planar algebra; raising instead
    of defaulting to zero turns an engine bug into a hard failure.
    """


def kind_ports(kind: int) -> int:
    if kind == S_KIND:
        return 8
    if kind in (X_KIND, Y_KIND):
        return 4
    return 2 * kind


def kind_name(kind: int) -> str:
    if kind == S_KIND:
        return "S"
    if kind == X_KIND:
        return "x"
    if kind == Y_KIND:
        return "y"
    return f"f{kind}"


# ---------------------------------------------------------------------------
# graphs

Raw = Tuple[Tuple[int, ...], int, int, Tuple[int, ...]]


class SGraph:
    """Immutable combinatorial map.  Site numbering: bottom boundary points
    are 0..m-1 (left to right), top points m..m+n-1 (left to right), then
    box ports in box order, each box's ports in counterclockwise order
    (bottom side left to right, then top side right to left)."""

    __slots__ = ("kinds", "stars", "m", "n", "adj", "offs", "_hash")

    def __init__(self, kinds: Tuple[int, ...], m: int, n: int, adj: Tuple[int, ...],
                 stars: Tuple[int, ...] | None = None):
        self.kinds = kinds
        self.m = m
        self.n = n
        self.adj = adj
        offs = []
        base = m + n
        for k in kinds:
            offs.append(base)
            base += kind_ports(k)
        self.offs = tuple(offs)
        # Marked-point offsets are carried for rendering but are inert for
        # evaluation (rotation invariance of S), so they are not hashed.
        self.stars = stars if stars is not None else (0,) * len(kinds)
        self._hash = hash((kinds, m, n, adj))

    def raw(self) -> Raw:
        return (self.kinds, self.m, self.n, self.adj)

    @property
    def sites(self) -> int:
        return len(self.adj)

    def box_site(self, i: int, p: int) -> int:
        return self.offs[i] + p

    def site_owner(self, s: int) -> Tuple[str, int, int]:
        """('b', j, -1) / ('t', j, -1) for boundary, ('box', i, p) for ports."""
        if s < self.m:
            return ("b", s, -1)
        if s < self.m + self.n:
            return ("t", s - self.m, -1)
        lo, hi = 0, len(self.kinds) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offs[mid] <= s:
                lo = mid
            else:
                hi = mid - 1
        return ("box", lo, s - self.offs[lo])

    def __eq__(self, other):
        return (
            isinstance(other, SGraph)
            and self._hash == other._hash
            and self.kinds == other.kinds
            and self.m == other.m
            and self.n == other.n
            and self.adj == other.adj
        )

    def __hash__(self):
        return self._hash

    def describe(self) -> str:
        bits = [f"{self.m}->{self.n}"]
        for i, k in enumerate(self.kinds):
            bits.append(kind_name(k))
        edges = []
        for s in range(self.sites):
            t = self.adj[s]
            if s < t:
                edges.append(f"{self._site_txt(s)}-{self._site_txt(t)}")
        return " ".join(bits) + " [" + ", ".join(edges) + "]"

    def _site_txt(self, s: int) -> str:
        kind, i, p = self.site_owner(s)
        if kind == "b":
            return f"b{i}"
        if kind == "t":
            return f"t{i}"
        return f"{kind_name(self.kinds[i])}#{i}.{p}"

    __repr__ = describe


def _mk(kinds: Sequence[int], m: int, n: int, adj: Sequence[int]) -> Raw:
    return (tuple(kinds), m, n, tuple(adj))


# -- atoms ------------------------------------------------------------------


def strand_raw(k: int) -> Raw:
    adj = [0] * (2 * k)
    for j in range(k):
        adj[j], adj[k + j] = k + j, j
    return _mk((), k, k, adj)


def cup_raw() -> Raw:
    return _mk((), 0, 2, (1, 0))


def cap_raw() -> Raw:
    return _mk((), 2, 0, (1, 0))


def e_raw(j: int, k: int) -> Raw:
    if not (1 <= j <= k - 1):
        raise ArityError(f"e({j},{k}): index out of range")
    adj = [0] * (2 * k)
    for t in range(k):
        adj[t], adj[k + t] = k + t, t
    a, b = j - 1, j
    adj[a], adj[b] = b, a
    adj[k + a], adj[k + b] = k + b, k + a
    return _mk((), k, k, adj)


def box_raw(kind: int) -> Raw:
    """A single box wired straight to the boundary of its own shape."""
    if kind == S_KIND:
        m = n = 4
    elif kind in (X_KIND, Y_KIND):
        m = n = 2
    else:
        m = n = kind
    ports = kind_ports(kind)
    total = m + n
    adj = [0] * (total + ports)
    for j in range(m):  # bottom j <-> port j
        adj[j], adj[total + j] = total + j, j
    for j in range(n):  # top j (left to right) <-> port (ports-1-j)
        p = ports - 1 - j
        adj[m + j], adj[total + p] = total + p, m + j
    return _mk((kind,), m, n, adj)


# ---------------------------------------------------------------------------
# gluing


def _glue(parts: Sequence[Raw], links: Sequence[Tuple[Tuple[int, int], Tuple[int, int]]],
          bnd: Dict[Tuple[int, int], Tuple[str, int]], new_m: int, new_n: int) -> Tuple[Raw, int]:
    """Join several graphs along linked boundary points.

    ``links`` pairs boundary sites (part, site) that get welded together;
    ``bnd`` maps the surviving boundary sites to ('b'|'t', index) of the new
    graph.  Box ports keep their wiring.  Returns the raw graph and the
    number of closed loops formed by the welds.
    """
    kinds: List[int] = []
    box_base: List[int] = []
    for (pk, pm, pn, _) in parts:
        box_base.append(len(kinds))
        kinds.extend(pk)

    offs_new: List[int] = []
    base = new_m + new_n
    for k in kinds:
        offs_new.append(base)
        base += kind_ports(k)
    total_new = base

    part_offs: List[List[int]] = []
    for (pk, pm, pn, _) in parts:
        offs = []
        b = pm + pn
        for k in pk:
            offs.append(b)
            b += kind_ports(k)
        part_offs.append(offs)

    def ext_site(pi: int, s: int) -> int:
        pk, pm, pn, _ = parts[pi]
        if s < pm + pn:
            side, idx = bnd[(pi, s)]
            return idx if side == "b" else new_m + idx
        # box port
        offs = part_offs[pi]
        lo, hi = 0, len(pk) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if offs[mid] <= s:
                lo = mid
            else:
                hi = mid - 1
        return offs_new[box_base[pi] + lo] + (s - offs[lo])

    link: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for a, b in links:
        link[a] = b
        link[b] = a

    adj_new = [-1] * total_new
    seen: Set[Tuple[int, int]] = set()

    def chase(node: Tuple[int, int]) -> Tuple[int, int]:
        # node was entered along a strand; keep walking through welds
        while node in link:
            seen.add(node)
            other = link[node]
            seen.add(other)
            pi, s = other
            node = (pi, parts[pi][3][s])
        return node

    for pi, part in enumerate(parts):
        pk, pm, pn, padj = part
        for s in range(len(padj)):
            node = (pi, s)
            if node in link or node in seen:
                continue
            a = ext_site(pi, s)
            if adj_new[a] != -1:
                continue
            target = chase((pi, padj[s]))
            b = ext_site(*target)
            adj_new[a], adj_new[b] = b, a

    loops = 0
    for node in list(link):
        if node in seen:
            continue
        loops += 1
        cur = node
        while cur not in seen:
            seen.add(cur)
            other = link[cur]
            seen.add(other)
            pi, s = other
            cur = (pi, parts[pi][3][s])
    return _mk(kinds, new_m, new_n, adj_new), loops


def compose_raw(x: Raw, y: Raw) -> Tuple[Raw, int]:
    """y stacked on top of x (x applied first)."""
    xk, xm, xn, _ = x
    yk, ym, yn, _ = y
    if xn != ym:
        raise ArityError(f"compose: inner arities differ ({xn} vs {ym})")
    links = [((0, xm + j), (1, j)) for j in range(xn)]
    bnd: Dict[Tuple[int, int], Tuple[str, int]] = {}
    for j in range(xm):
        bnd[(0, j)] = ("b", j)
    for j in range(yn):
        bnd[(1, ym + j)] = ("t", j)
    return _glue([x, y], links, bnd, xm, yn)


def tensor_raw(x: Raw, y: Raw) -> Tuple[Raw, int]:
    xk, xm, xn, _ = x
    yk, ym, yn, _ = y
    bnd: Dict[Tuple[int, int], Tuple[str, int]] = {}
    for j in range(xm):
        bnd[(0, j)] = ("b", j)
    for j in range(xn):
        bnd[(0, xm + j)] = ("t", j)
    for j in range(ym):
        bnd[(1, j)] = ("b", xm + j)
    for j in range(yn):
        bnd[(1, ym + j)] = ("t", xn + j)
    return _glue([x, y], [], bnd, xm + ym, xn + yn)


def trace_close_raw(x: Raw) -> Tuple[Raw, int]:
    xk, xm, xn, _ = x
    if xm != xn:
        raise ArityError("trace needs an endomorphism arity")
    links = [((0, xm + j), (0, j)) for j in range(xm)]
    return _glue([x], links, {}, 0, 0)


def partial_trace_raw(x: Raw, left: bool) -> Tuple[Raw, int]:
    xk, xm, xn, _ = x
    if xm != xn:
        raise ArityError("partial trace needs an endomorphism arity")
    if xm < 1:
        raise ArityError("partial trace needs arity >= 1")
    j = 0 if left else xm - 1
    links = [((0, xm + j), (0, j))]
    bnd: Dict[Tuple[int, int], Tuple[str, int]] = {}
    t = 0
    for b in range(xm):
        if b != j:
            bnd[(0, b)] = ("b", t)
            t += 1
    t = 0
    for b in range(xn):
        if b != j:
            bnd[(0, xm + b)] = ("t", t)
            t += 1
    return _glue([x], links, bnd, xm - 1, xn - 1)


def adjoint_raw(x: Raw) -> Raw:
    """Vertical reflection; crossings swap chirality."""
    xk, xm, xn, xadj = x
    kinds = tuple(
        (Y_KIND if k == X_KIND else X_KIND) if k in (X_KIND, Y_KIND) else k for k in xk
    )
    offs = _offsets(x)
    owner = _owner_table(x)

    def remap(s: int) -> int:
        if s < xm:
            return xn + s  # bottom -> top, same order
        if s < xm + xn:
            return s - xm
        i = owner[s]
        p = s - offs[i]
        return offs[i] + (kind_ports(xk[i]) - 1 - p)

    adj = [0] * len(xadj)
    for s in range(len(xadj)):
        adj[remap(s)] = remap(xadj[s])
    return _mk(kinds, xn, xm, adj)


def dual_raw(x: Raw) -> Raw:
    """Rotation by pi."""
    xk, xm, xn, xadj = x
    offs = _offsets(x)
    owner = _owner_table(x)

    def remap(s: int) -> int:
        if s < xm:
            return xn + (xm - 1 - s)
        if s < xm + xn:
            return (xn - 1) - (s - xm)
        i = owner[s]
        p = s - offs[i]
        half = kind_ports(xk[i]) // 2
        return offs[i] + ((p + half) % kind_ports(xk[i]))

    adj = [0] * len(xadj)
    for s in range(len(xadj)):
        adj[remap(s)] = remap(xadj[s])
    return _mk(xk, xn, xm, adj)


def rotate_raw(x: Raw) -> Raw:
    """Click the outer boundary one position counterclockwise."""
    xk, xm, xn, xadj = x
    total = xm + xn
    if total == 0:
        return x

    def pos_of(s: int) -> int:
        return s if s < xm else xm + (xn - 1 - (s - xm))

    def site_at(pos: int) -> int:
        return pos if pos < xm else xm + (xn - 1 - (pos - xm))

    def remap(s: int) -> int:
        if s >= total:
            return s
        return site_at((pos_of(s) - 1) % total)

    adj = [0] * len(xadj)
    for s in range(len(xadj)):
        adj[remap(s)] = remap(xadj[s])
    return _mk(xk, xm, xn, adj)


# ---------------------------------------------------------------------------
# rewiring (single-box rewrites)

End = Tuple  # ("a", old_site) or ("nw", new_box_local_index, port)


def _rewire(raw: Raw, removed: Set[int], drop_ports: Set[int], add_kinds: Sequence[int],
            wiring: Sequence[Tuple[End, End]]) -> Tuple[Raw, int]:
    """Remove boxes, add new ones, and reconnect strand ends.

    Every port of a removed box must appear in exactly one wiring pair as
    ("a", site) -- meaning "whatever was attached there" -- or in
    ``drop_ports`` (for strands consumed together with the boxes, e.g. the
    four interface strands of an S.S merge).  Ports of added boxes appear as
    ("nw", i, p).  Returns the rewired raw graph and the loop count.
    """
    kinds, m, n, adj = raw
    offs = []
    b = m + n
    for k in kinds:
        offs.append(b)
        b += kind_ports(k)

    removed_sites: Dict[int, int] = {}
    for i in sorted(removed):
        for p in range(kind_ports(kinds[i])):
            removed_sites[offs[i] + p] = i

    kept = [i for i in range(len(kinds)) if i not in removed]
    new_kinds = [kinds[i] for i in kept] + list(add_kinds)
    new_offs = []
    b = m + n
    for k in new_kinds:
        new_offs.append(b)
        b += kind_ports(k)
    total_new = b

    kept_pos = {i: t for t, i in enumerate(kept)}
    owner = _owner_table(raw)

    def remap_kept(s: int) -> int:
        if s < m + n:
            return s
        i = owner[s]
        return new_offs[kept_pos[i]] + (s - offs[i])

    wire: Dict[End, End] = {}
    for a, c in wiring:
        wire[a] = c
        wire[c] = a

    def new_port_site(e: End) -> int:
        _, bi, p = e
        return new_offs[len(kept) + bi] + p

    adj_new = [-1] * total_new
    visited: Set[int] = set()

    def resolve_from_wire(e: End) -> int:
        # e was reached along a weld; walk until a real endpoint appears
        while True:
            if e[0] == "nw":
                return new_port_site(e)
            q = e[1]
            visited.add(q)
            t = adj[q]
            if t not in removed_sites:
                return remap_kept(t)
            visited.add(t)
            e = wire[("a", t)]

    def connect(a: int, b2: int):
        adj_new[a] = b2
        adj_new[b2] = a

    for e0 in list(wire):
        if e0[0] != "nw":
            continue
        a = new_port_site(e0)
        if adj_new[a] != -1:
            continue
        connect(a, resolve_from_wire(wire[e0]))

    for s in range(len(adj)):
        if s in removed_sites or s in drop_ports:
            continue
        a = remap_kept(s)
        if adj_new[a] != -1:
            continue
        t = adj[s]
        if t in drop_ports:
            raise AssertionError("strand into dropped port from kept site")
        if t not in removed_sites:
            connect(a, remap_kept(t))
        else:
            visited.add(t)
            connect(a, resolve_from_wire(wire[("a", t)]))

    for d in drop_ports:
        if adj[d] not in drop_ports:
            raise AssertionError("dropped port paired with live strand")

    loops = 0
    for q in removed_sites:
        if q in visited or q in drop_ports:
            continue
        loops += 1
        cur = q
        while cur not in visited:
            visited.add(cur)
            e = wire[("a", cur)]
            assert e[0] == "a"
            visited.add(e[1])
            cur = adj[e[1]]
    return _mk(new_kinds, m, n, adj_new), loops


# ---------------------------------------------------------------------------
# structural queries


def _offsets(raw: Raw) -> List[int]:
    kinds, m, n, _ = raw
    offs = []
    b = m + n
    for k in kinds:
        offs.append(b)
        b += kind_ports(k)
    return offs


def _owner_table(raw: Raw) -> List[int]:
    """owner[s] = box index for port sites, -1 for boundary sites."""
    kinds, m, n, adj = raw
    owner = [-1] * (m + n)
    for i, k in enumerate(kinds):
        owner.extend([i] * kind_ports(k))
    return owner


def _box_partner(raw: Raw, offs: Sequence[int], i: int, p: int,
                 owner: Optional[Sequence[int]] = None) -> Tuple[str, int, int]:
    kinds, m, n, adj = raw
    t = adj[offs[i] + p]
    if t < m:
        return ("b", t, -1)
    if t < m + n:
        return ("t", t - m, -1)
    if owner is not None:
        j = owner[t]
    else:
        j = 0
        for q in range(len(kinds)):
            if offs[q] <= t:
                j = q
    return ("box", j, t - offs[j])


def is_killed(raw: Raw) -> bool:
    """True when some box is capped: an edge joins cyclically adjacent ports
    of an S-box, or same-side adjacent ports of a Jones-Wenzl box."""
    kinds, m, n, adj = raw
    offs = _offsets(raw)
    for i, k in enumerate(kinds):
        if k in (X_KIND, Y_KIND):
            continue
        ports = kind_ports(k)
        base = offs[i]
        if k == S_KIND:
            for p in range(ports):
                if adj[base + p] == base + ((p + 1) % ports):
                    return True
        else:
            kk = k
            for p in range(kk - 1):  # bottom side
                if adj[base + p] == base + p + 1:
                    return True
            for p in range(kk, 2 * kk - 1):  # top side
                if adj[base + p] == base + p + 1:
                    return True
    return False


def _find_corner(raw: Raw) -> Optional[Tuple[int, str]]:
    kinds, m, n, adj = raw
    offs = _offsets(raw)
    for i, k in enumerate(kinds):
        if k < 2:
            continue
        base = offs[i]
        if adj[base + k - 1] == base + k:
            return (i, "right")
        if adj[base + 2 * k - 1] == base:
            return (i, "left")
    return None


def _find_absorb(raw: Raw, offs: Sequence[int], owner: Sequence[int]) -> Optional[int]:
    """A Jones-Wenzl box one of whose full sides plugs consecutively into a
    single other box (any cyclic run of an S-box; a run within one side of a
    bigger Jones-Wenzl box).  Such a box connects straight through."""
    kinds, m, n, adj = raw
    for i, k in enumerate(kinds):
        if k < 1:
            continue
        for side_ports in (tuple(range(k)), tuple(range(k, 2 * k))):
            who, j, p0 = _box_partner(raw, offs, i, side_ports[0], owner)
            if who != "box" or j == i:
                continue
            bk = kinds[j]
            if bk in (X_KIND, Y_KIND):
                continue
            bports = kind_ports(bk)
            ok = True
            run = [p0]
            for t in range(1, k):
                who2, j2, pt = _box_partner(raw, offs, i, side_ports[t], owner)
                if who2 != "box" or j2 != j:
                    ok = False
                    break
                run.append(pt)
            if not ok:
                continue
            # consecutive and orientation-reversed on the other box
            step = None
            good = True
            for t in range(1, k):
                d = (run[t] - run[t - 1]) % bports
                if step is None:
                    step = d
                if d != step or d not in (1, bports - 1):
                    good = False
                    break
            if not good:
                continue
            if bk == S_KIND:
                if k > 8:
                    continue
            else:
                if k > bk:
                    continue
                lo, hi = min(run), max(run)
                same_side = (hi < bk and lo >= 0 and hi - lo == k - 1) or (
                    lo >= bk and hi - lo == k - 1
                )
                if not same_side:
                    continue
            return i
    return None


def _find_s_squared(raw: Raw, offs: Sequence[int], owner: Sequence[int]) -> List[Tuple[int, int, int, int]]:
    """All (a, b, p, q): ports p..p+3 of S-box a matched to q..q-3 of S-box b."""
    kinds, m, n, adj = raw
    out = []
    sboxes = [i for i, k in enumerate(kinds) if k == S_KIND]
    for a in sboxes:
        for p in range(8):
            who, b, q = _box_partner(raw, offs, a, p, owner)
            if who != "box" or kinds[b] != S_KIND or b <= a:
                continue
            ok = True
            for t in range(1, 4):
                who2, b2, q2 = _box_partner(raw, offs, a, (p + t) % 8, owner)
                if who2 != "box" or b2 != b or q2 != (q - t) % 8:
                    ok = False
                    break
            if ok:
                out.append((a, b, p, q))
    return out


# ---------------------------------------------------------------------------
# single-term simplification


def _simplify(raw: Raw) -> Optional[Tuple[Raw, GaussianRational]]:
    """Pop loops already gone; apply kills and the connect-through rewrites
    to a fixed point.  Returns None when the term is zero."""
    factor = ONE
    while True:
        kinds, m, n, adj = raw
        if is_killed(raw):
            return None
        # f(0): drop outright
        dropped = None
        for i, k in enumerate(kinds):
            if k == 0:
                dropped = i
                break
        if dropped is not None:
            raw, loops = _rewire(raw, {dropped}, set(), [], [])
            if loops:
                factor = factor * (DELTA ** loops)
            continue
        # f(1): a bare strand
        dropped = None
        for i, k in enumerate(kinds):
            if k == 1:
                dropped = i
                break
        if dropped is not None:
            offs = _offsets(raw)
            base = offs[dropped]
            raw, loops = _rewire(raw, {dropped}, set(), [], [(("a", base), ("a", base + 1))])
            if loops:
                factor = factor * (DELTA ** loops)
            continue
        corner = _find_corner(raw)
        if corner is not None:
            i, side = corner
            k = kinds[i]
            offs = _offsets(raw)
            base = offs[i]
            factor = factor * Fraction(k + 1, k)
            wiring: List[Tuple[End, End]] = []
            if side == "right":
                drop = {base + k - 1, base + k}
                for t in range(k - 1):
                    wiring.append((("nw", 0, t), ("a", base + t)))
                for u in range(1, k):
                    wiring.append((("nw", 0, 2 * (k - 1) - u), ("a", base + 2 * k - u)))
            else:
                drop = {base + 2 * k - 1, base}
                for t in range(k - 1):
                    wiring.append((("nw", 0, t), ("a", base + t + 1)))
                for u in range(1, k):
                    wiring.append((("nw", 0, 2 * (k - 1) - u), ("a", base + 2 * k - u - 1)))
            raw, loops = _rewire(raw, {i}, drop, [k - 1], wiring)
            if loops:
                factor = factor * (DELTA ** loops)
            continue
        ab = _find_absorb(raw, _offsets(raw), _owner_table(raw))
        if ab is not None:
            k = kinds[ab]
            offs = _offsets(raw)
            base = offs[ab]
            wiring = [(("a", base + t), ("a", base + 2 * k - 1 - t)) for t in range(k)]
            raw, loops = _rewire(raw, {ab}, set(), [], wiring)
            if loops:
                factor = factor * (DELTA ** loops)
            continue
        return raw, factor


# ---------------------------------------------------------------------------
# canonical form


def _encode_component(raw: Raw, root: int, rot: int, offs: Sequence[int],
                      owner: Sequence[int], ports_of: Sequence[int],
                      best: Optional[List] = None):
    """Breadth-first encoding of a closed component rooted at (root, rot).

    When ``best`` is given, abort as soon as the encoding compares greater
    (returns None); also returns None on an exact tie, so the first minimal
    encoding found wins deterministically."""
    kinds, m, n, adj = raw
    order = {root: 0}
    rots = {root: rot}
    queue = [root]
    code: List = []
    better = best is None
    qi = 0
    while qi < len(queue):
        b = queue[qi]
        qi += 1
        ports = ports_of[b]
        r = rots[b]
        base = offs[b]
        tok = (0, kinds[b], 0)
        if not better:
            bt = best[len(code)]
            if tok > bt:
                return None
            if tok < bt:
                better = True
        code.append(tok)
        for t in range(ports):
            s = adj[base + (r + t) % ports]
            j = owner[s]
            q = s - offs[j]
            if j not in order:
                order[j] = len(queue)
                # S-boxes are rotation free; others keep absolute ports
                rots[j] = q if kinds[j] == S_KIND else 0
                queue.append(j)
            tok = (1, order[j], (q - rots[j]) % ports_of[j])
            if not better:
                bt = best[len(code)]
                if tok > bt:
                    return None
                if tok < bt:
                    better = True
            code.append(tok)
    if not better:
        return None
    return code, queue, rots


_norm_cache: Dict[Raw, "SGraph"] = {}
_NORM_CACHE_MAX = 400_000


def normalize(raw: Raw) -> SGraph:
    """Deterministic relabeling: boundary-anchored breadth-first order with
    S-box rotations normalized to the entry port; closed components get the
    lexicographically minimal encoding over roots and rotations."""
    cached = _norm_cache.get(raw)
    if cached is not None:
        return cached
    kinds, m, n, adj = raw
    offs = _offsets(raw)
    owner = _owner_table(raw)
    ports_of = [kind_ports(k) for k in kinds]
    nb = len(kinds)

    order: Dict[int, int] = {}
    rots: Dict[int, int] = {}
    seq: List[int] = []

    def visit_from_box(b: int, entry: int):
        rots[b] = entry if kinds[b] == S_KIND else 0
        order[b] = len(seq)
        seq.append(b)
        queue = [b]
        qi = 0
        while qi < len(queue):
            cur = queue[qi]
            qi += 1
            ports = kind_ports(kinds[cur])
            r = rots[cur]
            base = offs[cur]
            for t in range(ports):
                s = adj[base + (r + t) % ports]
                j = owner[s] if s >= m + n else -1
                if j >= 0 and j not in order:
                    rots[j] = (s - offs[j]) if kinds[j] == S_KIND else 0
                    order[j] = len(seq)
                    seq.append(j)
                    queue.append(j)

    for s in range(m + n):
        t = adj[s]
        if t >= m + n:
            j = owner[t]
            if j not in order:
                visit_from_box(j, t - offs[j])

    # closed components: minimal encoding over root choices
    comps: List[List[int]] = []
    seen: Set[int] = set()
    for i in range(nb):
        if i in order or i in seen:
            continue
        comp = [i]
        seen.add(i)
        qi = 0
        while qi < len(comp):
            cur = comp[qi]
            qi += 1
            base = offs[cur]
            for p in range(kind_ports(kinds[cur])):
                j = owner[adj[base + p]]
                if j not in seen:
                    seen.add(j)
                    comp.append(j)
        comps.append(comp)

    encoded = []
    for comp in comps:
        minkind = min(kinds[b] for b in comp)
        best = None
        for root in comp:
            if kinds[root] != minkind:
                continue
            rset = range(8) if kinds[root] == S_KIND else (0,)
            for rot in rset:
                res = _encode_component(raw, root, rot, offs, owner, ports_of,
                                        None if best is None else best[0])
                if res is not None:
                    best = res
        encoded.append(best)
    encoded.sort(key=lambda b: b[0])
    for code, queue, crots in encoded:
        for b in queue:
            order[b] = len(seq)
            seq.append(b)
            rots[b] = crots[b]

    new_kinds = tuple(kinds[b] for b in seq)
    new_offs = []
    base = m + n
    for k in new_kinds:
        new_offs.append(base)
        base += kind_ports(k)

    def remap(s: int) -> int:
        if s < m + n:
            return s
        i = owner[s]
        p = s - offs[i]
        ports = kind_ports(kinds[i])
        return new_offs[order[i]] + ((p - rots[i]) % ports)

    adj_new = [0] * len(adj)
    for s in range(len(adj)):
        adj_new[remap(s)] = remap(adj[s])
    out = SGraph(new_kinds, m, n, tuple(adj_new))
    if len(_norm_cache) < _NORM_CACHE_MAX:
        _norm_cache[raw] = out
    return out


# ---------------------------------------------------------------------------
# elements


class SElement:
    """Linear combination of diagrams with Gaussian-rational coefficients.

    Terms are kept in normal form: loops popped into coefficients, capped
    boxes dropped, connect-through boxes removed, graphs relabeled
    canonically so equal diagrams merge."""

    __slots__ = ("m", "n", "terms")

    def __init__(self, m: int, n: int, terms: Optional[Dict[SGraph, GaussianRational]] = None):
        self.m = m
        self.n = n
        self.terms: Dict[SGraph, GaussianRational] = terms or {}

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_raw(raw: Raw, coeff: GaussianRational = ONE) -> "SElement":
        el = SElement(raw[1], raw[2])
        el._insert(raw, coeff)
        return el

    def _insert(self, raw: Raw, coeff: GaussianRational):
        if coeff.is_zero():
            return
        simplified = _simplify(raw)
        if simplified is None:
            return
        raw2, factor = simplified
        g = normalize(raw2)
        c = coeff * factor
        s = self.terms.get(g)
        s = c if s is None else s + c
        if s.is_zero():
            self.terms.pop(g, None)
        else:
            self.terms[g] = s

    # -- linear structure ---------------------------------------------------

    def _check_same(self, other: "SElement"):
        if (self.m, self.n) != (other.m, other.n):
            raise ArityError(f"arity mismatch: ({self.m}->{self.n}) vs ({other.m}->{other.n})")

    def __add__(self, other: "SElement") -> "SElement":
        self._check_same(other)
        out = SElement(self.m, self.n, dict(self.terms))
        for g, c in other.terms.items():
            s = out.terms.get(g)
            s = c if s is None else s + c
            if s.is_zero():
                out.terms.pop(g, None)
            else:
                out.terms[g] = s
        return out

    def __sub__(self, other: "SElement") -> "SElement":
        return self + other.scale(GaussianRational(-1))

    def scale(self, c) -> "SElement":
        if isinstance(c, (int, Fraction)):
            c = GaussianRational(c)
        if c.is_zero():
            return SElement(self.m, self.n)
        return SElement(self.m, self.n, {g: c * v for g, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, SElement)
            and (self.m, self.n) == (other.m, other.n)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self.terms.items())))

    def term_count(self) -> int:
        return len(self.terms)

    def describe(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for g in sorted(self.terms, key=lambda h: (h.kinds, h.adj)):
            bits.append(f"{render_gaussian(self.terms[g])} * {g.describe()}")
        return " + ".join(bits)

    __repr__ = describe


def _map_terms(x: SElement, fn, m: int, n: int, conj: bool = False) -> SElement:
    out = SElement(m, n)
    for g, c in x.terms.items():
        raw, loops = fn(g.raw())
        if loops:
            c = c * (DELTA ** loops)
        out._insert(raw, c.conj() if conj else c)
    return out


def compose(x: SElement, y: SElement) -> SElement:
    """y stacked on top of x (x applied first, bottom to top)."""
    if x.n != y.m:
        raise ArityError(f"compose: inner arities differ ({x.n} vs {y.m})")
    out = SElement(x.m, y.n)
    for gx, cx in x.terms.items():
        for gy, cy in y.terms.items():
            raw, loops = compose_raw(gx.raw(), gy.raw())
            c = cx * cy
            if loops:
                c = c * (DELTA ** loops)
            out._insert(raw, c)
    return out


def tensor(x: SElement, y: SElement) -> SElement:
    out = SElement(x.m + y.m, x.n + y.n)
    for gx, cx in x.terms.items():
        for gy, cy in y.terms.items():
            raw, loops = tensor_raw(gx.raw(), gy.raw())
            c = cx * cy
            if loops:
                c = c * (DELTA ** loops)
            out._insert(raw, c)
    return out


def adjoint(x: SElement) -> SElement:
    return _map_terms(x, lambda r: (adjoint_raw(r), 0), x.n, x.m, conj=True)


def dual(x: SElement) -> SElement:
    return _map_terms(x, lambda r: (dual_raw(r), 0), x.n, x.m)


def rotate_F(x: SElement) -> SElement:
    return _map_terms(x, lambda r: (rotate_raw(r), 0), x.m, x.n)


def trace_close(x: SElement) -> SElement:
    return _map_terms(x, trace_close_raw, 0, 0)


def partial_trace_right(x: SElement) -> SElement:
    return _map_terms(x, lambda r: partial_trace_raw(r, left=False), x.m - 1, x.n - 1)


def partial_trace_left(x: SElement) -> SElement:
    return _map_terms(x, lambda r: partial_trace_raw(r, left=True), x.m - 1, x.n - 1)


def strand(k: int) -> SElement:
    return SElement.from_raw(strand_raw(k))


def empty() -> SElement:
    return SElement.from_raw(_mk((), 0, 0, ()))


def cup() -> SElement:
    return SElement.from_raw(cup_raw())


def cap() -> SElement:
    return SElement.from_raw(cap_raw())


def s_box() -> SElement:
    return SElement.from_raw(box_raw(S_KIND))


def jw_box(k: int) -> SElement:
    if k < 0:
        raise ArityError("f(k) needs k >= 0")
    return SElement.from_raw(box_raw(k)) if k else empty()


def crossing(tag: str) -> SElement:
    if tag == "over":
        return SElement.from_raw(box_raw(X_KIND))
    if tag == "under":
        return SElement.from_raw(box_raw(Y_KIND))
    raise ValueError(f"unknown crossing tag {tag!r}")


def e_element(j: int, k: int) -> SElement:
    return SElement.from_raw(e_raw(j, k))


def from_tl(el: TLElement) -> SElement:
    out = SElement(el.m, el.n)
    for p, c in el.terms.items():
        adj = [0] * (el.m + el.n)
        for s in range(el.m + el.n):
            adj[s] = p[s]
        out._insert(_mk((), el.m, el.n, adj), c)
    return out


# -- Morse words ------------------------------------------------------------

# A Morse word is a list of rows (bottom first); each row is a list of cells
# drawn left to right.  Cells: ("id", n), "cup", "cap", "over", "under",
# "S", ("f", k).

Cell = object
MorseWord = List[List[Cell]]


def _cell_raw(cell) -> Raw:
    if cell == "cup":
        return cup_raw()
    if cell == "cap":
        return cap_raw()
    if cell == "over":
        return box_raw(X_KIND)
    if cell == "under":
        return box_raw(Y_KIND)
    if cell == "S":
        return box_raw(S_KIND)
    if isinstance(cell, tuple) and cell[0] == "id":
        return strand_raw(cell[1])
    if isinstance(cell, tuple) and cell[0] == "f":
        return box_raw(cell[1])
    if isinstance(cell, tuple) and cell[0] == "e":
        return e_raw(cell[1], cell[2])
    raise ValueError(f"unknown Morse cell {cell!r}")


def from_morse(word: MorseWord) -> SElement:
    """Stack the rows of a Morse word into a single-term element."""
    acc: Optional[SElement] = None
    for row in word:
        raw = None
        for cell in row:
            c = _cell_raw(cell)
            raw = c if raw is None else tensor_raw(raw, c)[0]
        if raw is None:
            raw = _mk((), 0, 0, ())
        row_el = SElement.from_raw(raw)
        acc = row_el if acc is None else compose(acc, row_el)
    return acc if acc is not None else empty()


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class ReductionStep:
    kind: str  # remove_loop | zero_uccs | s_squared | expand_jw | split | done
    detail: str = ""


@dataclass
class Stats:
    crossings_resolved: int = 0
    s2_applications: int = 0
    jw_expansions: int = 0
    terms_peak: int = 0
    wall_ms: int = 0

    def bump_terms(self, k: int):
        if k > self.terms_peak:
            self.terms_peak = k


@dataclass
class EvalConfig:
    strategy: str = "first"  # which S.S pair to reduce first: "first" | "last"
    trace: Optional[Callable[[ReductionStep], None]] = None
    stats: Stats = field(default_factory=Stats)

    def emit(self, kind: str, detail: str = ""):
        if self.trace is not None:
            self.trace(ReductionStep(kind, detail))


_component_values: Dict[SGraph, GaussianRational] = {}
_memo_lock = threading.Lock()


def clear_caches():
    _component_values.clear()
    _pair_cache.clear()
    _norm_cache.clear()


def _smooth_one(raw: Raw, ci: int) -> List[Tuple[Raw, GaussianRational, int]]:
    offs = _offsets(raw)
    base = offs[ci]
    horiz = [(("a", base + 0), ("a", base + 1)), (("a", base + 2), ("a", base + 3))]
    vert = [(("a", base + 0), ("a", base + 3)), (("a", base + 1), ("a", base + 2))]
    tag = raw[0][ci]
    out = []
    for wiring, w in ((horiz, I), (vert, MINUS_I)) if tag == X_KIND else (
        (vert, I), (horiz, MINUS_I)
    ):
        raw2, loops = _rewire(raw, {ci}, set(), [], wiring)
        out.append((raw2, w, loops))
    return out


def resolve_crossings(x: SElement, config: Optional[EvalConfig] = None) -> SElement:
    """Expand every crossing into its two smoothings.

    Works one crossing per wave with term merging in between, so heavily
    crossed diagrams stay polynomial in the number of distinct wirings
    rather than exponential in the crossing count; branches whose smoothing
    caps a box are dropped as they appear."""
    config = config or EvalConfig()
    out = SElement(x.m, x.n)
    work: Dict[SGraph, GaussianRational] = dict(x.terms)
    while work:
        config.stats.bump_terms(len(work) + len(out.terms))
        nxt = SElement(x.m, x.n)
        for g, c in work.items():
            raw = g.raw()
            ci = next((i for i, k in enumerate(raw[0]) if k in (X_KIND, Y_KIND)), None)
            if ci is None:
                s = out.terms.get(g)
                s = c if s is None else s + c
                if s.is_zero():
                    out.terms.pop(g, None)
                else:
                    out.terms[g] = s
                continue
            config.stats.crossings_resolved += 1
            for raw2, w, loops in _smooth_one(raw, ci):
                c2 = c * w
                if loops:
                    c2 = c2 * (DELTA ** loops)
                nxt._insert(raw2, c2)
        work = nxt.terms
    return out


def _split_components(raw: Raw) -> List[Raw]:
    kinds, m, n, adj = raw
    if m or n:
        raise NotClosed("component split is for closed graphs")
    nb = len(kinds)
    if nb <= 1:
        return [raw]
    offs = _offsets(raw)
    owner = _owner_table(raw)
    seen: Set[int] = set()
    comps: List[List[int]] = []
    for i in range(nb):
        if i in seen:
            continue
        comp = [i]
        seen.add(i)
        qi = 0
        while qi < len(comp):
            cur = comp[qi]
            qi += 1
            base = offs[cur]
            for p in range(kind_ports(kinds[cur])):
                j = owner[adj[base + p]]
                if j not in seen:
                    seen.add(j)
                    comp.append(j)
        comps.append(comp)
    if len(comps) == 1:
        return [raw]
    out = []
    for comp in comps:
        ckinds = [kinds[i] for i in comp]
        coffs = []
        b = 0
        for k in ckinds:
            coffs.append(b)
            b += kind_ports(k)
        pos = {i: t for t, i in enumerate(comp)}
        cadj = [0] * b
        for t, i in enumerate(comp):
            base = offs[i]
            for p in range(kind_ports(kinds[i])):
                s = adj[base + p]
                j = owner[s]
                cadj[coffs[t] + p] = coffs[pos[j]] + (s - offs[j])
        out.append(_mk(ckinds, 0, 0, cadj))
    return out


def _eval_raw(raw: Raw, config: EvalConfig) -> GaussianRational:
    if any(k in (X_KIND, Y_KIND) for k in raw[0]):
        el = SElement(raw[1], raw[2])
        el._insert(raw, ONE)
        total = ZERO
        for g, c in resolve_crossings(el, config).terms.items():
            total = total + c * _eval_raw(g.raw(), config)
        return total
    simplified = _simplify(raw)
    if simplified is None:
        config.emit("zero_uccs")
        return ZERO
    raw2, factor = simplified
    total = factor
    comps = _split_components(raw2)
    if len(comps) > 1:
        config.emit("split", f"{len(comps)} components")
    for comp in comps:
        v = _eval_component(normalize(comp), config)
        if v.is_zero():
            return ZERO
        total = total * v
    return total


def _eval_component(g: SGraph, config: EvalConfig) -> GaussianRational:
    got = _component_values.get(g)
    if got is not None:
        return got
    raw = g.raw()
    kinds = raw[0]
    if not kinds:
        value = ONE
    else:
        cands = _find_s_squared(raw, _offsets(raw), _owner_table(raw))
        if cands:
            pick = cands[0] if config.strategy == "first" else cands[-1]
            value = _apply_s_squared(raw, pick, config)
        else:
            jw = [(kinds[i], i) for i in range(len(kinds)) if kinds[i] >= 2]
            if jw:
                value = _expand_jw(raw, min(jw)[1], config)
            elif any(k == S_KIND for k in kinds):
                raise StuckDiagram(f"no reduction applies: {g.describe()}")
            else:
                # only f(0)/f(1)/crossings would remain, all removed earlier
                raise StuckDiagram(f"unexpected residue: {g.describe()}")
    with _memo_lock:
        _component_values[g] = value
    config.emit("done", render_gaussian(value))
    return value


def _apply_s_squared(raw: Raw, cand: Tuple[int, int, int, int], config: EvalConfig) -> GaussianRational:
    a, b, p, q = cand
    config.stats.s2_applications += 1
    config.emit("s_squared", f"boxes {a},{b}")
    offs = _offsets(raw)
    abase, bbase = offs[a], offs[b]
    drop = set()
    for t in range(4):
        drop.add(abase + (p + t) % 8)
        drop.add(bbase + (q - t) % 8)
    wiring: List[Tuple[End, End]] = []
    for t in range(4):
        wiring.append((("nw", 0, t), ("a", abase + (p + 4 + t) % 8)))
        wiring.append((("nw", 0, 4 + t), ("a", bbase + (q + 1 + t) % 8)))
    raw_s, loops_s = _rewire(raw, {a, b}, drop, [S_KIND], wiring)
    raw_f, loops_f = _rewire(raw, {a, b}, drop, [4], wiring)
    total = (DELTA ** loops_s) * _eval_raw(raw_s, config)
    total = total + GaussianRational(6) * (DELTA ** loops_f) * _eval_raw(raw_f, config)
    return total


def _live_cup_count(raw: Raw, box: int, side: str, offs: Sequence[int],
                    owner: Sequence[int]) -> int:
    """Number of expansion branches whose fresh cup does not cap a box."""
    kinds, m, n, adj = raw
    k = kinds[box]
    base = offs[box]
    if side == "top":
        legs = [base + 2 * k - u for u in range(1, k + 1)]  # t_1..t_k left to right
    else:
        legs = [base + t for t in range(k)]
    live = 0
    for j in range(k - 1):
        s1, s2 = adj[legs[j]], adj[legs[j + 1]]
        b1 = owner[s1] if s1 >= m + n else -1
        b2 = owner[s2] if s2 >= m + n else -1
        if b1 >= 0 and b1 == b2:
            bk = kinds[b1]
            p1, p2 = s1 - offs[b1], s2 - offs[b1]
            if bk == S_KIND:
                if (p1 - p2) % 8 in (1, 7):
                    continue
            elif bk >= 2:
                if abs(p1 - p2) == 1:
                    same_bottom = max(p1, p2) <= bk - 1
                    same_top = min(p1, p2) >= bk
                    if same_bottom or same_top:
                        continue
        live += 1
    return live


def _expand_jw(raw: Raw, box: int, config: EvalConfig) -> GaussianRational:
    """One expansion step of a pending Jones-Wenzl box, on the side where
    more branches die immediately."""
    kinds = raw[0]
    K = kinds[box]
    config.stats.jw_expansions += 1
    config.emit("expand_jw", f"f({K})")
    offs = _offsets(raw)
    owner = _owner_table(raw)
    side = "top"
    if _live_cup_count(raw, box, "bottom", offs, owner) < _live_cup_count(raw, box, "top", offs, owner):
        side = "bottom"
    base = offs[box]
    bot = [base + t for t in range(K)]  # beta_1..beta_K
    top = [base + 2 * K - u for u in range(1, K + 1)]  # t_1..t_K left to right

    def new_bottom_port(i: int) -> End:  # leg i (1-based) of the new f(K-1)
        return ("nw", 0, i - 1)

    def new_top_port(u: int) -> End:
        return ("nw", 0, 2 * (K - 1) - u)

    total = ZERO
    # identity branch
    wiring: List[Tuple[End, End]] = []
    for i in range(1, K):
        wiring.append((new_bottom_port(i), ("a", bot[i - 1])))
        wiring.append((new_top_port(i), ("a", top[i - 1])))
    wiring.append(((("a", bot[K - 1])), ("a", top[K - 1])))
    raw2, loops = _rewire(raw, {box}, set(), [K - 1], wiring)
    total = total + (DELTA ** loops) * _eval_raw(raw2, config)

    for j in range(1, K):
        coeff = GaussianRational(Fraction(j, K))
        if (K - j) % 2:
            coeff = -coeff
        wiring = []
        if side == "top":
            for i in range(1, K):
                wiring.append((new_bottom_port(i), ("a", bot[i - 1])))
            wiring.append((new_top_port(K - 1), ("a", bot[K - 1])))
            wiring.append(((("a", top[j - 1])), ("a", top[j])))
            for u in range(1, K - 1):
                src = u if u < j else u + 2
                wiring.append((new_top_port(u), ("a", top[src - 1])))
        else:
            for u in range(1, K):
                wiring.append((new_top_port(u), ("a", top[u - 1])))
            wiring.append((new_bottom_port(K - 1), ("a", top[K - 1])))
            wiring.append(((("a", bot[j - 1])), ("a", bot[j])))
            for i in range(1, K - 1):
                src = i if i < j else i + 2
                wiring.append((new_bottom_port(i), ("a", bot[src - 1])))
        raw2, loops = _rewire(raw, {box}, set(), [K - 1], wiring)
        total = total + coeff * (DELTA ** loops) * _eval_raw(raw2, config)
    return total


def evaluate_closed(x: SElement, config: Optional[EvalConfig] = None) -> GaussianRational:
    """The evaluation map on closed diagrams."""
    if x.m or x.n:
        raise NotClosed(f"element has arity {x.m}->{x.n}")
    config = config or EvalConfig()
    t0 = time.monotonic()
    config.stats.bump_terms(len(x.terms))
    y = resolve_crossings(x, config)
    total = ZERO
    for g, c in y.terms.items():
        total = total + c * _eval_raw(g.raw(), config)
    config.stats.wall_ms = int((time.monotonic() - t0) * 1000)
    return total


# ---------------------------------------------------------------------------
# trace form


_pair_cache: Dict[Tuple[SGraph, SGraph], GaussianRational] = {}


def _pair_value(gx: SGraph, gy_adj: Raw, key: Tuple[SGraph, SGraph],
                config: EvalConfig) -> GaussianRational:
    got = _pair_cache.get(key)
    if got is not None:
        return got
    raw, l1 = compose_raw(gx.raw(), gy_adj)
    closed, l2 = trace_close_raw(raw)
    v = _eval_raw(closed, config)
    if l1 or l2:
        v = v * (DELTA ** (l1 + l2))
    _pair_cache[key] = v
    return v


def inner(x: SElement, y: SElement, config: Optional[EvalConfig] = None) -> GaussianRational:
    """<x, y> = evaluation of the closure of x y*.

    For non-endomorphism arities the closure arcs pair the remaining
    boundary points of x y* in the canonical nested fashion, which is what
    the composition interface plus the right trace produce."""
    if (x.m, x.n) != (y.m, y.n):
        raise ArityError("inner: arity mismatch")
    config = config or EvalConfig()
    total = ZERO
    y_adj = [(g, adjoint_raw(g.raw()), c.conj()) for g, c in y.terms.items()]
    for gx, cx in x.terms.items():
        for gy, rady, cy in y_adj:
            v = _pair_value(gx, rady, (gx, gy), config)
            if not v.is_zero():
                total = total + cx * cy * v
    return total


def norm_sq(x: SElement, config: Optional[EvalConfig] = None) -> GaussianRational:
    """<x, x>, using hermitian symmetry of the trace form.

    The evaluator commutes with adjoint-plus-conjugation term by term (all
    rewrite coefficients are real and crossing resolution conjugates), so
    the value of the (j, i) closure is the conjugate of the (i, j) one."""
    config = config or EvalConfig()
    items = [(g, adjoint_raw(g.raw()), c) for g, c in x.terms.items()]
    total = ZERO
    for i, (gi, _, ci) in enumerate(items):
        for j in range(i, len(items)):
            gj, radj, cj = items[j]
            v = _pair_value(gi, radj, (gi, gj), config)
            if v.is_zero():
                continue
            t = ci * cj.conj() * v
            total = total + (t if i == j else t + t.conj())
    return total


def is_zero(x: SElement, config: Optional[EvalConfig] = None) -> bool:
    """Positive definiteness of the trace form: x = 0 iff <x, x> = 0."""
    if not x.terms:
        return True
    return norm_sq(x, config).is_zero()


def equal(x: SElement, y: SElement, config: Optional[EvalConfig] = None) -> bool:
    if (x.m, x.n) != (y.m, y.n):
        raise ArityError("equal: arity mismatch")
    return is_zero(x - y, config)


def gram_matrix(xs: Sequence[SElement]) -> List[List[GaussianRational]]:
    for x in xs[1:]:
        if (x.m, x.n) != (xs[0].m, xs[0].n):
            raise ArityError("gram_matrix: arity mismatch")
    n = len(xs)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if j < i:
                out[i][j] = out[j][i].conj()
            else:
                out[i][j] = inner(xs[i], xs[j])
    return out


def matrix_rank(g: Sequence[Sequence[GaussianRational]]) -> int:
    """Rank by fraction-free (Bareiss) elimination over Q(i)."""
    a = [list(row) for row in g]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    rank = 0
    prev = ONE
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if not a[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev
            a[i][c] = ZERO
        prev = a[r][c]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def gram_rank(xs: Sequence[SElement]) -> int:
    if not xs:
        return 0
    return matrix_rank(gram_matrix(xs))
