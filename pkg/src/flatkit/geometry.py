"""Geodesic geometry engine on triangulated translation surfaces.

The surface is ear-clipped into triangles whose corners all sit at
polygon vertices (= cone points or marked points).  All transition maps
are translations, so a developing map assigns each explored triangle a
translation offset.  On top of this the module provides

* exhaustive saddle-connection search inside a disc of radius L
  (sector-splitting exploration with exact pruning),
* straight-line separatrix tracing from vertex germs,
* cylinder detection in a given direction via boundary chains
  (consecutive saddle connections meeting at angle pi on one side),
* first-return maps of the vertical flow to a horizontal segment,
  with homology crossing words.

Everything works verbatim for exact scalars (Fraction / QuadraticNumber)
and for floats, where sign tests get a tolerance.
"""

from __future__ import annotations

from fractions import Fraction

from .numkit import QuadraticNumber
from .surface import TranslationSurface


class BudgetExceededError(RuntimeError):
    """A tracing or search budget ran out before the result was complete."""


def _sgn(x, tol=0.0):
    if isinstance(x, QuadraticNumber):
        return x.sign()
    if isinstance(x, float):
        if abs(x) <= tol:
            return 0
        return 1 if x > 0 else -1
    return (x > 0) - (x < 0)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _neg(a):
    return (-a[0], -a[1])


def _norm2(a):
    return a[0] * a[0] + a[1] * a[1]


class SaddleConnection:
    """Oriented saddle connection with exact holonomy."""

    __slots__ = ("holonomy", "start_class", "end_class", "germ", "end_corner")

    def __init__(self, holonomy, start_class, end_class, germ, end_corner=None):
        self.holonomy = holonomy
        self.start_class = start_class
        self.end_class = end_class
        self.germ = germ
        self.end_corner = end_corner

    def length2(self):
        return _norm2(self.holonomy)

    def __repr__(self):
        return (f"SaddleConnection({self.holonomy}, "
                f"{self.start_class}->{self.end_class})")


def _triangulate(points, tol):
    """Ear-clip a simple polygon given by vertex positions; returns index triples."""
    n = len(points)
    idx = list(range(n))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * n * n:
            raise ValueError("ear clipping failed (polygon not simple?)")
        clipped = False
        m = len(idx)
        for k in range(m):
            i0, i1, i2 = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            a, b, c = points[i0], points[i1], points[i2]
            if _sgn(_cross(_sub(b, a), _sub(c, b)), tol) <= 0:
                continue
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = points[j]
                s1 = _sgn(_cross(_sub(b, a), _sub(p, a)), tol)
                s2 = _sgn(_cross(_sub(c, b), _sub(p, b)), tol)
                s3 = _sgn(_cross(_sub(a, c), _sub(p, c)), tol)
                if s1 >= 0 and s2 >= 0 and s3 >= 0:
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise ValueError("no ear found (polygon not simple?)")
    tris.append(tuple(idx))
    return tris


class FlatGeometry:
    """Triangulated model of a TranslationSurface with gluing adjacency."""

    def __init__(self, ts: TranslationSurface):
        self.ts = ts
        g = ts.gluing
        self.tol = g.tol
        tris = []          # (poly, (iv0, iv1, iv2), (P0, P1, P2))
        edge_lookup = {}   # directed (poly, va, vb) -> (tri, edge)
        for p, poly in enumerate(g.polygons):
            pts = g.vertices(p)
            for (i0, i1, i2) in _triangulate(pts, self.tol):
                t = len(tris)
                tris.append((p, (i0, i1, i2), (pts[i0], pts[i1], pts[i2])))
                for e, (a, b) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
                    edge_lookup[(p, a, b)] = (t, e)
        self.tris = tris
        # homology generators: one per glued edge pair, primary side first
        self.edge_gens = []
        gen_of = {}
        for (p, e), (p2, e2) in g.pairing.items():
            if (p, e) < (p2, e2):
                gen_of[(p, e)] = (len(self.edge_gens), 1)
                gen_of[(p2, e2)] = (len(self.edge_gens), -1)
                self.edge_gens.append((p, e))
        self.n_gens = len(self.edge_gens)
        adj = {}
        for (p, a, b), (t, e) in edge_lookup.items():
            if (p, b, a) in edge_lookup:
                t2, e2 = edge_lookup[(p, b, a)]
                adj[(t, e)] = (t2, e2, None, None)
        for p, poly in enumerate(g.polygons):
            k = len(poly)
            pts = g.vertices(p)
            for e in range(k):
                p2, e2 = g.pairing[(p, e)]
                pts2 = g.vertices(p2)
                a, b = e, (e + 1) % k
                a2, b2 = e2, (e2 + 1) % len(g.polygons[p2])
                t, te = edge_lookup[(p, a, b)]
                t2, te2 = edge_lookup[(p2, a2, b2)]
                # the start of edge e is identified with the end of edge e2
                shift = _sub(pts2[b2], pts[a])
                adj[(t, te)] = (t2, te2, shift, gen_of[(p, e)])
        self.adj = adj
        class_of_polygon_vertex = {}
        for cid, cyc in enumerate(ts.vertex_classes):
            for (p, i) in cyc:
                class_of_polygon_vertex[(p, i)] = cid
        self.n_classes = len(ts.vertex_classes)
        self.corner_class = {}
        for t, (p, ivs, _) in enumerate(self.tris):
            for c in range(3):
                self.corner_class[(t, c)] = class_of_polygon_vertex[(p, ivs[c])]
        self._class_corner_cycles = None

    # -- elementary accessors -------------------------------------------

    def tri_points(self, t):
        return self.tris[t][2]

    def tri_poly(self, t):
        return self.tris[t][0]

    def corner_point(self, corner):
        t, c = corner
        return self.tris[t][2][c]

    def corner_rays(self, corner):
        """(u, w): outgoing edge direction and reversed incoming direction."""
        t, c = corner
        pts = self.tris[t][2]
        u = _sub(pts[(c + 1) % 3], pts[c])
        w = _sub(pts[(c + 2) % 3], pts[c])
        return u, w

    def next_corner(self, corner):
        """Next triangle corner counterclockwise around the same point."""
        t, c = corner
        t2, e2, _, _ = self.adj[(t, (c + 2) % 3)]
        return (t2, e2)

    def class_corners(self, cid):
        """Corners of a vertex class in counterclockwise cyclic order."""
        if self._class_corner_cycles is None:
            cycles = [None] * self.n_classes
            seen = set()
            for corner in sorted(self.corner_class):
                if corner in seen:
                    continue
                cyc = [corner]
                seen.add(corner)
                cur = self.next_corner(corner)
                while cur != corner:
                    cyc.append(cur)
                    seen.add(cur)
                    cur = self.next_corner(cur)
                cycles[self.corner_class[corner]] = cyc
            self._class_corner_cycles = cycles
        return self._class_corner_cycles[cid]

    def _ray_in_corner(self, u, w, v):
        """v in the half-open triangle-corner sector [u, w) (angle < pi)."""
        tol = self.tol
        if _sgn(_cross(u, v), tol) == 0 and _sgn(_dot(u, v), tol) > 0:
            return True
        if _sgn(_cross(w, v), tol) == 0 and _sgn(_dot(w, v), tol) > 0:
            return False
        return _sgn(_cross(u, v), tol) > 0 and _sgn(_cross(v, w), tol) > 0

    def cone_order(self, cid):
        """d + 1: multiplicity of any direction germ at the class."""
        return sum(
            1 for corner in self.class_corners(cid)
            if self._ray_in_corner(*self.corner_rays(corner), (1, 0))
        )

    def germs(self, direction, cid=None):
        """Corners whose half-open sector contains `direction`."""
        corners = (
            self.corner_class.keys() if cid is None else self.class_corners(cid)
        )
        return [
            corner for corner in corners
            if self._ray_in_corner(*self.corner_rays(corner), direction)
        ]

    # -- straight-line tracing -------------------------------------------

    def _cross_triangle(self, t, pos, direction):
        """First exit of the ray pos + s*direction (s > 0) from triangle t.

        Returns ("vertex", c, point) or ("edge", e, point).
        """
        tol = self.tol
        pts = self.tris[t][2]
        best = None
        for c in range(3):
            a, b = pts[c], pts[(c + 1) % 3]
            seg = _sub(b, a)
            denom = _cross(direction, seg)
            if _sgn(denom, tol) == 0:
                continue
            rel = _sub(a, pos)
            tq = _cross(rel, seg) / denom
            sq = _cross(rel, direction) / denom
            if _sgn(tq, tol) <= 0:
                continue
            if _sgn(sq, tol) < 0 or _sgn(sq - 1, tol) > 0:
                continue
            if best is None or tq < best[0]:
                best = (tq, c, sq)
        if best is None:
            raise ValueError("ray does not exit the triangle")
        tq, c, sq = best
        q = (pos[0] + tq * direction[0], pos[1] + tq * direction[1])
        a, b = pts[c], pts[(c + 1) % 3]
        sq0 = _sgn(sq, self.tol)
        sq1 = _sgn(sq - 1, self.tol)
        if sq0 == 0:
            return "vertex", c, a
        if sq1 == 0:
            return "vertex", (c + 1) % 3, b
        return "edge", c, q

    def trace_germ(self, corner, direction, max_len2=None, max_steps=100000,
                   collect_segments=False, collect_word=False):
        """Trace the separatrix leaving `corner` along `direction`.

        Returns (holonomy, end_corner, segments, word) when another vertex
        is reached.  Raises BudgetExceededError when a budget runs out.
        `segments` lists (tri, p_from, p_to) in triangle-local coordinates;
        `word` is the signed list of glued-edge generators crossed.
        """
        tol = self.tol
        t, c = corner
        u, w = self.corner_rays((t, c))
        segments = [] if collect_segments else None
        word = [] if collect_word else None
        if _sgn(_cross(u, direction), tol) == 0 and _sgn(_dot(u, direction), tol) > 0:
            pts = self.tris[t][2]
            hol = _sub(pts[(c + 1) % 3], pts[c])
            if collect_segments:
                segments.append((t, pts[c], pts[(c + 1) % 3]))
            return hol, (t, (c + 1) % 3), segments, word
        if not self._ray_in_corner(u, w, direction):
            raise ValueError("direction not in this corner's sector")
        pos = self.corner_point((t, c))
        dev = (0 * pos[0], 0 * pos[1])       # developed position of pos
        steps = 0
        while True:
            steps += 1
            if steps > max_steps:
                raise BudgetExceededError("step budget in trace_germ")
            kind, idx, q = self._cross_triangle(t, pos, direction)
            step_vec = _sub(q, pos)
            dev = _add(dev, step_vec)
            if collect_segments:
                segments.append((t, pos, q))
            if max_len2 is not None and _sgn(_norm2(dev) - max_len2, tol) > 0:
                raise BudgetExceededError("length budget in trace_germ")
            if kind == "vertex":
                return dev, (t, idx), segments, word
            t2, e2, shift, gen = self.adj[(t, idx)]
            if collect_word and gen is not None:
                word.append(gen)
            pos = q if shift is None else _add(q, shift)
            t = t2

    # -- exhaustive saddle-connection search ------------------------------

    def is_marked(self, cid):
        """True for regular marked classes (cone angle exactly 2 pi)."""
        return self.cone_order(cid) == 1

    def saddle_connections(self, max_len, max_nodes=20_000_000,
                           through_marked=False):
        """All oriented saddle connections of length <= max_len.

        Sector-splitting search from every corner germ; each oriented
        connection is discovered exactly once.  With `through_marked`,
        segments may pass through regular marked points in their interior
        (those points still terminate and start connections as well).
        """
        tol = self.tol
        L2 = max_len * max_len
        out = []
        nodes = 0
        marked = [self.is_marked(cid) for cid in range(self.n_classes)]
        for t in range(len(self.tris)):
            for c in range(3):
                corner = (t, c)
                cid = self.corner_class[corner]
                pts = self.tris[t][2]
                origin = pts[c]
                u = _sub(pts[(c + 1) % 3], pts[c])
                w = _sub(pts[(c + 2) % 3], pts[c])
                if _sgn(_norm2(u) - L2, tol) <= 0:
                    end = (t, (c + 1) % 3)
                    out.append(SaddleConnection(
                        u, cid, self.corner_class[end], corner, end))
                    if through_marked and marked[self.corner_class[end]]:
                        out.extend(self._continue_ray(cid, corner, end, u,
                                                      L2, marked))
                zero = 0 * origin[0]
                stack = [(t, (c + 1) % 3,
                          (zero - origin[0], zero - origin[1]), u, w)]
                while stack:
                    nodes += 1
                    if nodes > max_nodes:
                        raise BudgetExceededError(
                            "node budget in saddle_connections")
                    tt, gate, off, cu, cw = stack.pop()
                    t2, e2, shift, _ = self.adj[(tt, gate)]
                    off2 = off if shift is None else _sub(off, shift)
                    pts2 = self.tris[t2][2]
                    apexi = (e2 + 2) % 3
                    apex = _add(pts2[apexi], off2)
                    sa = _sgn(_cross(cu, apex), tol)
                    sb = _sgn(_cross(apex, cw), tol)
                    if sa > 0 and sb > 0:
                        if _sgn(_norm2(apex) - L2, tol) <= 0:
                            end = (t2, apexi)
                            out.append(SaddleConnection(
                                apex, cid, self.corner_class[end], corner,
                                end))
                            if through_marked and marked[self.corner_class[end]]:
                                out.extend(self._continue_ray(
                                    cid, corner, end, apex, L2, marked))
                        for gate2, nu, nw in (((e2 + 1) % 3, cu, apex),
                                              ((e2 + 2) % 3, apex, cw)):
                            if self._cone_edge_reachable(t2, gate2, off2,
                                                         nu, nw, L2):
                                stack.append((t2, gate2, off2, nu, nw))
                        continue
                    gate2 = (e2 + 2) % 3 if sa <= 0 else (e2 + 1) % 3
                    if self._cone_edge_reachable(t2, gate2, off2, cu, cw, L2):
                        stack.append((t2, gate2, off2, cu, cw))
        return out

    def _continue_ray(self, start_cid, start_germ, hit_corner, hol, L2,
                      marked):
        """Prolong a connection through marked points while within radius."""
        out = []
        cur_corner = hit_corner
        cur_hol = hol
        direction = hol
        while True:
            try:
                germ = self.forward_germ_at(cur_corner, direction)
            except ValueError:
                return out
            try:
                step_hol, endc, _, _ = self.trace_germ(
                    germ, direction, max_len2=L2, max_steps=100000)
            except BudgetExceededError:
                return out
            cur_hol = _add(cur_hol, step_hol)
            if _sgn(_norm2(cur_hol) - L2, self.tol) > 0:
                return out
            ecid = self.corner_class[endc]
            out.append(SaddleConnection(cur_hol, start_cid, ecid,
                                        start_germ, endc))
            if not marked[ecid]:
                return out
            cur_corner = endc

    def _cone_edge_reachable(self, t, edge, off, cu, cw, L2):
        """Does the open cone (cu, cw) meet the developed edge within radius?"""
        tol = self.tol
        pts = self.tris[t][2]
        a = _add(pts[edge], off)
        b = _add(pts[(edge + 1) % 3], off)
        d = _sub(b, a)
        lo, hi = None, None     # parameter range of the cone clip, in [0, 1]
        lo, hi = 0, 1
        for vec, side in ((cu, +1), (cw, -1)):
            # side +1: need cross(cu, x) >= 0; side -1: need cross(x, cw) >= 0
            f0 = _cross(vec, a) if side > 0 else _cross(a, vec)
            f1 = _cross(vec, b) if side > 0 else _cross(b, vec)
            s0, s1 = _sgn(f0, tol), _sgn(f1, tol)
            if s0 < 0 and s1 < 0:
                return False
            if s0 >= 0 and s1 >= 0:
                continue
            s = f0 / (f0 - f1)
            if s0 < 0:
                lo = max(lo, s)
            else:
                hi = min(hi, s)
        if lo > hi:
            return False
        dd = _norm2(d)
        candidates = [lo, hi]
        if _sgn(dd, tol) > 0:
            s_star = -_dot(a, d) / dd
            if lo < s_star < hi:
                candidates.append(s_star)
        for s in candidates:
            p = (a[0] + s * d[0], a[1] + s * d[1])
            if _sgn(_norm2(p) - L2, tol) <= 0:
                return True
        return False

    # -- cylinders in a fixed direction ------------------------------------

    def axis_germ_cycle(self, cid, direction):
        """Forward/backward germs of a class in counterclockwise order.

        Entries are ("F", corner) or ("B", corner); they alternate, with
        cone_order(cid) germs of each kind.
        """
        back = _neg(direction)
        cyc = []
        for corner in self.class_corners(cid):
            u, w = self.corner_rays(corner)
            if self._ray_in_corner(u, w, direction):
                cyc.append(("F", corner))
            if self._ray_in_corner(u, w, back):
                cyc.append(("B", corner))
        return cyc

    def forward_germ_at(self, corner, direction):
        """The germ of `direction` at the vertex of `corner`, by CCW walk."""
        cur = corner
        for _ in range(len(self.class_corners(self.corner_class[corner])) + 1):
            u, w = self.corner_rays(cur)
            if self._ray_in_corner(u, w, direction):
                return cur
            cur = self.next_corner(cur)
        raise ValueError("no germ found at vertex")

    def directional_data(self, direction, max_len, max_steps=200000,
                         collect_segments=False):
        """Trace all forward separatrices in `direction` with a length budget."""
        L2 = max_len * max_len
        sc_by_germ = {}
        failures = []
        for cid in range(self.n_classes):
            for kind, corner in self.axis_germ_cycle(cid, direction):
                if kind != "F":
                    continue
                try:
                    hol, endc, segs, _ = self.trace_germ(
                        corner, direction, max_len2=L2, max_steps=max_steps,
                        collect_segments=collect_segments)
                    sc_by_germ[corner] = (hol, endc, segs)
                except BudgetExceededError:
                    failures.append(corner)
        return sc_by_germ, failures

    def chains(self, direction, max_len, max_steps=200000,
               collect_segments=False):
        """Cylinder floors: closed chains of saddle connections in `direction`.

        Each chain turns by exactly pi on its left-hand side at every cone
        point, so it bounds a maximal cylinder on that side; every maximal
        cylinder with circumference <= max_len arises from exactly one
        chain.  Returns (chains, sc_by_germ, failures).
        """
        sc_by_germ, failures = self.directional_data(
            direction, max_len, max_steps, collect_segments)
        # map each backward germ to the forward germ just clockwise of it
        b2f = {}
        for cid in range(self.n_classes):
            cyc = self.axis_germ_cycle(cid, direction)
            m = len(cyc)
            for i, (kind, corner) in enumerate(cyc):
                if kind == "B":
                    pk, pc = cyc[(i - 1) % m]
                    if pk != "F":
                        raise ValueError("axis germs do not alternate")
                    b2f[corner] = pc
        succ = {}
        back = _neg(direction)
        for germ, (hol, endc, segs) in sc_by_germ.items():
            try:
                bg = self.forward_germ_at(endc, back)
            except ValueError:
                continue
            succ[germ] = b2f[bg]
        chains = []
        seen = set()
        for germ in succ:
            if germ in seen:
                continue
            chain = [germ]
            seen.add(germ)
            cur = succ[germ]
            broken = False
            while cur != germ:
                if cur not in succ or cur in seen:
                    broken = True
                    break
                chain.append(cur)
                seen.add(cur)
                cur = succ[cur]
            if not broken:
                chains.append(chain)
        return chains, sc_by_germ, failures

    def chain_width(self, chain, sc_by_germ, direction):
        """Circumference of the cylinder over a chain, as a scalar length factor.

        Returns total holonomy component along `direction` divided by
        |direction| implicitly: (sum hol) . dir / sqrt(dir . dir) stays
        exact only when |direction| is rational, so we return the pair
        (total_dot, dir_norm2) for exact callers and a float helper below.
        """
        tot = None
        for germ in chain:
            hol = sc_by_germ[germ][0]
            tot = hol if tot is None else _add(tot, hol)
        return _dot(tot, direction), _norm2(direction)

    def chain_width_float(self, chain, sc_by_germ, direction):
        dotv, n2 = self.chain_width(chain, sc_by_germ, direction)
        return float(dotv) / float(n2) ** 0.5

    def flow_to_graph(self, start_tri, start_point, direction, seg_index,
                      max_steps=100000):
        """Flow until the trajectory crosses a stored critical-graph segment.

        seg_index maps a triangle to a list of (tag, p0, p1, base) entries.
        Returns (tag, s_par, base, rise_vec).  Vertex hits raise ValueError.
        """
        tol = self.tol
        t = start_tri
        pos = start_point
        dev = (0 * pos[0], 0 * pos[1])
        for step in range(max_steps):
            kind, idx, q = self._cross_triangle(t, pos, direction)
            exit2 = _norm2(_sub(q, pos))
            best = None
            for (tag, p0, p1, base) in seg_index.get(t, ()):
                seg_d = _sub(p1, p0)
                denom = _cross(direction, seg_d)
                if _sgn(denom, tol) == 0:
                    continue
                rel = _sub(p0, pos)
                tq = _cross(rel, seg_d) / denom
                sq = _cross(rel, direction) / denom
                tsig = _sgn(tq, tol)
                if ((tsig > 0 or (tsig == 0 and step > 0))
                        and _sgn(sq, tol) >= 0
                        and _sgn(sq - 1, tol) <= 0):
                    hit = (pos[0] + tq * direction[0],
                           pos[1] + tq * direction[1])
                    d2 = _norm2(_sub(hit, pos))
                    if _sgn(exit2 - d2, tol) >= 0:
                        if best is None or d2 < best[0]:
                            best = (d2, tag, sq, base, hit, p0, p1)
            if best is not None:
                d2, tag, sq, base, hit, p0, p1 = best
                return tag, sq, base, _add(dev, _sub(hit, pos)), p0, p1
            dev = _add(dev, _sub(q, pos))
            if kind == "vertex":
                raise ValueError("trajectory hit a vertex")
            t2, e2, shift, gen = self.adj[(t, idx)]
            pos = q if shift is None else _add(q, shift)
            t = t2
        raise BudgetExceededError("step budget in flow_to_graph")

    def cylinder_geometry(self, direction, max_len, max_steps=200000,
                          require_complete=True):
        """Cylinders in `direction` with exact width/height/twist data.

        Returns a list of cylinders {chain, width_dot, height_dot,
        twist_dot, ceiling_chain, norm2}; the *_dot quantities are scalar
        products with `direction` (widths, twists) or its left normal
        (heights), i.e. true length times |direction|.  Twists are
        measured by flowing off the floor marker and recording the landing
        offset on the ceiling chain relative to that chain's own marker,
        modulo the width.  With require_complete the direction must be
        completely periodic within the budget; otherwise the cylinders
        found among closed separatrices are measured.
        """
        chains, sc_by_germ, failures = self.chains(
            direction, max_len, max_steps, collect_segments=True)
        if failures and require_complete:
            raise BudgetExceededError(
                f"{len(failures)} separatrices did not close")
        n2 = _norm2(direction)
        vperp = (-direction[1], direction[0])
        # offsets of each saddle connection inside its chain, in dot units
        chain_of = {}
        offset_of = {}
        widths = []
        for ci, chain in enumerate(chains):
            run = None
            for germ in chain:
                chain_of[germ] = ci
                offset_of[germ] = run if run is not None else 0
                w = _dot(sc_by_germ[germ][0], direction)
                run = w if run is None else run + w
            widths.append(run)
        seg_index = {}
        for germ, (hol, endc, segs) in sc_by_germ.items():
            cum = 0
            for (t, p0, p1) in segs:
                seg_index.setdefault(t, []).append((germ, p0, p1, cum))
                cum = cum + _dot(_sub(p1, p0), direction)
        out = []
        offsets_to_try = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5),
                          Fraction(3, 7), Fraction(5, 11), Fraction(4, 9)]
        for ci, chain in enumerate(chains):
            germ0 = chain[0]
            hol0, endc0, segs0 = sc_by_germ[germ0]
            rec = None
            for alpha in offsets_to_try:
                # point at parameter alpha along the first connection
                target = alpha * _dot(hol0, direction)
                cum = 0
                spot = None
                for (t, p0, p1) in segs0:
                    step = _dot(_sub(p1, p0), direction)
                    nxt = cum + step
                    if nxt > target:
                        f = (target - cum) / step
                        spot = (t, (p0[0] + f * (p1[0] - p0[0]),
                                    p0[1] + f * (p1[1] - p0[1])))
                        break
                    cum = nxt
                if spot is None:
                    continue
                try:
                    (germ_hit, sq, base, rise, hp0, hp1) = self.flow_to_graph(
                        spot[0], spot[1], vperp, seg_index, max_steps)
                except ValueError:
                    continue
                w = widths[ci]
                if germ_hit in chain_of:
                    land = base + sq * _dot(_sub(hp1, hp0), direction)
                    x_bottom = alpha * _dot(hol0, direction)
                    x_land = offset_of[germ_hit] + land
                    diff = x_bottom - x_land
                    tw = diff % w if isinstance(w, float) else \
                        diff - (diff / w).__floor__() * w
                    ci2 = chain_of[germ_hit]
                else:
                    tw, ci2 = None, None
                rec = {
                    "chain": chain,
                    "width_dot": w,
                    "height_dot": _dot(rise, vperp),
                    "twist_dot": tw,
                    "ceiling_chain": ci2,
                    "norm2": n2,
                }
                break
            if rec is None:
                raise BudgetExceededError(
                    "could not measure cylinder height (vertex hits)")
            out.append(rec)
        return out

    # -- vertical structure over a horizontal transversal ------------------

    def locate(self, poly, point):
        """Triangle of polygon `poly` containing `point` (local coords)."""
        tol = self.tol
        for t, (p, ivs, pts) in enumerate(self.tris):
            if p != poly:
                continue
            ok = True
            for c in range(3):
                a, b = pts[c], pts[(c + 1) % 3]
                if _sgn(_cross(_sub(b, a), _sub(point, a)), tol) < 0:
                    ok = False
                    break
            if ok:
                return t
        raise ValueError("point not inside the polygon")

    def flow_to_segment(self, start_tri, start_point, direction, seg_poly,
                        seg_a, seg_b, max_steps=100000, interior_only=False):
        """Flow from a point until the trajectory crosses segment (a, b).

        The segment lives in the local frame of polygon seg_poly.  Returns
        (s_par, rise_vec, word, steps) where s_par in [0, 1] locates the
        crossing on the segment and rise_vec is the developed displacement.
        Starting exactly on the segment does not count as a crossing, and
        with interior_only crossings through the segment endpoints are
        flown through rather than reported.  Hitting any vertex raises
        ValueError; exceeding max_steps raises BudgetExceededError.
        """
        tol = self.tol
        t = start_tri
        pos = start_point
        dev = (0 * pos[0], 0 * pos[1])
        word = []
        seg_d = _sub(seg_b, seg_a)
        for step in range(max_steps):
            kind, idx, q = self._cross_triangle(t, pos, direction)
            if self.tri_poly(t) == seg_poly:
                denom = _cross(direction, seg_d)
                if _sgn(denom, tol) != 0:
                    rel = _sub(seg_a, pos)
                    tq = _cross(rel, seg_d) / denom
                    sq = _cross(rel, direction) / denom
                    s0, s1 = _sgn(sq, tol), _sgn(sq - 1, tol)
                    good = (s0 > 0 and s1 < 0) if interior_only else \
                        (s0 >= 0 and s1 <= 0)
                    if _sgn(tq, tol) > 0 and good:
                        hit = (pos[0] + tq * direction[0],
                               pos[1] + tq * direction[1])
                        if _sgn(_norm2(_sub(q, pos)) - _norm2(_sub(hit, pos)),
                                tol) >= 0:
                            return sq, _add(dev, _sub(hit, pos)), word, step
            dev = _add(dev, _sub(q, pos))
            if kind == "vertex":
                raise ValueError("trajectory hit a vertex")
            t2, e2, shift, gen = self.adj[(t, idx)]
            if gen is not None:
                word.append(gen)
            pos = q if shift is None else _add(q, shift)
            t = t2
        raise BudgetExceededError("step budget in flow_to_segment")
