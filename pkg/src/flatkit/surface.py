"""Translation surfaces glued from polygons by edge translations.

A surface is described by a list of positively oriented polygons (as
loops of edge vectors) and an involutive pairing of edges; paired edges
must carry opposite vectors, so the gluing maps are pure translations.
Cone angles, genus, stratum signature and area are derived at
construction time.

Scalars may be exact (int / Fraction / QuadraticNumber, all sharing one
quadratic field) or floats; exact surfaces are validated with exact sign
tests, float surfaces with tolerances.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .numkit import (Matrix2, QuadraticNumber, field_join, scalar_from_json,
                     scalar_to_json)


class SurfaceError(ValueError):
    pass


class NonClosingPolygonError(SurfaceError):
    pass


class UnmatchedEdgeError(SurfaceError):
    pass


class NonTranslationPairingError(SurfaceError):
    pass


class ConeAngleError(SurfaceError):
    pass


class NonPositiveAreaError(SurfaceError):
    pass


class NonPositiveDeterminantError(SurfaceError):
    pass


class OddSumError(SurfaceError):
    pass


class InvalidSignatureError(SurfaceError):
    pass


ANGLE_TOL = 1e-9   # tolerance on cone angles for float surfaces, in units of 2*pi


class StratumSignature:
    """Sorted multiset of zero degrees; marked points enter as degree 0."""

    __slots__ = ("degrees",)

    def __init__(self, degrees):
        degrees = tuple(sorted((int(d) for d in degrees), reverse=True))
        if any(d < 0 for d in degrees) or not degrees:
            raise InvalidSignatureError(f"bad degrees {degrees}")
        if sum(degrees) % 2:
            raise OddSumError(f"sum of degrees {degrees} is odd")
        object.__setattr__(self, "degrees", degrees)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @property
    def genus(self):
        return sum(self.degrees) // 2 + 1

    @property
    def dimension(self):
        """Complex dimension 2g + m - 1 of the stratum."""
        return 2 * self.genus + len(self.degrees) - 1

    def positive_part(self):
        return tuple(d for d in self.degrees if d > 0)

    def __eq__(self, o):
        return isinstance(o, StratumSignature) and self.degrees == o.degrees

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return "H(%s)" % ",".join(map(str, self.degrees))


def genus_from_signature(sig):
    return sig.genus


def stratum_dimension(sig):
    return sig.dimension


def _is_floatish(x):
    return isinstance(x, float)


def _sign(x, tol=0.0):
    if isinstance(x, QuadraticNumber):
        return x.sign()
    if isinstance(x, float):
        if abs(x) <= tol:
            return 0
        return 1 if x > 0 else -1
    return (x > 0) - (x < 0)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _parallel_same(u, v, tol):
    return _sign(_cross(u, v), tol) == 0 and _sign(_dot(u, v), tol) > 0


def sector_contains(u, w, v, tol=0.0):
    """Whether direction v lies in the CCW sector [u, w), angles in (0, 2pi].

    The sector starts at u (inclusive) and sweeps counterclockwise to w
    (exclusive).  u parallel to w with equal direction means a full turn.
    """
    if _parallel_same(u, v, tol):
        return True
    if _parallel_same(w, v, tol):
        return False
    c = _sign(_cross(u, w), tol)
    d = _sign(_dot(u, w), tol)
    if c == 0 and d > 0:
        # full 2*pi sector
        return True
    if c > 0:
        return _sign(_cross(u, v), tol) > 0 and _sign(_cross(v, w), tol) > 0
    if c == 0:
        # angle exactly pi
        return _sign(_cross(u, v), tol) > 0
    # angle in (pi, 2pi): complement of the open CCW sector (w, u)
    return not (_sign(_cross(w, v), tol) > 0 and _sign(_cross(v, u), tol) > 0)


class PolygonGluing:
    """Polygons as loops of edge vectors plus an involutive edge pairing."""

    def __init__(self, polygons, pairing):
        self.polygons = [list(map(tuple, poly)) for poly in polygons]
        pairs = {}
        for item in pairing:
            if len(item) == 2 and isinstance(item[0], tuple):
                (p, e), (p2, e2) = item
            else:
                p, e, p2, e2 = item
            pairs[(p, e)] = (p2, e2)
            pairs[(p2, e2)] = (p, e)
        self.pairing = pairs
        self.is_float = any(
            _is_floatish(c) for poly in self.polygons for v in poly for c in v
        )
        if self.is_float:
            self.polygons = [
                [(float(x), float(y)) for (x, y) in poly] for poly in self.polygons
            ]
        self.tol = 0.0
        if self.is_float:
            scale = max(
                (abs(c) for poly in self.polygons for v in poly for c in v),
                default=1.0,
            )
            self.tol = 1e-9 * max(scale, 1.0)
        self.validate()

    def validate(self):
        tol = self.tol
        for p, poly in enumerate(self.polygons):
            if len(poly) < 1:
                raise NonClosingPolygonError(f"polygon {p} is empty")
            sx = sum(v[0] for v in poly)
            sy = sum(v[1] for v in poly)
            if _sign(sx, tol) != 0 or _sign(sy, tol) != 0:
                raise NonClosingPolygonError(f"polygon {p} does not close")
        seen = set()
        for p, poly in enumerate(self.polygons):
            for e in range(len(poly)):
                key = (p, e)
                if key not in self.pairing:
                    raise UnmatchedEdgeError(f"edge {key} not paired")
                mate = self.pairing[key]
                if mate == key:
                    raise UnmatchedEdgeError(f"edge {key} glued to itself")
                if self.pairing[mate] != key:
                    raise UnmatchedEdgeError(f"pairing not involutive at {key}")
                u = poly[e]
                w = self.polygons[mate[0]][mate[1]]
                if _sign(u[0] + w[0], tol) != 0 or _sign(u[1] + w[1], tol) != 0:
                    raise NonTranslationPairingError(
                        f"edges {key} and {mate} are not opposite vectors"
                    )
                seen.add(key)
        for key in self.pairing:
            if key not in seen:
                raise UnmatchedEdgeError(f"pairing names unknown edge {key}")

    def edge_vector(self, p, e):
        return self.polygons[p][e]

    def vertices(self, p):
        """Vertex positions of polygon p, starting at the origin."""
        pts = [(0 * self.polygons[p][0][0], 0 * self.polygons[p][0][1])]
        x, y = pts[0]
        for (dx, dy) in self.polygons[p][:-1]:
            x, y = x + dx, y + dy
            pts.append((x, y))
        return pts

    def n_edges(self):
        return sum(len(poly) for poly in self.polygons) // 2


EAST = (1, 0)


class TranslationSurface:
    """A validated translation surface with derived topological data.

    Attributes: gluing, vertex_classes (lists of corners (p, i)),
    cone_orders (d_j + 1 per class), signature, genus, area.
    """

    def __init__(self, gluing: PolygonGluing):
        self.gluing = gluing
        self._classify_vertices()
        self._compute_area()
        self._compute_topology()

    # corner (p, i) sits at vertex i of polygon p, between incoming edge
    # i-1 and outgoing edge i

    def _corner_sector(self, corner):
        p, i = corner
        poly = self.gluing.polygons[p]
        k = len(poly)
        w_in = poly[(i - 1) % k]
        u = poly[i]
        return u, (-w_in[0], -w_in[1])

    def _next_corner(self, corner):
        """Next corner counterclockwise around the same surface point."""
        p, i = corner
        k = len(self.gluing.polygons[p])
        p2, j = self.gluing.pairing[(p, (i - 1) % k)]
        return (p2, j)

    def _classify_vertices(self):
        all_corners = [
            (p, i)
            for p, poly in enumerate(self.gluing.polygons)
            for i in range(len(poly))
        ]
        unseen = set(all_corners)
        classes = []
        while unseen:
            start = min(unseen)
            cyc = [start]
            unseen.discard(start)
            cur = self._next_corner(start)
            guard = 0
            while cur != start:
                cyc.append(cur)
                unseen.discard(cur)
                cur = self._next_corner(cur)
                guard += 1
                if guard > len(all_corners) + 1:
                    raise SurfaceError("corner walk does not close")
            classes.append(cyc)
        self.vertex_classes = classes
        tol = self.gluing.tol
        orders = []
        for cyc in classes:
            count = 0
            turn = 0.0
            for c in cyc:
                start_dir, end_dir = self._corner_sector(c)
                if sector_contains(start_dir, end_dir, EAST, tol):
                    count += 1
                if self.gluing.is_float:
                    a = math.atan2(end_dir[1], end_dir[0]) - math.atan2(
                        start_dir[1], start_dir[0]
                    )
                    turn += a % (2 * math.pi)
            if count == 0:
                raise ConeAngleError("vertex class with vanishing cone angle")
            if self.gluing.is_float:
                if abs(turn / (2 * math.pi) - count) > ANGLE_TOL * count + 1e-7:
                    raise ConeAngleError(
                        f"cone angle {turn:.12f} is not a multiple of 2*pi"
                    )
            orders.append(count)
        self.cone_orders = orders

    def _compute_area(self):
        tol = self.gluing.tol
        total = None
        for p in range(len(self.gluing.polygons)):
            pts = self.gluing.vertices(p)
            poly = self.gluing.polygons[p]
            a = None
            x, y = pts[0]
            for k in range(len(poly)):
                x2, y2 = x + poly[k][0], y + poly[k][1]
                term = x * y2 - x2 * y
                a = term if a is None else a + term
                x, y = x2, y2
            if _sign(a, tol) <= 0:
                raise NonPositiveAreaError(
                    f"polygon {p} is not positively oriented or degenerate"
                )
            half = Fraction(1, 2) if not self.gluing.is_float else 0.5
            a = half * a
            total = a if total is None else total + a
        self.area = total

    def _compute_topology(self):
        v = len(self.vertex_classes)
        e = self.gluing.n_edges()
        f = len(self.gluing.polygons)
        chi = v - e + f
        if chi % 2:
            raise SurfaceError("odd Euler characteristic")
        self.genus = (2 - chi) // 2
        degrees = [c - 1 for c in self.cone_orders]
        if sum(degrees) != 2 * self.genus - 2:
            raise ConeAngleError(
                "cone angles inconsistent with Euler characteristic"
            )
        self.signature = StratumSignature(degrees)

    # -- operations ------------------------------------------------------

    def apply_gl2(self, m: Matrix2):
        det = m.det()
        if _sign(det, self.gluing.tol) <= 0:
            raise NonPositiveDeterminantError(f"det = {det}")
        polys = [[m.apply(v) for v in poly] for poly in self.gluing.polygons]
        pairing = [
            (k, v) for k, v in self.gluing.pairing.items() if k < v
        ]
        return TranslationSurface(PolygonGluing(polys, pairing))

    def field(self):
        """Common quadratic-field descriptor of all coordinates (exact only)."""
        if self.gluing.is_float:
            raise SurfaceError("float surface has no exact field")
        return field_join(
            [c for poly in self.gluing.polygons for v in poly for c in v
             if isinstance(c, QuadraticNumber)] or [Fraction(0)]
        )

    def to_json(self):
        kind = "float" if self.gluing.is_float else (
            "quadratic"
            if any(isinstance(c, QuadraticNumber) and not c.is_rational
                   for poly in self.gluing.polygons for v in poly for c in v)
            else "rational"
        )
        polys = [
            [[scalar_to_json(v[0]), scalar_to_json(v[1])] for v in poly]
            for poly in self.gluing.polygons
        ]
        pairing = sorted(
            [k[0], k[1], v[0], v[1]]
            for k, v in self.gluing.pairing.items()
            if k < v
        )
        return {"scalars": kind, "polygons": polys, "pairing": pairing}

    @staticmethod
    def from_json(obj):
        polys = [
            [(scalar_from_json(v[0]), scalar_from_json(v[1])) for v in poly]
            for poly in obj["polygons"]
        ]
        if obj.get("scalars") == "float":
            polys = [[(float(x), float(y)) for (x, y) in poly] for poly in polys]
        pairing = [tuple(row) for row in obj["pairing"]]
        return TranslationSurface(PolygonGluing(polys, pairing))

    def __repr__(self):
        return (f"TranslationSurface(genus={self.genus}, "
                f"signature={self.signature}, area={self.area})")


def build_surface(gluing) -> TranslationSurface:
    if not isinstance(gluing, PolygonGluing):
        gluing = PolygonGluing(*gluing)
    return TranslationSurface(gluing)


def area_from_periods(a_periods, b_periods):
    """Area from a symplectic basis of absolute periods (complex as (re, im))."""
    if len(a_periods) != len(b_periods):
        raise ValueError("need matching A and B period lists")
    total = None
    for a, b in zip(a_periods, b_periods):
        term = a[0] * b[1] - a[1] * b[0]
        total = term if total is None else total + term
    if total is None:
        raise ValueError("empty period lists")
    if _sign(total, 1e-12 if isinstance(total, float) else 0) <= 0:
        raise NonPositiveAreaError(f"period area {total} is not positive")
    return total


# -- stock examples ----------------------------------------------------


def square_torus(exact=True):
    one = Fraction(1) if exact else 1.0
    poly = [(one, 0 * one), (0 * one, one), (-one, 0 * one), (0 * one, -one)]
    pairing = [((0, 0), (0, 2)), ((0, 1), (0, 3))]
    return TranslationSurface(PolygonGluing([poly], pairing))


def regular_octagon(exact=True):
    """Regular octagon with opposite sides identified; a surface in H(2)."""
    if exact:
        one = QuadraticNumber(1, 0, 2)
        s = QuadraticNumber(0, Fraction(1, 2), 2)   # sqrt(2)/2
        zero = QuadraticNumber(0, 0, 2)
    else:
        one, s, zero = 1.0, math.sqrt(2) / 2, 0.0
    vecs = [
        (one, zero), (s, s), (zero, one), (-s, s),
        (-one, zero), (-s, -s), (zero, -one), (s, -s),
    ]
    pairing = [((0, k), (0, k + 4)) for k in range(4)]
    return TranslationSurface(PolygonGluing([vecs], pairing))


def regular_ngon(n, exact=False):
    """Regular 2k-gon with opposite sides identified (float coordinates)."""
    if n % 2:
        raise ValueError("need an even number of sides")
    vecs = []
    for k in range(n):
        ang = 2 * math.pi * k / n + math.pi / 2 + math.pi / n
        vecs.append((math.cos(ang), math.sin(ang)))
    pairing = [((0, k), (0, k + n // 2)) for k in range(n // 2)]
    return TranslationSurface(PolygonGluing([vecs], pairing))
