"""Square-tiled surfaces (origamis) as permutation pairs.

A surface tiled by n unit squares is encoded by permutations pi_r and
pi_u of {0..n-1} (right and up neighbors), taken up to simultaneous
conjugacy; it is connected when the pair acts transitively.  The
commutator's nontrivial cycles have lengths d_j + 1 and read off the
stratum; fixed points are regular squares.

Censuses are enumerated over cycle types of pi_r; canonical forms come
from breadth-first relabelings.  Stratum volumes are computed from the
lattice-point counts nu(N) = #surfaces with at most N squares via
Vol = 2 * dim * lim nu(N)/N^dim, with nu evaluated by exact arithmetic
sums over cylinder decompositions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

from .surface import StratumSignature


class DisconnectedError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


def _compose(a, b):
    """(a o b)(x) = a(b(x))"""
    return tuple(a[b[x]] for x in range(len(a)))


def _inverse(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def _cycles(p):
    n = len(p)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        c = [s]
        seen[s] = True
        x = p[s]
        while x != s:
            c.append(x)
            seen[x] = True
            x = p[x]
        out.append(c)
    return out


class SquareTiledSurface:
    """Validated origami; stores the canonical form of (pi_r, pi_u)."""

    def __init__(self, pi_r, pi_u, one_based=False):
        pi_r = tuple(pi_r)
        pi_u = tuple(pi_u)
        if one_based:
            pi_r = tuple(x - 1 for x in pi_r)
            pi_u = tuple(x - 1 for x in pi_u)
        n = len(pi_r)
        if sorted(pi_r) != list(range(n)) or sorted(pi_u) != list(range(n)):
            raise ValueError("not permutations")
        self.n = n
        self.pi_r = pi_r
        self.pi_u = pi_u
        if not self._transitive():
            raise DisconnectedError("the pair does not act transitively")
        self.canonical = canonical_form(pi_r, pi_u)

    def _transitive(self):
        n = self.n
        seen = {0}
        stack = [0]
        inv_r, inv_u = _inverse(self.pi_r), _inverse(self.pi_u)
        while stack:
            x = stack.pop()
            for p in (self.pi_r, self.pi_u, inv_r, inv_u):
                y = p[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def commutator(self):
        """pi_r pi_u pi_r^{-1} pi_u^{-1} (composition right-to-left)."""
        return _compose(_compose(self.pi_r, self.pi_u),
                        _compose(_inverse(self.pi_r), _inverse(self.pi_u)))

    def signature(self):
        degs = sorted((len(c) - 1 for c in _cycles(self.commutator())
                       if len(c) > 1), reverse=True)
        if not degs:
            degs = [0]
        return StratumSignature(degs)

    def genus(self):
        return self.signature().genus

    def automorphism_order(self):
        """Order of the simultaneous-conjugacy stabilizer of the pair."""
        base = _bfs_labeling(self.pi_r, self.pi_u, 0)
        return sum(
            1 for s in range(self.n)
            if _bfs_labeling(self.pi_r, self.pi_u, s) == base
        )

    def is_primitive(self):
        """Not tileable by p x q blocks: translation periods span Z^2.

        Walks the square adjacency assigning Z^2 coordinates; closing
        discrepancies generate the period lattice, which must be all of
        Z^2 for a primitive (reduced) origami.
        """
        n = self.n
        coord = {0: (0, 0)}
        stack = [0]
        periods = []
        inv_r, inv_u = _inverse(self.pi_r), _inverse(self.pi_u)
        moves = [(self.pi_r, (1, 0)), (self.pi_u, (0, 1)),
                 (inv_r, (-1, 0)), (inv_u, (0, -1))]
        while stack:
            x = stack.pop()
            cx, cy = coord[x]
            for p, (dx, dy) in moves:
                y = p[x]
                c2 = (cx + dx, cy + dy)
                if y in coord:
                    px, py = coord[y][0] - c2[0], coord[y][1] - c2[1]
                    if (px, py) != (0, 0):
                        periods.append((px, py))
                else:
                    coord[y] = c2
                    stack.append(y)
        return _lattice_from(periods) == 1

    def cylinder_decomposition(self):
        """Horizontal cylinders as (width, height, twist) triples.

        Rows are cycles of pi_r; a cylinder is a maximal stack of rows
        with no singular corner between consecutive ones.  The twist is
        measured by carrying the cylinder's floor marker through pi_u^h
        and comparing with the marker of the next floor, modulo the width.
        """
        r, u = self.pi_r, self.pi_u
        ru = _compose(u, r)            # up after right
        ur = _compose(r, u)            # right after up
        singular_tr = [ru[s] != ur[s] for s in range(self.n)]
        if not any(singular_tr):
            # torus: cut along the leaf through the marked corner of square 0
            singular_tr[0] = True

        def top_singular(row):
            return any(singular_tr[s] for s in row)

        rows = {min(c): c for c in _cycles(r)}
        row_of = {}
        for key, c in rows.items():
            for s in c:
                row_of[s] = key

        def row_above(row):
            return row_of[u[row[0]]]

        def bottom_singular(row_key):
            below = _inverse(u)[rows[row_key][0]]
            return top_singular(rows[row_of[below]])

        floors = [k for k in rows if bottom_singular(k)]
        out = []
        marker = {}
        for k in floors:
            row = rows[k]
            # floor marker: square whose lower-left corner is singular
            inv_r, inv_u = _inverse(r), _inverse(u)
            cands = [s for s in row if singular_tr[inv_u[inv_r[s]]]]
            marker[k] = min(cands)
        for k in floors:
            row = rows[k]
            w = len(row)
            h = 1
            cur = k
            while not top_singular(rows[cur]):
                cur = row_above(rows[cur])
                h += 1
            s = marker[k]
            for _ in range(h):
                s = u[s]
            top_floor = row_of[s]    # the floor of the next cylinder up
            # twist: position of the carried marker relative to the next floor marker
            t = 0
            x = marker[top_floor]
            while x != s:
                x = r[x]
                t += 1
                if t > self.n:
                    raise RuntimeError("twist walk failed")
            out.append((w, h, t % w))
        out.sort()
        return out

    def surface(self):
        """Geometric TranslationSurface built from unit squares."""
        from .surface import PolygonGluing, TranslationSurface

        one = Fraction(1)
        polys = []
        pairing = []
        for s in range(self.n):
            polys.append([(one, 0 * one), (0 * one, one),
                          (-one, 0 * one), (0 * one, -one)])
        for s in range(self.n):
            pairing.append(((s, 0), (self.pi_u[s], 2)))   # top of s = bottom of u(s)
            pairing.append(((s, 1), (self.pi_r[s], 3)))   # right of s = left of r(s)
        # edge 0 is the bottom side (left-to-right), 1 right, 2 top, 3 left
        return TranslationSurface(PolygonGluing(polys, pairing))

    def __eq__(self, o):
        return isinstance(o, SquareTiledSurface) and self.canonical == o.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"SquareTiledSurface(n={self.n}, r={self.pi_r}, u={self.pi_u})"


def _lattice_from(vectors):
    """Index in Z^2 of the lattice generated by `vectors` (0 if degenerate)."""
    basis = []
    for v in vectors:
        basis.append(v)
        basis = _hnf2(basis)
    if len(basis) < 2:
        return 0
    return abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0])


def _hnf2(vectors):
    """Reduce integer 2-vectors to at most two Hermite generators."""
    vs = [v for v in vectors if v != (0, 0)]
    if not vs:
        return []
    # bring to the form [(a, b), (0, d)]
    while True:
        vs.sort(key=lambda v: (v[0] == 0, abs(v[0]) if v[0] else abs(v[1])))
        head = vs[0]
        if head[0] == 0:
            break
        changed = False
        rest = []
        for v in vs[1:]:
            if v[0] != 0:
                q = v[0] // head[0]
                w = (v[0] - q * head[0], v[1] - q * head[1])
                changed = changed or w[0] != 0
                if w != (0, 0):
                    rest.append(w)
            else:
                rest.append(v)
        vs = [head] + rest
        if not changed:
            break
    head = vs[0] if vs[0][0] != 0 else None
    tail = [v for v in vs if v[0] == 0 and v[1] != 0]
    if tail:
        g = 0
        for v in tail:
            g = math.gcd(g, abs(v[1]))
        tail = [(0, g)]
    out = ([head] if head else []) + tail
    return out


def _bfs_labeling(pi_r, pi_u, start):
    """Relabel squares by BFS discovery order from `start`; returns the pair."""
    n = len(pi_r)
    inv_r, inv_u = _inverse(pi_r), _inverse(pi_u)
    label = {start: 0}
    order = [start]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for p in (pi_r, pi_u, inv_r, inv_u):
            y = p[x]
            if y not in label:
                label[y] = len(order)
                order.append(y)
    new_r = tuple(label[pi_r[order[i]]] for i in range(n))
    new_u = tuple(label[pi_u[order[i]]] for i in range(n))
    return (new_r, new_u)


def canonical_form(pi_r, pi_u):
    """Lexicographically least BFS relabeling over all start squares."""
    return min(_bfs_labeling(pi_r, pi_u, s) for s in range(len(pi_r)))


def from_permutations(pi_r, pi_u, one_based=False):
    return SquareTiledSurface(pi_r, pi_u, one_based=one_based)


def _partitions(n, cap=None):
    cap = cap or n
    if n == 0:
        yield ()
        return
    for head in range(min(n, cap), 0, -1):
        for rest in _partitions(n - head, head):
            yield (head,) + rest


def _canonical_cycle_perm(part):
    """Permutation with cycles (0..k1-1)(k1..k1+k2-1)..."""
    p = []
    base = 0
    for k in part:
        p.extend(list(range(base + 1, base + k)) + [base])
        base += k
    return tuple(p)


def enumerate_surfaces(n, stratum=None):
    """All connected n-square origamis up to simultaneous conjugacy.

    `stratum` filters by signature (a StratumSignature or degree tuple).
    pi_r runs over cycle-type representatives, pi_u over all of S_n.
    """
    if stratum is not None and not isinstance(stratum, StratumSignature):
        stratum = StratumSignature(stratum)
    found = {}
    for part in _partitions(n):
        pi_r = _canonical_cycle_perm(part)
        for pi_u in permutations(range(n)):
            try:
                s = SquareTiledSurface(pi_r, pi_u)
            except DisconnectedError:
                continue
            if stratum is not None and s.signature() != stratum:
                continue
            found.setdefault(s.canonical, s)
    return list(found.values())


# -- SL(2, Z) action -----------------------------------------------------


def sl2z_generators(surf: SquareTiledSurface):
    """Images under the horizontal shear T and the quarter rotation S."""
    r, u = surf.pi_r, surf.pi_u
    shear = SquareTiledSurface(r, _compose(u, _inverse(r)))
    rot = SquareTiledSurface(_inverse(u), r)
    return shear, rot


def sl2z_orbit(surf: SquareTiledSurface):
    """Orbit of the origami under SL(2, Z), as canonical forms."""
    seen = {surf.canonical: surf}
    stack = [surf]
    while stack:
        s = stack.pop()
        for t in sl2z_generators(s):
            if t.canonical not in seen:
                seen[t.canonical] = t
                stack.append(t)
    return list(seen.values())


def teichmuller_disc_degree(surf: SquareTiledSurface):
    """Degree of the Teichmuller disc over the modular curve: orbit size."""
    return len(sl2z_orbit(surf))


# -- volumes -------------------------------------------------------------


def lattice_count_h0(N):
    """Number of square-tiled tori with at most N squares: sum of sigma(n)."""
    total = 0
    for h in range(1, N + 1):
        wmax = N // h
        total += wmax * (wmax + 1) // 2
    return total


def lattice_count_h2_onecyl(N):
    """One-cylinder H(2) origamis with at most N squares (exact)."""
    total = 0
    for h in range(1, N // 3 + 1):
        for w in range(3, N // h + 1):
            total += (w - 1) * (w - 2) // 2 * w // 3
    return total


def lattice_count_h2_twocyl(N):
    """Two-cylinder H(2) origamis with at most N squares (exact)."""
    total = 0
    for h1 in range(1, N + 1):
        for h2 in range(1, N + 1):
            if h1 + h2 > N:
                break
            for p1 in range(1, N + 1):
                # p1 (h1 + h2) + p2 h2 <= N  with p2 >= 1
                rem = N - p1 * (h1 + h2)
                if rem < h2:
                    break
                pmax = rem // h2
                # sum over p2 of p1 * (p1 + p2)
                total += p1 * p1 * pmax + p1 * (pmax * (pmax + 1) // 2)
    return total


def lattice_count_h2(N):
    return lattice_count_h2_onecyl(N) + lattice_count_h2_twocyl(N)


def lattice_count_h11(N):
    from .diagrams import h11_lattice_count

    return h11_lattice_count(N)


def volume_estimate(stratum, n_max):
    """Masur-Veech volume of H_1(stratum) from lattice-point asymptotics.

    Counts nu(N) = #integer points with area <= N exactly, fits the two
    leading terms of nu(N) = c N^dim (1 + O(1/N)) at N = n_max and
    n_max/2, and returns Vol = 2 * dim * c.
    """
    if not isinstance(stratum, StratumSignature):
        stratum = StratumSignature(stratum)
    key = stratum.degrees
    if key == (0,):
        counter, dim = lattice_count_h0, 2
    elif key == (2,):
        counter, dim = lattice_count_h2, 4
    elif key == (1, 1):
        counter, dim = lattice_count_h11, 5
    else:
        raise InsufficientDataError(f"no counting scheme for {stratum}")
    if n_max < 50:
        raise InsufficientDataError("need n_max >= 50")
    n1, n2 = n_max, n_max // 2
    v1, v2 = counter(n1), counter(n2)
    # nu(N) = c N^d + c' N^(d-1): solve for c
    a11, a12 = n1 ** dim, n1 ** (dim - 1)
    a21, a22 = n2 ** dim, n2 ** (dim - 1)
    det = a11 * a22 - a12 * a21
    c = Fraction(v1 * a22 - v2 * a12, det)
    return 2 * dim * float(c)


def kernel_leaf_counts(n):
    """(conical, special) point counts of the compact kernel-foliation leaf.

    conical = (3/8)(N-2)N^2 prod(1 - 1/p^2), the genus-two integer points
    with a double zero on the leaf; special = (1/24)(5N+6)N^2 prod(1-1/p^2),
    the degenerate (torus-like) points.
    """
    if n < 3:
        raise ValueError("need N >= 3")
    prod = Fraction(1)
    m = n
    p = 2
    seen = set()
    while p * p <= m:
        if m % p == 0:
            seen.add(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        seen.add(m)
    for p in seen:
        prod *= 1 - Fraction(1, p * p)
    conical = Fraction(3, 8) * (n - 2) * n * n * prod
    special = Fraction(1, 24) * (5 * n + 6) * n * n * prod
    if conical.denominator != 1 or special.denominator != 1:
        raise ArithmeticError("kernel leaf counts must be integers")
    return int(conical), int(special)
