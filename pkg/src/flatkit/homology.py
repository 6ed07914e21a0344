"""Integral homology of the glued cell complex of a translation surface.

One 2-cell per polygon, one 1-cell per glued edge pair, one 0-cell per
vertex class.  H_1 = ker d1 / im d2 is computed with integer Smith
reduction; cycles are fed in as signed crossing words over the glued-edge
generators and come out as integer coordinate vectors of length 2g.
"""

from __future__ import annotations

from fractions import Fraction


def smith_normal_form(a):
    """(d, u, v) with u*a*v = d diagonal; u, v unimodular (lists of lists)."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # find a pivot
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < best):
                    best = abs(d[i][j])
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        progress = True
        while progress:
            progress = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, -q)
                    if d[i][t]:
                        swap_rows(t, i)
                        progress = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, -q)
                    if d[t][j]:
                        swap_cols(t, j)
                        progress = True
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def _mat_vec(a, x):
    return [sum(r[j] * x[j] for j in range(len(x))) for r in a]


def _solve_exact(a, b):
    """Solve a x = b over Q for a with full column rank; None if unsolvable."""
    m, n = len(a), len(a[0])
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])]
           for i in range(m)]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    x = [Fraction(0)] * n
    for row, c in enumerate(pivots):
        x[c] = aug[row][n]
    # verify (catches inconsistent systems)
    for i in range(m):
        if sum(Fraction(a[i][j]) * x[j] for j in range(n)) != Fraction(b[i]):
            return None
    return x


class SurfaceHomology:
    """H_1(S; Z) coordinates for cycles given as glued-edge crossing words."""

    def __init__(self, geometry):
        g = geometry
        ts = g.ts
        n_e = g.n_gens
        n_v = g.n_classes
        polys = ts.gluing.polygons
        class_of = {}
        for cid, cyc in enumerate(ts.vertex_classes):
            for pc in cyc:
                class_of[pc] = cid
        # d1: vertex-class boundary of each edge generator
        d1 = [[0] * n_e for _ in range(n_v)]
        for gid, (p, e) in enumerate(g.edge_gens):
            k = len(polys[p])
            tail = class_of[(p, e)]
            head = class_of[(p, (e + 1) % k)]
            d1[head][gid] += 1
            d1[tail][gid] -= 1
        # d2: boundary word of each polygon
        pairing = ts.gluing.pairing
        gen_of = {}
        for gid, (p, e) in enumerate(g.edge_gens):
            gen_of[(p, e)] = (gid, 1)
            gen_of[pairing[(p, e)]] = (gid, -1)
        d2 = [[0] * len(polys) for _ in range(n_e)]
        for p, poly in enumerate(polys):
            for e in range(len(poly)):
                gid, s = gen_of[(p, e)]
                d2[gid][p] += s
        # kernel of d1 (saturated integer basis via SNF)
        dmat, _, v = smith_normal_form(d1)
        rank = sum(1 for i in range(min(len(dmat), n_e)) if i < len(dmat) and dmat[i][i] != 0)
        kernel = []
        for j in range(rank, n_e):
            kernel.append([v[i][j] for i in range(n_e)])
        self.kernel = kernel                       # columns, as rows here
        k = len(kernel)
        # image of d2 in kernel coordinates
        kt = [[kernel[c][r] for c in range(k)] for r in range(n_e)]
        w = []
        for p in range(len(polys)):
            col = [d2[r][p] for r in range(n_e)]
            x = _solve_exact(kt, col)
            if x is None:
                raise ValueError("face boundary not a cycle (bug)")
            w.append([int(q) for q in x])
        wmat = [[w[p][i] for p in range(len(polys))] for i in range(k)]
        dq, uq, _ = smith_normal_form(wmat)
        rank2 = sum(1 for i in range(min(len(dq), len(dq[0]) if dq else 0))
                    if dq[i][i] != 0)
        for i in range(rank2):
            if abs(dq[i][i]) != 1:
                raise ValueError("torsion in H1 (bug)")
        self._uq = uq
        self._rank2 = rank2
        self._kt = kt
        self.rank = k - rank2                      # = 2g

    def class_of_word(self, word):
        """H_1 coordinates (length 2g) of a closed crossing word."""
        vec = [0] * len(self._kt)
        for gid, s in word:
            vec[gid] += s
        x = _solve_exact(self._kt, vec)
        if x is None:
            raise ValueError("word is not a cycle")
        x = [int(q) for q in x]
        y = _mat_vec(self._uq, x)
        return tuple(y[self._rank2:])
