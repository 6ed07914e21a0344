"""Counting machinery: first-return maps, saddle connections, cylinders,
asymptotic cycles, deviation exponents and Siegel-Veech statistics.

First-return maps of the vertical flow to a horizontal segment X produce
the interval exchange together with its first-return cycles in H_1
coordinates; the counting functions N_sc and N_cg run the exhaustive
disc search of the geometry engine; ensembles of random unit-area
surfaces (box-sampled suspension data over a fixed permutation, an
approximation of the natural measure on the stratum) feed the
Siegel-Veech and cylinder-area statistics.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import iet as _iet
from .geometry import BudgetExceededError, FlatGeometry
from .homology import SurfaceHomology
from .renorm import suspension_surface


class PeriodicDirectionError(RuntimeError):
    pass


class SegmentError(ValueError):
    """Convention on the transversal segment cannot be satisfied."""


class FirstReturnSystem:
    """IET of the vertical flow over a horizontal segment, with cycles."""

    def __init__(self, iet, cycles, periods, homology, geometry, segment):
        self.iet = iet
        self.cycles = cycles              # H1 coordinate tuples, one per interval
        self.periods = periods            # holonomy of each first-return loop
        self.homology = homology
        self.geometry = geometry
        self.segment = segment

    @property
    def perm(self):
        return self.iet.perm

    @property
    def lengths(self):
        return self.iet.lengths


def first_return_map(surface, poly=0, start=None, length=None,
                     max_steps=200000):
    """First-return system of the vertical flow to a horizontal segment X.

    X runs rightward from `start` (default: the polygon vertex at the
    origin, a cone point) inside polygon `poly`; `length` defaults to the
    full horizontal extent available.  The segment must satisfy the
    minimal-cuts convention: exactly n = 2g + m - 1 subintervals.
    """
    geom = FlatGeometry(surface)
    hom = SurfaceHomology(geom)
    pts = surface.gluing.vertices(poly)
    if start is None:
        start = pts[0]
    x0, y0 = start
    if length is None:
        xs = [p[0] for p in pts if p[1] == y0 and p[0] > x0]
        if not xs:
            raise SegmentError("cannot infer a segment length")
        length = min(xs) - x0
    a_pt = (x0, y0)
    b_pt = (x0 + length, y0)
    down, up = (0, -1), (0, 1)

    # cut points: first hits of X by downward separatrices from cone points
    cuts = set()
    for cid in range(geom.n_classes):
        for corner in geom.germs(down, cid):
            hit = _germ_to_segment(geom, corner, down, poly, a_pt, b_pt,
                                   max_steps)
            if hit is not None:
                s, _, _ = hit
                if 0 < s < 1:
                    cuts.add(s)
    cuts = sorted(cuts)
    n_exp = 2 * surface.genus + len(surface.signature.degrees) - 1
    if len(cuts) != n_exp - 1:
        raise SegmentError(
            f"segment yields {len(cuts) + 1} intervals, expected {n_exp}")
    bounds = [0] + cuts + [1]
    lengths = [(bounds[i + 1] - bounds[i]) * length for i in range(n_exp)]

    # first return of each subinterval midpoint
    images = []
    cycles = []
    periods = []
    seg_vec = (length, 0 * length)
    for i in range(n_exp):
        mid = (bounds[i] + bounds[i + 1]) / 2
        p0 = (x0 + mid * length, y0)
        t0 = geom.locate(poly, p0)
        s, rise, word, _ = geom.flow_to_segment(
            t0, p0, up, poly, a_pt, b_pt, max_steps)
        images.append((i, mid, s))
        cycles.append(hom.class_of_word(word))
        back = ((mid - s) * length, 0 * length)
        periods.append((rise[0] + back[0], rise[1] + back[1]))

    # assemble the permutation from the image order
    order = sorted(range(n_exp), key=lambda i: images[i][2])
    perm = [0] * n_exp
    for slot, i in enumerate(order):
        perm[i] = slot + 1
    the_iet = _iet.IET(lengths, tuple(perm))
    # consistency: image offsets must match the exchange combinatorics
    for i in range(n_exp):
        mid = images[i][1] * length
        diff = (mid + the_iet.offsets[i]) - images[i][2] * length
        if isinstance(diff, float):
            if abs(diff) > 1e-7 * max(1.0, abs(float(length))):
                raise SegmentError("return map is not the expected exchange")
        elif diff != 0:
            raise SegmentError("return map is not the expected exchange")
    return FirstReturnSystem(the_iet, cycles, periods, hom, geom,
                             (poly, a_pt, b_pt))


def _germ_to_segment(geom, corner, direction, poly, a_pt, b_pt, max_steps):
    """First interior crossing of segment (a, b) by a germ's separatrix."""
    t, c = corner
    pos = geom.corner_point(corner)
    try:
        s, rise, word, _ = geom.flow_to_segment(
            t, pos, direction, poly, a_pt, b_pt, max_steps,
            interior_only=True)
        return s, rise, word
    except (ValueError, BudgetExceededError):
        return None


# -- asymptotic cycles and deviation -----------------------------------


class AsymptoticCycleReport:
    def __init__(self, cycle, empirical, distances, exponent, band):
        self.cycle = cycle
        self.empirical = empirical
        self.distances = distances
        self.exponent = exponent
        self.band = band


def asymptotic_cycle(frs: FirstReturnSystem):
    """Length-weighted combination of first-return cycles, normalized."""
    lam = [float(x) for x in frs.lengths]
    total = sum(lam)
    dim = len(frs.cycles[0])
    c = [0.0] * dim
    for li, cy in zip(lam, frs.cycles):
        for j in range(dim):
            c[j] += li * cy[j]
    return [x / total for x in c]


def orbit_cycle_sums(frs: FirstReturnSystem, n_returns, x0=None, seed=0):
    """Partial sums c(x, N) of first-return cycles along an orbit.

    Returns (checkpoints, sums) with geometrically spaced checkpoints.
    """
    lam = [float(v) for v in frs.lengths]
    total = sum(lam)
    tops = [0.0]
    for v in lam[:-1]:
        tops.append(tops[-1] + v)
    offsets = [float(v) for v in frs.iet.offsets]
    cycles = [np.array(cy, dtype=np.int64) for cy in frs.cycles]
    rng = random.Random(seed)
    x = rng.uniform(0, total) if x0 is None else float(x0)
    dim = len(cycles[0])
    acc = np.zeros(dim, dtype=np.int64)
    checkpoints = []
    sums = []
    mark = 8
    n = len(lam)
    for k in range(1, n_returns + 1):
        i = 0
        for j in range(n - 1, -1, -1):
            if x >= tops[j]:
                i = j
                break
        acc += cycles[i]
        x += offsets[i]
        if x >= total:
            x -= total
        elif x < 0:
            x += total
        if k >= mark:
            checkpoints.append(k)
            sums.append(acc.copy())
            mark = max(mark + 1, int(mark * 1.25))
    return checkpoints, sums


def deviation_exponent(frs: FirstReturnSystem, n_returns=200000, seed=0):
    """Fitted second deviation exponent of the orbit cycles.

    Least-squares slope of log dist(c(x, N), <c>) against log N over the
    top decade of checkpoints; detects periodic directions.
    """
    ks, sums = orbit_cycle_sums(frs, n_returns, seed=seed)
    c = np.array(asymptotic_cycle(frs))
    cn = c / np.linalg.norm(c)
    dists = []
    for s in sums:
        v = s.astype(float)
        d = v - (v @ cn) * cn
        dists.append(np.linalg.norm(d))
    dists = np.array(dists)
    ks = np.array(ks, dtype=float)
    if np.max(dists) < 1e-9:
        raise PeriodicDirectionError("orbit cycles stay on a line")
    keep = ks >= ks[-1] / 10
    x = np.log(ks[keep])
    y = np.log(np.maximum(dists[keep], 1e-12))
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    band = 2.0 * resid.std() / max(1.0, math.sqrt(len(x))) / max(x.std(), 1e-9)
    return AsymptoticCycleReport(c.tolist(), None, dists.tolist(), a, band)


# -- disc counting -------------------------------------------------------


def saddle_connections_up_to(surface, L, through_marked=True,
                             max_nodes=20_000_000, geometry=None):
    """Oriented saddle connections of length <= L on the surface."""
    geom = geometry or FlatGeometry(surface)
    return geom.saddle_connections(L, max_nodes=max_nodes,
                                   through_marked=through_marked)


def cylinders_up_to(surface, L, geometry=None, max_steps=100000):
    """Maximal cylinders of circumference <= L, each counted once.

    Directions come from the saddle connections of length <= L; cylinders
    found for a direction v are the closed chains whose total holonomy has
    length <= L.  Directions are normalized to the upper half plane, so a
    cylinder is reported once.
    """
    geom = geometry or FlatGeometry(surface)
    scs = geom.saddle_connections(L, through_marked=False)
    dirs = {}
    for s in scs:
        h = s.holonomy
        hx, hy = float(h[0]), float(h[1])
        if hy < 0 or (hy == 0 and hx < 0):
            h = (-h[0], -h[1])
            hx, hy = -hx, -hy
        ang = round(math.atan2(hy, hx), 12)
        dirs.setdefault(ang, h)
    out = []
    L2 = float(L) * float(L)
    for ang, h in sorted(dirs.items()):
        try:
            chains, sc_by_germ, failures = geom.chains(h, L, max_steps)
        except (BudgetExceededError, ValueError):
            continue
        for chain in chains:
            wdot, n2 = geom.chain_width(chain, sc_by_germ, h)
            w2 = float(wdot) * float(wdot) / float(n2)
            if w2 <= L2 + 1e-12:
                out.append({
                    "direction": h,
                    "width": math.sqrt(w2),
                    "chain": chain,
                    "boundary": [sc_by_germ[g][0] for g in chain],
                })
    return out


# -- random surfaces and Siegel-Veech statistics --------------------------


H2_PERM = (4, 3, 2, 1)
H11_PERM = (5, 4, 3, 2, 1)


def random_surface(perm, rng, max_tries=500):
    """Random unit-area suspension surface over the permutation.

    Lengths and suspension heights are sampled uniformly in a box and
    accepted when the suspension polygon is embedded; the surface is then
    rescaled to unit area.  This box sampling is a practical approximation
    of the natural measure on the stratum, not an exact sampler.
    """
    n = len(perm)
    inv = _iet.perm_inverse(perm)
    for _ in range(max_tries):
        lam = [rng.uniform(0.1, 1.0) for _ in range(n)]
        tau = [rng.uniform(-1.0, 1.0) for _ in range(n)]
        tops = np.cumsum(tau[:-1])
        bots = np.cumsum([tau[inv[j] - 1] for j in range(n - 1)])
        if np.all(tops > 0) and np.all(bots < 0):
            surf = suspension_surface(lam, tau, perm)
            area = float(surf.area)
            s = 1.0 / math.sqrt(area)
            lam = [x * s for x in lam]
            tau = [x * s for x in tau]
            return suspension_surface(lam, tau, perm)
    raise RuntimeError("could not sample a suspension")


def _homologous_groups(geom, hom, cylinders):
    """Group parallel cylinders into families of homologous core curves."""
    keyed = {}
    for cyl in cylinders:
        # core class: sum of floor saddle connections as a crossing word
        chain = cyl["chain"]
        word = []
        direction = cyl["direction"]
        for germ in chain:
            _, _, _, w = geom.trace_germ(germ, direction, max_len2=None,
                                         max_steps=100000, collect_word=True)
            word.extend(w)
        cls = hom.class_of_word(word)
        key = (round(math.atan2(float(direction[1]), float(direction[0])), 12),
               round(cyl["width"], 9), cls)
        keyed.setdefault(key, []).append(cyl)
    return list(keyed.values())


def sv_constant_estimate(perm, n_samples, L, seed=0, split_families=True):
    """Ensemble estimate of Siegel-Veech cylinder constants.

    Samples random unit-area surfaces over `perm`, counts maximal
    cylinders of circumference <= L per surface, groups homologous
    parallel cylinders of equal width into families, and reports
    N_families(L) / (pi L^2) per family multiplicity.  The box sampler
    only approximates the natural measure, so estimates carry a modeling
    caveat of a few percent.
    """
    rng = random.Random(seed)
    per_mult = {}
    counts = []
    for k in range(n_samples):
        surf = random_surface(perm, rng)
        geom = FlatGeometry(surf)
        cyls = cylinders_up_to(surf, L, geometry=geom)
        counts.append(len(cyls))
        if split_families:
            hom = SurfaceHomology(geom)
            groups = _homologous_groups(geom, hom, cyls)
        else:
            groups = [[c] for c in cyls]
        for g in groups:
            per_mult.setdefault(len(g), []).append(1)
        per_mult.setdefault("_surfaces", []).append(1)
    area = math.pi * float(L) ** 2
    result = {}
    for mult, v in per_mult.items():
        if mult == "_surfaces":
            continue
        result[mult] = len(v) / n_samples / area
    mean_count = sum(counts) / len(counts)
    se = (np.std(counts, ddof=1) / math.sqrt(len(counts)) / area
          if len(counts) > 1 else 0.0)
    return {
        "constants": result,
        "total_constant": mean_count / area,
        "stderr": se,
        "mean_cylinders": mean_count,
        "samples": n_samples,
        "L": float(L),
    }


def cylinder_statistics(perm, n_samples, L, seed=0):
    """Empirical distribution of cylinder areas across an ensemble.

    Returns (areas, ks_distance, density) where density is the predicted
    (2g-3+m)(1-x)^(2g-4+m) law for the stratum of `perm`.
    """
    rng = random.Random(seed)
    g = _iet.genus_of_permutation(perm)
    m = len(perm) + 1 - 2 * g
    areas = []
    for k in range(n_samples):
        surf = random_surface(perm, rng)
        geom = FlatGeometry(surf)
        try:
            scs = geom.saddle_connections(L, through_marked=False)
        except BudgetExceededError:
            continue
        dirs = {}
        for s in scs:
            h = s.holonomy
            if h[1] < 0 or (h[1] == 0 and h[0] < 0):
                h = (-h[0], -h[1])
            dirs.setdefault(round(math.atan2(h[1], h[0]), 12), h)
        for ang, h in dirs.items():
            try:
                recs = geom.cylinder_geometry(h, L, require_complete=False)
            except (BudgetExceededError, ValueError):
                continue
            for r in recs:
                a = float(r["width_dot"]) * float(r["height_dot"]) / float(r["norm2"])
                areas.append(a)   # unit-area surfaces: a is the area fraction
    areas = np.array(sorted(areas))
    k = 2 * g - 3 + m
    cdf = 1 - (1 - np.clip(areas, 0, 1)) ** (k + 1)
    emp = np.arange(1, len(areas) + 1) / len(areas)
    ks = float(np.max(np.abs(cdf - emp))) if len(areas) else 1.0
    return areas.tolist(), ks, (k + 1, k)
