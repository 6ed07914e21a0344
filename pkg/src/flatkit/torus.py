"""Genus-one laboratory: flat tori, the Gauss map, continued fractions,
cutting sequences across the Farey tessellation, and lattice counting.

The cutting sequence is computed geometrically by Farey mediant descent
(which triangle of the tessellation the vertical geodesic to x crosses,
and on which side it leaves the single vertex); the classical theorem
that the run lengths equal the continued-fraction digits is used as a
test oracle, never as the implementation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .numkit import QuadraticNumber


class OutOfDomainError(ValueError):
    pass


class DegenerateLatticeError(ValueError):
    pass


class RationalLandingError(ValueError):
    """The geodesic lands on a cusp of the tessellation."""


def _floor(x):
    if isinstance(x, QuadraticNumber):
        return x.__floor__()
    return math.floor(x)


def reduce_torus(v1, v2):
    """Normalize a lattice basis to the modulus x + iy, |x| <= 1/2, x^2+y^2 >= 1.

    Gauss lattice reduction followed by the complex ratio v2/v1; ties on
    the fundamental-domain boundary are broken toward x = +1/2.  Exact
    for exact scalars.
    """
    v1, v2 = tuple(v1), tuple(v2)

    def dot(a, b):
        return a[0] * b[0] + a[1] * b[1]

    def det(a, b):
        return a[0] * b[1] - a[1] * b[0]

    if not det(v1, v2):
        raise DegenerateLatticeError("basis vectors are collinear")
    # Lagrange-Gauss reduction
    for _ in range(10000):
        if dot(v2, v2) < dot(v1, v1):
            v1, v2 = v2, v1
        mu = dot(v1, v2) / dot(v1, v1)
        r = _round_half_down(mu)
        if r == 0:
            break
        v2 = (v2[0] - r * v1[0], v2[1] - r * v1[1])
    else:
        raise DegenerateLatticeError("reduction did not terminate")
    if det(v1, v2) < 0:
        v2 = (-v2[0], -v2[1])
    # tau = v2 / v1 as a complex ratio
    n = dot(v1, v1)
    x = dot(v1, v2) / n
    y = det(v1, v2) / n
    # fold into |x| <= 1/2 then to the boundary conventions
    shift = _round_half_down(x)
    x = x - shift
    if x == Fraction(-1, 2) or x == -0.5:
        x = -x
    nrm = x * x + y * y
    if nrm < 1 or (nrm == 1 and x < 0):
        # invert tau -> -1/tau (possible on the boundary circle)
        x, y = -x / nrm, y / nrm
        shift = _round_half_down(x)
        x = x - shift
        if x == Fraction(-1, 2) or x == -0.5:
            x = -x
    return x, y


def _round_half_down(x):
    f = _floor(x)
    frac = x - f
    half = Fraction(1, 2)
    if frac > half:
        return f + 1
    return f


def gauss_map(lam):
    """{1/lambda} on (0, 1)."""
    if not (0 < lam < 1):
        raise OutOfDomainError("need 0 < lambda < 1")
    inv = 1 / lam
    return inv - _floor(inv)


def gauss_density(lam):
    """Density of the invariant Gauss measure on [0, 1)."""
    if not (0 <= lam < 1):
        raise OutOfDomainError("need 0 <= lambda < 1")
    return 1.0 / (math.log(2.0) * (1.0 + float(lam)))


def continued_fraction(x, k):
    """First k continued-fraction digits of x in (0, 1).

    Exact inputs (Fraction, QuadraticNumber) run exactly; rationals may
    terminate early.  Floats carry a 52-bit precision budget: the
    returned (digits, trusted) flags how many digits are reliable.
    """
    digits = []
    is_float = isinstance(x, float)
    budget = 52.0
    trusted = 0
    cur = x
    for _ in range(k):
        if not cur:
            break
        inv = 1 / cur
        d = _floor(inv)
        if isinstance(d, float):
            d = int(d)
        d = int(d)
        if d < 1:
            raise OutOfDomainError("x must lie in (0, 1)")
        digits.append(d)
        cur = inv - d
        if is_float:
            budget -= math.log2(max(d, 2)) * 2
            if budget > 0:
                trusted += 1
        else:
            trusted += 1
        if isinstance(cur, Fraction) and cur == 0:
            break
        if isinstance(cur, float) and cur <= 0:
            break
    return digits, trusted


def convergents(x, k):
    """Convergents p_s/q_s of x from its first k digits."""
    digits, _ = continued_fraction(x, k)
    ps, qs = [1, 0], [0, 1]
    out = []
    for d in digits:
        ps.append(d * ps[-1] + ps[-2])
        qs.append(d * qs[-1] + qs[-2])
        out.append(Fraction(ps[-1], qs[-1]))
    return out


class CuttingWord:
    """Alternating blocks R^{a} L^{b} ... of a Farey cutting sequence."""

    def __init__(self, blocks):
        self.blocks = list(blocks)     # [(letter, count), ...]
        for (letter, count) in self.blocks:
            if letter not in "RL" or count < 1:
                raise ValueError("malformed cutting word")
        for a, b in zip(self.blocks, self.blocks[1:]):
            if a[0] == b[0]:
                raise ValueError("blocks must alternate")

    def exponents(self):
        return [c for (_, c) in self.blocks]

    def __str__(self):
        return "".join(f"{letter}^{c}" for letter, c in self.blocks)

    def __eq__(self, o):
        return isinstance(o, CuttingWord) and self.blocks == o.blocks


def cutting_sequence(x, n_blocks):
    """Cutting word of the geodesic from the imaginary axis landing at x.

    Farey mediant descent: maintain the tessellation triangle containing
    x as an interval between Farey neighbors; each crossing leaves the
    shared vertex on the right (letter R, when x is left of the mediant)
    or on the left (letter L).  The initial triangle (0, 1, infinity),
    entered through the imaginary axis, cuts off the vertex 0 on the
    right.  Exact for exact scalars.
    """
    if not (0 < x < 1):
        raise OutOfDomainError("need 0 < x < 1")
    letters = ["R"]
    lo_n, lo_d = 0, 1
    hi_n, hi_d = 1, 1
    blocks = []
    cur_letter, cur_count = "R", 1
    while len(blocks) + 1 <= n_blocks:
        med_n, med_d = lo_n + hi_n, lo_d + hi_d
        med = Fraction(med_n, med_d)
        if x == med:
            raise RationalLandingError(f"geodesic hits the cusp {med}")
        if x < med:
            letter = "R"
            hi_n, hi_d = med_n, med_d
        else:
            letter = "L"
            lo_n, lo_d = med_n, med_d
        if letter == cur_letter:
            cur_count += 1
        else:
            blocks.append((cur_letter, cur_count))
            cur_letter, cur_count = letter, 1
        if len(blocks) == n_blocks:
            return CuttingWord(blocks)
    blocks.append((cur_letter, cur_count))
    return CuttingWord(blocks[:n_blocks])


def all_lattice_count(L):
    """Number of nonzero integer vectors of norm <= L (exact enumeration)."""
    L2 = L * L
    r = int(math.floor(float(L)))
    while (r + 1) * (r + 1) <= L2:
        r += 1
    while r * r > L2:
        r -= 1
    total = 0
    for p in range(-r, r + 1):
        rem = L2 - p * p
        if rem < 0:
            continue
        q = int(math.isqrt(int(rem))) if rem == int(rem) else int(math.sqrt(rem))
        while (q + 1) * (q + 1) <= rem:
            q += 1
        while q * q > rem:
            q -= 1
        total += 2 * q + 1
    return total - 1   # remove the origin


def primitive_lattice_count(L):
    """Number of primitive integer vectors of norm <= L (exact enumeration)."""
    L2 = L * L
    r = int(math.floor(float(L)))
    while (r + 1) * (r + 1) <= L2:
        r += 1
    total = 0
    for p in range(0, r + 1):
        rem = L2 - p * p
        if rem < 0:
            break
        q = int(math.isqrt(int(rem))) if rem == int(rem) else int(math.sqrt(rem))
        while (q + 1) * (q + 1) <= rem:
            q += 1
        while q * q > rem:
            q -= 1
        if p == 0:
            total += 2          # (0, 1), (0, -1)
            continue
        for qq in range(0, q + 1):
            if math.gcd(p, qq) == 1:
                total += 4 if qq else 2
    return total


def levy_constant_samples(n_samples, s=200, bits=640, seed=0):
    """Empirical log(q_s)/s over random reals (dyadic with many exact digits).

    Samples x = k / 2^bits uniformly; the first s continued-fraction
    digits of such x agree with those of a uniform real with
    overwhelming probability when bits >> 1.7 s.
    """
    import random

    rng = random.Random(seed)
    out = []
    for _ in range(n_samples):
        while True:
            k = rng.randrange(1, 1 << bits)
            x = Fraction(k, 1 << bits)
            digits, _ = continued_fraction(x, s)
            if len(digits) >= s:
                break
        q0, q1 = 1, 0
        for d in digits[:s]:
            q0, q1 = d * q0 + q1, q0
        out.append(math.log(q0) / s)
    return out
