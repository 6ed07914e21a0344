"""Interval exchange transformations and Rauzy combinatorics.

Permutations are stored in one-line notation: ``perm[i]`` is the image
of interval i+1, both 1-based in the classical convention.  An interval
exchange T(lambda, pi) cuts [0, |X|) into subintervals of lengths
lambda_1..lambda_n (left to right) and re-glues the i-th subinterval
into the pi(i)-th slot from the left, where slot widths follow the
bottom ordering pi^{-1}(1), ..., pi^{-1}(n).

The two elementary Rauzy moves act as follows.  Move "I" rewrites the
bottom line by taking its last letter and re-inserting it right after
the letter n; it renormalizes T when lambda_n > lambda_{pi^{-1}(n)}.
Move "II" is the mirror operation on the top line (with positional
relabeling) and applies when lambda_n < lambda_{pi^{-1}(n)}.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction


class ReduciblePermutationError(ValueError):
    pass


class OutOfDomainError(ValueError):
    pass


def perm_inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v - 1] = i + 1
    return tuple(inv)


def is_irreducible(p):
    top = 0
    for k in range(len(p) - 1):
        top = max(top, p[k])
        if top == k + 1:
            return False
    return True


def check_irreducible(p):
    if not is_irreducible(p):
        raise ReduciblePermutationError(f"{p} is reducible")


def perm_to_str(p):
    return ",".join(map(str, p))


def perm_from_str(s):
    return tuple(int(t) for t in s.replace("(", "").replace(")", "").split(","))


def move_bottom(p):
    """Rauzy move I: cycle the tail of the bottom ordering after letter n."""
    check_irreducible(p)
    n = len(p)
    w = list(perm_inverse(p))
    j = p[n - 1]            # position of the letter n in the bottom line
    last = w.pop()
    w.insert(j, last)
    return perm_inverse(tuple(w))


def move_top(p):
    """Rauzy move II: the mirror move on the top line, relabeled by position."""
    check_irreducible(p)
    return perm_inverse(move_bottom(perm_inverse(p)))


def rauzy_move(p, kind):
    """Apply move 'I' (bottom line) or 'II' (top line) to a permutation."""
    if kind == "I":
        return move_bottom(p)
    if kind == "II":
        return move_top(p)
    raise ValueError("kind must be 'I' or 'II'")


def rauzy_class(p):
    """Closure of {p} under both Rauzy moves (breadth-first)."""
    check_irreducible(tuple(p))
    start = tuple(p)
    seen = {start}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for nxt in (move_bottom(q), move_top(q)):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def flip(p):
    """Conjugate by the orientation flip: reverse top and bottom lines."""
    n = len(p)
    return tuple(n + 1 - p[n - 1 - i] for i in range(n))


def extended_rauzy_class(seeds):
    """Closure under Rauzy moves plus the flip symmetry.

    The result collects all permutations realizable by first-return maps
    on one connected component of a stratum; its correctness is checked
    against known component counts rather than a closed formula.
    """
    if isinstance(seeds, tuple) and seeds and isinstance(seeds[0], int):
        seeds = [seeds]
    seen = set()
    queue = deque()
    for s in seeds:
        s = tuple(s)
        check_irreducible(s)
        if s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        q = queue.popleft()
        for nxt in (move_bottom(q), move_top(q), flip(q)):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def all_irreducible(n):
    from itertools import permutations

    return [p for p in permutations(range(1, n + 1)) if is_irreducible(p)]


def intersection_form(p):
    """Skew-symmetric matrix of intersections of first-return cycles."""
    check_irreducible(tuple(p))
    n = len(p)
    inv = perm_inverse(p)
    om = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i < j and inv[i] > inv[j]:
                om[i][j] = 1
            elif i > j and inv[i] < inv[j]:
                om[i][j] = -1
    return om


def matrix_rank(m):
    """Rank over Q by fraction-free Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    rank, r = 0, 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def genus_of_permutation(p):
    """Genus of the suspended surface: half the rank of the intersection form."""
    return matrix_rank(intersection_form(p)) // 2


def marked_points_of_permutation(p):
    """Number of distinct singularities (zeros and marked points) m = n+1-2g."""
    return len(p) + 1 - 2 * genus_of_permutation(p)


class IET:
    """Interval exchange transformation with positive lengths."""

    def __init__(self, lengths, perm):
        perm = tuple(perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError("not a permutation")
        if len(lengths) != len(perm):
            raise ValueError("lengths/permutation size mismatch")
        for x in lengths:
            if not x > 0:
                raise ValueError("lengths must be positive")
        self.lengths = list(lengths)
        self.perm = perm
        self._rebuild()

    def _rebuild(self):
        n = len(self.perm)
        inv = perm_inverse(self.perm)
        tops = [0 * self.lengths[0]]
        for x in self.lengths[:-1]:
            tops.append(tops[-1] + x)
        bots = [0 * self.lengths[0]]
        for j in range(1, n):
            bots.append(bots[-1] + self.lengths[inv[j - 1] - 1])
        self.top_starts = tops
        self.bottom_starts = bots
        self.total = tops[-1] + self.lengths[-1]
        self.offsets = [
            bots[self.perm[i] - 1] - tops[i] for i in range(n)
        ]

    def interval_of(self, x):
        if not (0 <= x < self.total):
            raise OutOfDomainError(f"{x} outside [0, {self.total})")
        n = len(self.perm)
        for i in range(n - 1, -1, -1):
            if x >= self.top_starts[i]:
                return i
        raise OutOfDomainError(str(x))

    def __call__(self, x):
        return x + self.offsets[self.interval_of(x)]

    def inverse(self):
        inv = perm_inverse(self.perm)
        lengths = [self.lengths[inv[j] - 1] for j in range(len(self.perm))]
        return IET(lengths, inv)

    def __repr__(self):
        return f"IET(lengths={self.lengths}, perm={self.perm})"


def iet_apply(t: IET, x):
    return t(x)
