"""Rauzy-Veech induction, Zorich acceleration, and Lyapunov spectra.

The induction compares the last top length lambda_n with the last bottom
slot width lambda_{pi^{-1}(n)} and cuts the base interval on the right by
the smaller of the two.  Lengths transport as lambda = B lambda' and
first-return cycles as c' = B^T c, where B is a nonnegative unipotent
integer matrix; products of the B's along an orbit form the
multiplicative cocycle whose Lyapunov exponents drive the deviation
spectrum.

Zippered rectangles (lambda, h, a, pi) suspend an interval exchange to a
translation surface; the canonical suspension used here takes
tau_i = pi(i) - i, heights h = -Omega(pi) tau and altitudes a = partial
sums of tau.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import iet as _iet
from .surface import PolygonGluing, TranslationSurface


class DegenerateTieError(ArithmeticError):
    """lambda_n equals lambda_{pi^{-1}(n)}: the induction hits a saddle connection."""


class NonConvergenceError(RuntimeError):
    pass


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _step_inplace(lam, perm):
    """One Rauzy-Veech step on (lengths, permutation images), both lists.

    Returns (kind, row, col) describing the elementary matrix
    B = I + E[row, col] for kind 'I'; for kind 'II' the matrix is the
    insert/merge block structure handled by the callers.
    """
    n = len(perm)
    idx_k = perm.index(n)            # 0-based position of the letter n
    ln, lk = lam[n - 1], lam[idx_k]
    if ln == lk:
        raise DegenerateTieError("lambda_n == lambda_{pi^{-1}(n)}")
    if ln > lk:
        lam[n - 1] = ln - lk
        # bottom-line move, inlined: positions after pi(n) shift cyclically
        j = perm[n - 1]
        for v in range(n):
            i = perm[v]
            if i > j:
                perm[v] = j + 1 if i == n else i + 1
        return "I", n - 1, idx_k
    val = lam.pop()
    lam[idx_k] = lk - val
    lam.insert(idx_k + 1, val)
    # top-line move with positional relabeling, inlined: new[s(i)] = old[i]
    old = perm[:]
    k1 = idx_k + 1
    for i in range(1, n + 1):
        if i <= k1:
            pos = i
        elif i == n:
            pos = k1 + 1
        else:
            pos = i + 1
        perm[pos - 1] = old[i - 1]
    return "II", n - 1, idx_k


def _apply_step_to_matrix(b, kind, row, col):
    """Right-multiply accumulated matrix b by the elementary step matrix."""
    n = len(b)
    if kind == "I":
        for r in b:
            r[col] += r[row]
    else:
        idx_k = col
        for r in b:
            last = r.pop()
            r.insert(idx_k + 1, r[idx_k] + last)


def _apply_step_to_heights(h, kind, row, col):
    """Transport heights by B^T across one step."""
    if kind == "I":
        h[col] += h[row]
    else:
        idx_k = col
        last = h.pop()
        h.insert(idx_k + 1, h[idx_k] + last)


def _apply_step_to_tau(tau, kind, row, col):
    """Transport suspension data by B^{-1} (same shape as lengths)."""
    if kind == "I":
        tau[row] -= tau[col]
    else:
        idx_k = col
        val = tau.pop()
        tau[idx_k] -= val
        tau.insert(idx_k + 1, val)


def canonical_tau(perm):
    """Suspension datum tau_i = pi(i) - i; valid for irreducible pi."""
    return [perm[i] - (i + 1) for i in range(len(perm))]


def heights_from_tau(perm, tau):
    """Rectangle heights over (lambda, tau, pi): vertical return times.

    h_i = sum_{k<i} tau_k - sum_{k<pi(i)} tau_{pi^{-1}(k)}, the gap between
    the top broken line over X_i and the bottom line under its image slot.
    """
    n = len(perm)
    inv = _iet.perm_inverse(perm)
    tops = [0]
    for k in range(n - 1):
        tops.append(tops[-1] + tau[k])
    bots = [0]
    for k in range(n - 1):
        bots.append(bots[-1] + tau[inv[k] - 1])
    return [tops[i] - bots[perm[i] - 1] for i in range(n)]


class ZipperedRectangles:
    """Suspension data (lambda, h, a, pi) over an interval exchange."""

    def __init__(self, lam, h, a, perm):
        self.lam = list(lam)
        self.h = list(h)
        self.a = list(a)
        self.perm = tuple(perm)
        n = len(self.perm)
        if not (len(self.lam) == len(self.h) == len(self.a) == n):
            raise ValueError("size mismatch")
        if any(not (x > 0) for x in self.lam) or any(not (x > 0) for x in self.h):
            raise ValueError("widths and heights must be positive")

    @property
    def tau(self):
        out = [self.a[0]]
        for j in range(1, len(self.a)):
            out.append(self.a[j] - self.a[j - 1])
        return out

    def base_length(self):
        return sum(self.lam)

    def area(self):
        return sum(x * y for x, y in zip(self.lam, self.h))

    def rescale(self, t):
        """Teichmuller flow g_t: expand widths by e^t, contract heights."""
        u, v = math.exp(t), math.exp(-t)
        return ZipperedRectangles(
            [x * u for x in self.lam],
            [x * v for x in self.h],
            [x * v for x in self.a],
            self.perm,
        )

    def iet(self):
        return _iet.IET(self.lam, self.perm)

    def surface(self) -> TranslationSurface:
        return suspension_surface(self.lam, self.tau, self.perm)

    def __repr__(self):
        return (f"ZipperedRectangles(lam={self.lam}, h={self.h}, "
                f"a={self.a}, perm={self.perm})")


def suspension_surface(lam, tau, perm) -> TranslationSurface:
    """Masur suspension polygon over (lambda, tau, pi), glued by translations.

    The boundary runs along the bottom broken line (edges zeta_{pi^{-1}(j)})
    and back along the reversed top line; matching edges are identified.
    """
    n = len(perm)
    inv = _iet.perm_inverse(perm)
    zs = [(lam[i], tau[i]) for i in range(n)]
    bottom = [zs[inv[j] - 1] for j in range(n)]
    top_rev = [(-zs[n - 1 - t][0], -zs[n - 1 - t][1]) for t in range(n)]
    poly = bottom + top_rev
    pairing = []
    for j in range(n):
        i = inv[j]                      # bottom edge j carries zeta_i
        pairing.append(((0, j), (0, 2 * n - i)))
    return TranslationSurface(PolygonGluing([poly], pairing))


def suspend(t_or_perm, lengths=None) -> ZipperedRectangles:
    """Canonical zippered-rectangle suspension of an interval exchange."""
    if isinstance(t_or_perm, _iet.IET):
        perm, lam = t_or_perm.perm, list(t_or_perm.lengths)
    else:
        perm = tuple(t_or_perm)
        lam = list(lengths) if lengths is not None else [Fraction(1)] * len(perm)
    _iet.check_irreducible(perm)
    tau = canonical_tau(perm)
    h = heights_from_tau(perm, tau)
    if any(not (x > 0) for x in h):
        raise ValueError("canonical suspension failed to give positive heights")
    a = []
    s = 0
    for x in tau:
        s = s + x
        a.append(s)
    return ZipperedRectangles(lam, h, a, perm)


def rv_step(state):
    """One Rauzy-Veech induction step.

    Accepts an IET or ZipperedRectangles; returns (new_state, B, kind)
    with lambda_old = B lambda_new and det B = +-1.
    """
    if isinstance(state, _iet.IET):
        lam, perm = list(state.lengths), list(state.perm)
        b = _identity(len(perm))
        kind, row, col = _step_inplace(lam, perm)
        _apply_step_to_matrix(b, kind, row, col)
        return _iet.IET(lam, tuple(perm)), b, kind
    if isinstance(state, ZipperedRectangles):
        lam, perm = list(state.lam), list(state.perm)
        h, tau = list(state.h), list(state.tau)
        b = _identity(len(perm))
        kind, row, col = _step_inplace(lam, perm)
        _apply_step_to_matrix(b, kind, row, col)
        _apply_step_to_heights(h, kind, row, col)
        _apply_step_to_tau(tau, kind, row, col)
        a = []
        s = 0
        for x in tau:
            s = s + x
            a.append(s)
        return ZipperedRectangles(lam, h, a, tuple(perm)), b, kind
    raise TypeError("state must be IET or ZipperedRectangles")


def zorich_step(state):
    """Group consecutive same-kind induction steps into one accelerated step.

    Returns (new_state, B_product, repetitions, kind).
    """
    state1, b, kind = rv_step(state)
    reps = 1
    while True:
        lam = state1.lam if isinstance(state1, ZipperedRectangles) else state1.lengths
        perm = state1.perm
        n = len(perm)
        idx_k = perm.index(n)
        ln, lk = lam[n - 1], lam[idx_k]
        if ln == lk:
            raise DegenerateTieError("tie inside accelerated step")
        next_kind = "I" if ln > lk else "II"
        if next_kind != kind:
            return state1, b, reps, kind
        state1, b2, _ = rv_step(state1)
        _matmul_into(b, b2)
        reps += 1


def _matmul_into(b, b2):
    n = len(b)
    for i in range(n):
        row = b[i]
        b[i] = [sum(row[k] * b2[k][j] for k in range(n)) for j in range(n)]


def teich_return_time(state):
    """Return time to the unit-base section: -log(1 - min(lambda_n, lambda_k)).

    The state must have unit base length; after flowing for this time and
    applying one induction step the base is again of unit length.
    """
    lam = state.lam if isinstance(state, ZipperedRectangles) else state.lengths
    perm = state.perm
    total = sum(lam)
    tol = 1e-9 if isinstance(total, float) else 0
    if abs(total - 1) > tol:
        raise ValueError("need unit base length")
    n = len(perm)
    m = min(lam[n - 1], lam[perm.index(n)])
    if isinstance(m, Fraction):
        m = float(m)
    return -math.log(1 - m)


class LyapunovReport:
    """Estimated Lyapunov spectrum of the accelerated cocycle."""

    def __init__(self, theta, stderr, steps, seed, restarts, perm):
        self.theta = list(theta)
        self.stderr = list(stderr)
        self.steps = steps
        self.seed = seed
        self.restarts = restarts
        self.perm = tuple(perm)
        self.nu = [t / theta[0] for t in theta]

    def genus(self):
        return _iet.genus_of_permutation(self.perm)

    def n_marked(self):
        return len(self.perm) + 1 - 2 * self.genus()

    def symmetric_within(self, k_sigma=3.0):
        """Whether theta_j ~ -theta_{n+1-j} within k_sigma joint errors."""
        n = len(self.theta)
        for j in range(n):
            a, b = self.theta[j], self.theta[n - 1 - j]
            tol = k_sigma * (self.stderr[j] + self.stderr[n - 1 - j]) + 1e-12
            if abs(a + b) > tol:
                return False
        return True

    def zero_exponents(self, k_sigma=3.0):
        """Indices of exponents vanishing within k_sigma standard errors."""
        return [
            j for j, t in enumerate(self.theta)
            if abs(t) <= k_sigma * self.stderr[j] + 1e-12
        ]

    def to_json(self):
        return {
            "perm": list(self.perm),
            "theta": self.theta,
            "nu": self.nu,
            "stderr": self.stderr,
            "steps": self.steps,
            "seed": self.seed,
            "restarts": self.restarts,
        }


def _fast_run(lam, perm, cap):
    """Run rv-steps of one kind, at most cap of them; accumulate B.

    Returns (b_rows, reps, kind, exhausted) where exhausted means the cap
    was hit with the run still going.  n = 2 uses an exact divmod shortcut.
    """
    n = len(perm)
    b = _identity(n)
    kind, row, col = _step_inplace(lam, perm)
    _apply_step_to_matrix(b, kind, row, col)
    reps = 1
    if n == 2:
        # runs subtract the same length repeatedly: finish by division
        other = lam[0] if kind == "I" else lam[1]
        tgt = 1 if kind == "I" else 0
        m = int(lam[tgt] // other) if other > 0 else 0
        if lam[tgt] - m * other <= 0:
            m -= 1
        if m > 0:
            lam[tgt] -= m * other
            r, c = (1, 0) if kind == "I" else (0, 1)
            for rr in b:
                rr[c] += m * rr[r]
            reps += m
        return b, reps, kind, False
    while reps < cap:
        idx_k = perm.index(n)
        ln, lk = lam[n - 1], lam[idx_k]
        if ln == lk:
            raise DegenerateTieError("tie inside run")
        nkind = "I" if ln > lk else "II"
        if nkind != kind:
            return b, reps, kind, False
        _, row, col = _step_inplace(lam, perm)
        _apply_step_to_matrix(b, kind, row, col)
        reps += 1
    return b, reps, kind, True


def lyapunov_spectrum(perm, steps=10**6, seed=0, qr_every=10,
                      n_blocks=20, run_cap=4096):
    """Estimate the Lyapunov spectrum of the accelerated cocycle over pi.

    Iterates the Zorich-accelerated induction from a random length vector,
    transporting an orthonormal frame by the transposed cocycle matrices
    and re-orthonormalizing periodically; log norms accumulate into the
    exponents theta_1 >= ... >= theta_n, normalized per accelerated step.
    """
    perm = tuple(perm)
    _iet.check_irreducible(perm)
    n = len(perm)
    rng = np.random.default_rng(seed)
    lam = list(rng.exponential(1.0, n))
    s = sum(lam)
    lam = [x / s for x in lam]
    plist = list(perm)

    frame = np.eye(n)
    acc = np.zeros(n)
    block_acc = []
    block_steps = []
    cur_acc = np.zeros(n)
    cur_steps = 0
    restarts = 0
    done = 0          # completed accelerated steps
    since_qr = 0
    prev_kind = None
    block_target = max(1, steps // n_blocks)

    while done < steps:
        try:
            b, reps, kind, exhausted = _fast_run(lam, plist, run_cap)
        except DegenerateTieError:
            restarts += 1
            lam = list(rng.exponential(1.0, n))
            s = sum(lam)
            lam = [x / s for x in lam]
            plist = list(perm)
            prev_kind = None
            continue
        frame = np.array(b, dtype=float).T @ frame
        if not exhausted:
            # a maximal same-kind run just completed
            done += 1
            cur_steps += 1
        prev_kind = kind if exhausted else None
        s = sum(lam)
        lam = [x / s for x in lam]
        since_qr += 1
        if since_qr >= qr_every:
            frame, r = np.linalg.qr(frame)
            gains = np.log(np.abs(np.diag(r)))
            acc += gains
            cur_acc += gains
            since_qr = 0
            if cur_steps >= block_target:
                block_acc.append(cur_acc.copy())
                block_steps.append(cur_steps)
                cur_acc = np.zeros(n)
                cur_steps = 0

    frame, r = np.linalg.qr(frame)
    gains = np.log(np.abs(np.diag(r)))
    acc += gains
    cur_acc += gains
    if cur_steps:
        block_acc.append(cur_acc.copy())
        block_steps.append(cur_steps)

    theta = acc / done
    rates = np.array([ba / bs for ba, bs in zip(block_acc, block_steps)])
    k = len(rates)
    stderr = rates.std(axis=0, ddof=1) / math.sqrt(k) if k > 1 else np.ones(n)
    order = np.argsort(-theta)
    return LyapunovReport(theta[order].tolist(), stderr[order].tolist(),
                          done, seed, restarts, perm)


def lyapunov_spectrum_replicas(perm, steps, seeds, qr_every=10):
    """Independent replicas merged by mean with replica-spread errors."""
    reports = [lyapunov_spectrum(perm, steps, seed=s, qr_every=qr_every)
               for s in seeds]
    thetas = np.array([r.theta for r in reports])
    mean = thetas.mean(axis=0)
    k = len(reports)
    if k > 1:
        se = thetas.std(axis=0, ddof=1) / math.sqrt(k)
    else:
        se = np.array(reports[0].stderr)
    total = sum(r.steps for r in reports)
    restarts = sum(r.restarts for r in reports)
    return LyapunovReport(mean.tolist(), se.tolist(), total,
                          list(seeds)[0], restarts, perm)
