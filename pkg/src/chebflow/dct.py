"""Discrete cosine transforms (DCT-II forward, DCT-III inverse).

The transforms are the ones natural to half-integer sample points
``x_{n+1/2} = (n+1/2)/N``:

    forward   F_k = sum_{n=0}^{N-1} f_{n+1/2} cos((2n+1) k pi / (2N))
    inverse   f_{n+1/2} = (2/N) [ F_0/2 + sum_{k>=1} F_k cos((2n+1) k pi / (2N)) ]

Four interchangeable algorithms are provided:

- ``naive``      direct evaluation of the sums, any N >= 1 (the oracle)
- ``iterative``  O(N^2) add/multiply recurrences, N even
- ``recursive``  O(N log N) split-radix style recursion, N a power of two
- ``hybrid``     recursive until the size reaches ``cutoff``, then iterative

All algorithms produce identical results up to rounding.  The 1D entry
points accept arrays of shape (..., N) and transform along the last axis;
the 2D entry points require a square (N, N) array.
"""

from __future__ import annotations

import numpy as np

_ALGORITHMS = ("naive", "iterative", "recursive", "hybrid")


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class DctPlan:
    """Precomputed trigonometric tables for transforms of one length.

    Parameters
    ----------
    N : int
        Transform length.
    algorithm : str
        One of ``naive``, ``iterative``, ``recursive``, ``hybrid``.
    cutoff : int
        Size at which the hybrid algorithm switches to the iterative one.

    Plans are immutable after construction and can be shared between
    threads; all transform calls are pure.
    """

    def __init__(self, N: int, algorithm: str = "hybrid", cutoff: int = 64):
        if algorithm not in _ALGORITHMS:
            raise ValueError(f"unknown DCT algorithm {algorithm!r}")
        if N < 1:
            raise ValueError("transform length must be >= 1")
        if algorithm == "iterative" and N % 2 != 0:
            raise ValueError("iterative DCT requires even N")
        if algorithm in ("recursive", "hybrid") and (not _is_pow2(N) or N < 2):
            raise ValueError(f"{algorithm} DCT requires N to be a power of two >= 2")
        if algorithm == "hybrid" and cutoff < 2:
            raise ValueError("hybrid cutoff must be >= 2")
        self.N = int(N)
        self.algorithm = algorithm
        self.cutoff = int(cutoff)
        self._tables = {}
        for n in self._sizes_used():
            self._tables[n] = self._build_tables(n)

    # -- table construction -------------------------------------------------

    def _sizes_used(self):
        n = self.N
        sizes = [n]
        if self.algorithm in ("recursive", "hybrid"):
            stop = 2 if self.algorithm == "recursive" else max(2, self.cutoff)
            while n > stop:
                n //= 2
                sizes.append(n)
        return sizes

    @staticmethod
    def _build_tables(n):
        t = {}
        h = n // 2
        if h:
            # iterative forward: even/odd frequency recurrences
            ke = np.arange(0, n, 2)
            ko = np.arange(1, n, 2)
            te, to = ke * np.pi / n, ko * np.pi / n
            t["it_fwd"] = (np.cos(te / 2), 2 * np.cos(te),
                           np.sin(to / 2), 2 * np.cos(to))
            # iterative inverse: recurrences over sample index n
            tn = (2 * np.arange(h) + 1) * np.pi / n
            t["it_inv"] = (np.sin(tn), np.sin(tn / 2), 2 * np.cos(tn))
            # recursive split/merge rotations
            k = np.arange(1, h)
            t["rec"] = (np.cos(k * np.pi / (2 * n)), np.sin(k * np.pi / (2 * n)))
            k0 = np.arange(0, h)
            t["rec0"] = (np.cos(k0 * np.pi / (2 * n)), np.sin(k0 * np.pi / (2 * n)))
        # naive basis matrix, built lazily only when the naive path is used
        return t

    def _cos_matrix(self, n):
        tab = self._tables.setdefault(n, {})
        if "naive" not in tab:
            nn = np.arange(n)[:, None]
            kk = np.arange(n)[None, :]
            tab["naive"] = np.cos((2 * nn + 1) * kk * np.pi / (2 * n))
        return tab["naive"]

    # -- dispatch ------------------------------------------------------------

    def _check(self, f):
        f = np.asarray(f, dtype=float)
        if f.shape[-1] != self.N:
            raise ValueError(f"sequence length {f.shape[-1]} does not match plan N={self.N}")
        return f

    def forward(self, f):
        f = self._check(f)
        return _FWD[self.algorithm](self, f, self.N)

    def inverse(self, F):
        F = self._check(F)
        return _INV[self.algorithm](self, F, self.N)


# -- naive ------------------------------------------------------------------

def _dct_naive(plan, f, n):
    return f @ plan._cos_matrix(n)


def _idct_naive(plan, F, n):
    Fh = F.copy()
    Fh[..., 0] *= 0.5
    return (2.0 / n) * (Fh @ plan._cos_matrix(n).T)


# -- iterative (O(N^2) recurrences) -----------------------------------------

def _dct_iter(plan, f, n):
    if n % 2:
        raise ValueError("iterative DCT requires even N")
    h = n // 2
    ce, tce, so, tco = plan._tables[n]["it_fwd"]
    fr = f[..., ::-1]
    we = f[..., :h] + fr[..., :h]
    wo = f[..., :h] - fr[..., :h]
    G2 = G1 = np.zeros(f.shape[:-1] + (h,))
    H2 = H1 = np.zeros_like(G1)
    wprev_e = wprev_o = 0.0
    for j in range(h):
        wj_e = we[..., j:j + 1]
        wj_o = wo[..., j:j + 1]
        G = ce * (wj_e - wprev_e) + tce * G1 - G2
        H = so * (wj_o + wprev_o) + tco * H1 - H2
        G2, G1, H2, H1 = G1, G, H1, H
        wprev_e, wprev_o = wj_e, wj_o
    out = np.empty_like(f)
    sign = np.where(np.arange(h) % 2 == 0, 1.0, -1.0)
    out[..., 0::2] = G1 * sign
    out[..., 1::2] = H1 * sign
    return out


def _idct_iter(plan, F, n):
    if n % 2:
        raise ValueError("iterative DCT requires even N")
    h = n // 2
    sn, sh, tc = plan._tables[n]["it_inv"]
    Fh = F.copy()
    Fh[..., 0] *= 0.5
    P2 = P1 = np.zeros(F.shape[:-1] + (h,))
    Q2 = Q1 = np.zeros_like(P1)
    for j in range(h):
        fe = Fh[..., 2 * j:2 * j + 1]
        fo = Fh[..., 2 * j + 1:2 * j + 2]
        fo_prev = Fh[..., 2 * j - 1:2 * j] if j > 0 else 0.0
        P = sn * fe + tc * P1 - P2
        Q = sh * (fo + fo_prev) + tc * Q1 - Q2
        P2, P1, Q2, Q1 = P1, P, Q1, Q
    sign = np.where(np.arange(h) % 2 == 0, 1.0, -1.0)
    out = np.empty_like(F)
    out[..., :h] = (2.0 / n) * sign * (P1 + Q1)
    out[..., h:] = ((2.0 / n) * sign * (P1 - Q1))[..., ::-1]
    return out


# -- recursive (O(N log N)) --------------------------------------------------

def _dct2_direct(f):
    out = np.empty_like(f)
    out[..., 0] = f[..., 0] + f[..., 1]
    out[..., 1] = (f[..., 0] - f[..., 1]) * np.cos(np.pi / 4)
    return out


def _idct2_direct(F):
    c = np.cos(np.pi / 4)
    out = np.empty_like(F)
    out[..., 0] = 0.5 * F[..., 0] + c * F[..., 1]
    out[..., 1] = 0.5 * F[..., 0] - c * F[..., 1]
    return out


def _dct_rec(plan, f, n, base, base_fn):
    if n <= base:
        return base_fn(plan, f, n) if base > 2 else _dct2_direct(f)
    h = n // 2
    alt = np.where(np.arange(h) % 2 == 0, 1.0, -1.0)
    fL = f[..., 0::2] + f[..., 1::2]
    fH = (f[..., 0::2] - f[..., 1::2]) * alt
    A = _dct_rec(plan, fL, h, base, base_fn)
    B = _dct_rec(plan, fH, h, base, base_fn)
    ck, sk = plan._tables[n]["rec"]
    out = np.empty_like(f)
    out[..., 0] = A[..., 0]
    out[..., h] = B[..., 0] / np.sqrt(2.0)
    Bq = B[..., :0:-1]          # B[N/2 - k] for k = 1..N/2-1
    out[..., 1:h] = ck * A[..., 1:] + sk * Bq
    out[..., h + 1:] = (-sk * A[..., 1:] + ck * Bq)[..., ::-1]
    return out


def _idct_rec(plan, F, n, base, base_fn):
    if n <= base:
        return base_fn(plan, F, n) if base > 2 else _idct2_direct(F)
    h = n // 2
    ck, sk = plan._tables[n]["rec0"]
    w = np.empty(F.shape[:-1] + (h,))
    w[..., 0] = F[..., 0]
    w[..., 1:] = ck[1:] * F[..., 1:h] - sk[1:] * F[..., :h:-1]
    Fp = F[..., h:]             # F[N/2 + k]
    Fm = np.concatenate([F[..., h:h + 1], F[..., h - 1:0:-1]], axis=-1)  # F[N/2 - k]
    v = (np.sqrt(2.0) / 2) * (ck * (Fp + Fm) + sk * (Fp - Fm))
    C = _idct_rec(plan, w, h, base, base_fn)
    D = _idct_rec(plan, v, h, base, base_fn)
    alt = np.where(np.arange(h) % 2 == 0, 1.0, -1.0)
    out = np.empty_like(F)
    out[..., 0::2] = 0.5 * (C + alt * D)
    out[..., 1::2] = 0.5 * (C - alt * D)
    return out


def _dct_recursive(plan, f, n):
    return _dct_rec(plan, f, n, 2, None)


def _idct_recursive(plan, F, n):
    return _idct_rec(plan, F, n, 2, None)


def _dct_hybrid(plan, f, n):
    base = max(2, min(plan.cutoff, n))
    return _dct_rec(plan, f, n, base, _dct_iter if base > 2 else None)


def _idct_hybrid(plan, F, n):
    base = max(2, min(plan.cutoff, n))
    return _idct_rec(plan, F, n, base, _idct_iter if base > 2 else None)


_FWD = {"naive": _dct_naive, "iterative": _dct_iter,
        "recursive": _dct_recursive, "hybrid": _dct_hybrid}
_INV = {"naive": _idct_naive, "iterative": _idct_iter,
        "recursive": _idct_recursive, "hybrid": _idct_hybrid}


# -- public API ---------------------------------------------------------------

def dct(plan: DctPlan, f):
    """Forward DCT-II along the last axis (unscaled)."""
    return plan.forward(f)


def idct(plan: DctPlan, F):
    """Inverse transform (DCT-III with 2/N scaling and half-weighted F_0)."""
    return plan.inverse(F)


def _check_square(plan, f):
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("2d transform requires a square array")
    if f.shape[0] != plan.N:
        raise ValueError(f"array side {f.shape[0]} does not match plan N={plan.N}")
    return f


def dct2d(plan: DctPlan, f):
    """Two-dimensional forward transform of a square array.

    Separable row-column application: ``F[j, k]`` pairs frequency ``j`` with
    the first array axis and ``k`` with the second.
    """
    f = _check_square(plan, f)
    t = plan.forward(f)           # transform over axis 1 (index n -> k)
    return plan.forward(t.T).T    # transform over axis 0 (index m -> j)


def idct2d(plan: DctPlan, F):
    """Two-dimensional inverse transform of a square array."""
    F = _check_square(plan, F)
    t = plan.inverse(F)
    return plan.inverse(t.T).T
