"""Shared oracles for the test suite."""

import numpy as np


def neumann_laplacian_matrix(N, dx):
    """Dense 5-point Laplacian on N x N cell centers with mirror boundaries.

    Independent assembly used as the oracle for the DCT-based solver and for
    the div(grad(.)) identity.
    """
    n = N * N
    A = np.zeros((n, n))

    def idx(i, j):
        return i * N + j

    for i in range(N):
        for j in range(N):
            k = idx(i, j)
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                ii, jj = i + di, j + dj
                if 0 <= ii < N and 0 <= jj < N:
                    A[k, idx(ii, jj)] += 1.0
                    A[k, k] -= 1.0
                # mirror neighbor outside: value equals the cell itself,
                # contributing nothing
    return A / dx**2


def apply_neumann_laplacian(values, dx):
    """Stencil application of the same operator (mirror padding)."""
    p = np.pad(values, 1, mode="edge")
    return (p[2:, 1:-1] + p[:-2, 1:-1] + p[1:-1, 2:] + p[1:-1, :-2]
            - 4.0 * values) / dx**2


def fit_loglog_slope(xs, errs):
    xs = np.asarray(xs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    keep = errs > 0
    return float(np.polyfit(np.log(xs[keep]), np.log(errs[keep]), 1)[0])
