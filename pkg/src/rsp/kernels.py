import numpy as np
from numba import njit, prange


@njit(cache=True)
def scatter_square_pairs(limit, weights, powers, msq, square_weights, symmetric):
    # per-cell Neumaier compensation; cells are visited in ascending (m2, m3, m1) order
    values = np.zeros(limit + 1)
    comp = np.zeros(limit + 1)
    count = msq.shape[0]
    for a in range(count):
        start = a if symmetric else 0
        for b in range(start, count):
            s = msq[a] + msq[b]
            if s >= limit:
                break
            pair = square_weights[a] * square_weights[b]
            if symmetric and b != a:
                pair *= 2.0
            for idx in range(powers.shape[0]):
                m1 = powers[idx]
                n = s + m1
                if n > limit:
                    break
                x = pair * weights[m1]
                v = values[n]
                t = v + x
                if abs(v) >= abs(x):
                    comp[n] += (v - t) + x
                else:
                    comp[n] += (x - t) + v
                values[n] = t
    return values + comp


@njit(parallel=True, cache=True)
def direct_pair_sums(remainders, pair_weights, powers, weights, powk):
    """partials[p] = pair_weights[p] * Σ_{m1 <= M} Λ(m1) (M - m1)^k with M = remainders[p]."""
    pairs = remainders.shape[0]
    partials = np.zeros(pairs)
    for p in prange(pairs):
        M = remainders[p]
        total = 0.0
        comp = 0.0
        for idx in range(powers.shape[0]):
            m1 = powers[idx]
            if m1 > M:
                break
            x = weights[m1] * powk[M - m1]
            t = total + x
            if abs(total) >= abs(x):
                comp += (total - t) + x
            else:
                comp += (x - t) + total
            total = t
        partials[p] = pair_weights[p] * (total + comp)
    return partials


@njit(parallel=True, cache=True)
def binomial_pair_sums(remainders, pair_weights, prefixes, coefficients):
    """
    partials[p] = pair_weights[p] * Σ_j coefficients[j] M^(k-j) prefixes[j, M],
    where coefficients[j] = C(k, j) (-1)^j and k = len(coefficients) - 1.
    """
    pairs = remainders.shape[0]
    k = coefficients.shape[0] - 1
    partials = np.zeros(pairs)
    for p in prange(pairs):
        M = remainders[p]
        fm = float(M)
        total = 0.0
        comp = 0.0
        for j in range(k + 1):
            x = coefficients[j] * fm ** (k - j) * prefixes[j, M]
            t = total + x
            if abs(total) >= abs(x):
                comp += (total - t) + x
            else:
                comp += (x - t) + total
            total = t
        partials[p] = pair_weights[p] * (total + comp)
    return partials
