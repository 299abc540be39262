"""Hot inner loops, each in a compiled and a pure-numpy flavour.

The public names at the bottom of the module are bound to the numba versions
unless ``STARKFAM_PURE_NUMPY`` is set (see :mod:`starkfam._accel`). Both
flavours stay importable under explicit names so tests and the benchmark can
run them side by side.

All residue kernels work on ``int64`` arrays with entries in ``[0, N)`` where
``N = p**n``; intermediate products stay below ``N**2`` so ``N`` must be
smaller than ``3 * 10**9``.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# group ring multiplication mod N


def _gr_mul_loop(a, b, table, modulus):
    k = a.shape[0]
    out = np.zeros(k, dtype=np.int64)
    for i in range(k):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(k):
            bj = b[j]
            if bj == 0:
                continue
            t = table[i, j]
            out[t] = (out[t] + ai * bj) % modulus
    return out


def gr_mul_mod_numpy(a, b, table, modulus):
    """Convolution of coefficient vectors along a group multiplication table."""
    out = np.zeros(a.shape[0], dtype=np.int64)
    prod = np.outer(a, b) % modulus
    np.add.at(out, table.ravel(), prod.ravel())
    return out % modulus


gr_mul_mod_numba = njit(_gr_mul_loop)

# ---------------------------------------------------------------------------
# Howell normal form over Z/p^n


def _inv_mod_py(u, modulus):
    # u is a unit mod `modulus`
    r0, r1 = modulus, u % modulus
    s0, s1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % modulus


def _valuation_py(e, p):
    v = 0
    while e % p == 0:
        e //= p
        v += 1
    return v


_inv_mod = njit(_inv_mod_py)
_valuation = njit(_valuation_py)


def _howell_loop(A, p, modulus):
    rows, cols = A.shape
    W = np.zeros((rows + cols + 1, cols), dtype=np.int64)
    for i in range(rows):
        for c in range(cols):
            W[i, c] = A[i, c] % modulus
    m = rows
    r = 0
    for c in range(cols):
        best = -1
        bestv = 1 << 30
        for i in range(r, m):
            e = W[i, c]
            if e != 0:
                v = _valuation(e, p)
                if v < bestv:
                    bestv = v
                    best = i
        if best < 0:
            continue
        if best != r:
            for k in range(cols):
                tmp = W[r, k]
                W[r, k] = W[best, k]
                W[best, k] = tmp
        pv = 1
        for _ in range(bestv):
            pv *= p
        uinv = _inv_mod(W[r, c] // pv, modulus)
        for k in range(cols):
            W[r, k] = (W[r, k] * uinv) % modulus
        for i in range(m):
            if i == r:
                continue
            e = W[i, c]
            if e == 0:
                continue
            q = e // pv
            if q == 0:
                continue
            for k in range(c, cols):
                W[i, k] = (W[i, k] - q * W[r, k]) % modulus
        if bestv > 0:
            ann = modulus // pv
            for k in range(cols):
                W[m, k] = (W[r, k] * ann) % modulus
            m += 1
        r += 1
    out = np.empty((r, cols), dtype=np.int64)
    for i in range(r):
        for k in range(cols):
            out[i, k] = W[i, k]
    return out


def howell_form_numpy(A, p, modulus):
    """Howell normal form of the row span of ``A`` over ``Z/modulus``.

    ``modulus`` must be a power of the prime ``p``. Pivots are powers of
    ``p``, entries above a pivot are reduced into ``[0, pivot)``, and rows
    multiplied by the annihilator of their pivot are fed back into the pool,
    which is what makes the form canonical over a ring with zero divisors.
    """
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    pool = [row for row in (A % modulus)]
    done = []
    for c in range(cols):
        cand = [i for i, row in enumerate(pool) if row[c] != 0]
        if not cand:
            continue
        vals = [_valuation_py(int(pool[i][c]), p) for i in cand]
        pick = cand[int(np.argmin(vals))]
        v = min(vals)
        pv = p**v
        piv = pool.pop(pick)
        piv = (piv * _inv_mod_py(int(piv[c]) // pv, modulus)) % modulus
        if pool:
            P = np.array(pool)
            q = P[:, c] // pv
            P = (P - np.outer(q, piv)) % modulus
            pool = [row for row in P if row.any()]
        if done:
            D = np.array(done)
            q = D[:, c] // pv
            done = list((D - np.outer(q, piv)) % modulus)
        if v > 0:
            ann = (piv * (modulus // pv)) % modulus
            if ann.any():
                pool.append(ann)
        done.append(piv)
    if not done:
        return np.zeros((0, cols), dtype=np.int64)
    return np.array(done, dtype=np.int64)


howell_form_numba = njit(_howell_loop)


def _howell_reduce_loop(H, x, modulus):
    rows, cols = H.shape
    y = x.copy() % modulus
    for i in range(rows):
        c = 0
        while c < cols and H[i, c] == 0:
            c += 1
        pv = H[i, c]
        e = y[c]
        if e % pv != 0:
            return y
        q = e // pv
        if q != 0:
            for k in range(c, cols):
                y[k] = (y[k] - q * H[i, k]) % modulus
    return y


def howell_reduce_numpy(H, x, modulus):
    """Reduce ``x`` against a Howell form; the result is zero iff x is in the span."""
    y = np.asarray(x, dtype=np.int64) % modulus
    for row in H:
        c = int(np.flatnonzero(row)[0])
        pv = int(row[c])
        if y[c] % pv:
            return y
        y = (y - (int(y[c]) // pv) * row) % modulus
    return y


howell_reduce_numba = njit(_howell_reduce_loop)

# ---------------------------------------------------------------------------
# Hurwitz zeta, Euler-Maclaurin


def _hurwitz_loop(s, x, shift, bern, terminate):
    total = 0.0
    for k in range(shift):
        total += (x + k) ** (-s)
    X = x + shift
    total += X ** (1.0 - s) / (s - 1.0) + 0.5 * X ** (-s)
    rising = s
    Xp = X ** (-s - 1.0)
    for m in range(1, bern.shape[0]):
        term = bern[m] * rising * Xp
        total += term
        rising *= (s + 2 * m - 1) * (s + 2 * m)
        if rising == 0.0:
            break
        if not terminate and abs(term) <= 1e-18 * abs(total):
            break
        Xp /= X * X
    return total


def hurwitz_em_numpy(s, x, shift, bern, terminate):
    """Euler-Maclaurin value of the Hurwitz zeta function.

    ``bern[m]`` holds ``B_{2m}/(2m)!``. With ``terminate`` the correction
    series runs until the rising factorial vanishes, which is exact at
    non-positive integer ``s``.
    """
    k = np.arange(shift, dtype=np.float64)
    total = float(np.sum((x + k) ** (-s))) if shift else 0.0
    X = x + shift
    total += X ** (1.0 - s) / (s - 1.0) + 0.5 * X ** (-s)
    rising = s
    Xp = X ** (-s - 1.0)
    for m in range(1, len(bern)):
        term = bern[m] * rising * Xp
        total += term
        rising *= (s + 2 * m - 1) * (s + 2 * m)
        if rising == 0.0:
            break
        if not terminate and abs(term) <= 1e-18 * abs(total):
            break
        Xp /= X * X
    return total


hurwitz_em_numba = njit(_hurwitz_loop)

# ---------------------------------------------------------------------------

if USE_NUMBA:
    gr_mul_mod = gr_mul_mod_numba
    howell_form = howell_form_numba
    howell_reduce = howell_reduce_numba
    hurwitz_em = hurwitz_em_numba
else:
    gr_mul_mod = gr_mul_mod_numpy
    howell_form = howell_form_numpy
    howell_reduce = howell_reduce_numpy
    hurwitz_em = hurwitz_em_numpy
