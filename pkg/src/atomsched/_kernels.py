"""Enumeration kernels: scan a contiguous range of joint schedules.

Joint schedules are indexed in mixed-radix order (user 0 is the most
significant digit; each digit selects a start from the user's feasible start
tuple). Both kernels return the minimum objective over an index range and the
first index attaining it, which makes range splits merge deterministically.

Two interchangeable implementations:

* a numba @njit kernel that walks the range with incremental per-user prefix
  loads (amortized O(duration) per schedule), and
* a chunked pure-numpy evaluator that rebuilds every schedule's load from
  scratch.

Each prefix level is rebuilt level-by-level whenever its digit changes, so
the float additions per slot always happen in user order: both paths produce
bit-identical values and the scan result does not depend on how the range was
partitioned. Set ATOMSCHED_DISABLE_NUMBA=1 to force the numpy path (the
numpy path is also used when numba is not installed).

Objective codes: 0 = quadratic cost (cents), 1 = peak-to-average ratio.
"""

from __future__ import annotations

import os

import numpy as np

COST = 0
PAR = 1

_DISABLE_ENV = "ATOMSCHED_DISABLE_NUMBA"
_NUMPY_CHUNK = 1 << 15


def _numba_disabled() -> bool:
    return os.environ.get(_DISABLE_ENV, "").strip().lower() in {"1", "true", "yes"}


def scan_range_numpy(
    lo: int,
    hi: int,
    radices: np.ndarray,
    starts_flat: np.ndarray,
    starts_off: np.ndarray,
    gammas_flat: np.ndarray,
    gamma_off: np.ndarray,
    durations: np.ndarray,
    horizon: int,
    coeffs: np.ndarray,
    mode: int,
    total_energy: float,
) -> tuple[float, int]:
    """Vectorized from-scratch evaluation of schedules lo..hi-1."""
    n_users = len(radices)
    best_val = np.inf
    best_idx = -1
    for c0 in range(lo, hi, _NUMPY_CHUNK):
        c1 = min(c0 + _NUMPY_CHUNK, hi)
        count = c1 - c0
        rem = np.arange(c0, c1, dtype=np.int64)
        digits = [np.empty(0)] * n_users
        for n in range(n_users - 1, -1, -1):
            digits[n] = rem % radices[n]
            rem //= radices[n]
        loads = np.zeros((count, horizon))
        rows = np.arange(count)[:, None]
        for n in range(n_users):
            s = starts_flat[starts_off[n] + digits[n]]
            d = int(durations[n])
            cols = (s[:, None] + np.arange(d, dtype=np.int64)[None, :]) % horizon
            loads[rows, cols] += gammas_flat[gamma_off[n] : gamma_off[n] + d][None, :]
        if mode == COST:
            vals = np.zeros(count)
            for h in range(horizon):
                vals += coeffs[h] * loads[:, h] * loads[:, h]
        else:
            peak = loads[:, 0].copy()
            for h in range(1, horizon):
                np.maximum(peak, loads[:, h], out=peak)
            vals = (horizon * peak) / total_energy
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_idx = c0 + k
    return best_val, best_idx


def _scan_range_sequential(
    lo,
    hi,
    radices,
    starts_flat,
    starts_off,
    gammas_flat,
    gamma_off,
    durations,
    horizon,
    coeffs,
    mode,
    total_energy,
):
    n_users = radices.shape[0]
    digits = np.empty(n_users, dtype=np.int64)
    rem = lo
    for n in range(n_users - 1, -1, -1):
        digits[n] = rem % radices[n]
        rem //= radices[n]

    # prefix[n] = load of users 0..n-1; level n+1 is rebuilt from level n
    # whenever digit n changes, keeping per-slot additions in user order
    prefix = np.zeros((n_users + 1, horizon))
    for m in range(n_users):
        for h in range(horizon):
            prefix[m + 1, h] = prefix[m, h]
        s = starts_flat[starts_off[m] + digits[m]]
        for d in range(durations[m]):
            prefix[m + 1, (s + d) % horizon] += gammas_flat[gamma_off[m] + d]

    best_val = np.inf
    best_idx = np.int64(-1)
    idx = lo
    while True:
        if mode == COST:
            val = 0.0
            for h in range(horizon):
                val += coeffs[h] * prefix[n_users, h] * prefix[n_users, h]
        else:
            peak = prefix[n_users, 0]
            for h in range(1, horizon):
                if prefix[n_users, h] > peak:
                    peak = prefix[n_users, h]
            val = (horizon * peak) / total_energy
        if val < best_val:
            best_val = val
            best_idx = idx
        idx += 1
        if idx >= hi:
            break
        n = n_users - 1
        while digits[n] + 1 >= radices[n]:
            digits[n] = 0
            n -= 1
        digits[n] += 1
        for m in range(n, n_users):
            for h in range(horizon):
                prefix[m + 1, h] = prefix[m, h]
            s = starts_flat[starts_off[m] + digits[m]]
            for d in range(durations[m]):
                prefix[m + 1, (s + d) % horizon] += gammas_flat[gamma_off[m] + d]
    return best_val, best_idx


try:
    if _numba_disabled():
        raise ImportError("numba disabled via environment")
    import numba

    scan_range_numba = numba.njit(cache=True, nogil=True)(_scan_range_sequential)
    NUMBA_AVAILABLE = True
except ImportError:
    scan_range_numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE


def active_backend() -> str:
    return "numba" if USE_NUMBA and scan_range_numba is not None else "numpy"


def scan_range(lo: int, hi: int, *args) -> tuple[float, int]:
    """Dispatch one range scan to the active backend."""
    if USE_NUMBA and scan_range_numba is not None:
        val, idx = scan_range_numba(lo, hi, *args)
        return float(val), int(idx)
    return scan_range_numpy(lo, hi, *args)
