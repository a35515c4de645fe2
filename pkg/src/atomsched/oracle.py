"""Global optimization by direct enumeration of every joint schedule.

This is the ground truth the relaxation bounds are validated against. The
scan is embarrassingly parallel over contiguous mixed-radix index ranges;
per-range results are pure functions of the range, so the merged outcome is
identical for any worker count. Ties are broken toward the lexicographically
smallest schedule, comparing starts by their pre-modulo window position (so a
10 PM start orders before a midnight start of the same wrapped window).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import TooLargeError
from .model import (
    ProblemInstance,
    enumeration_size,
    instance_total_energy,
    start_sets,
)
from .objectives import ObjectiveKind

DEFAULT_LIMIT = 100_000_000
WORKER_CAP_ENV = "ATOMSCHED_MAX_WORKERS"

_MIN_PARALLEL_SIZE = 1 << 16
_CHUNKS_PER_WORKER = 8


@dataclass(frozen=True)
class OracleResult:
    schedule: tuple[int, ...]
    objective_value: float
    evaluations: int
    objective: ObjectiveKind


def resolve_workers(requested: int | None = None) -> int:
    """Worker count for parallel scans, capped by ATOMSCHED_MAX_WORKERS."""
    workers = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(WORKER_CAP_ENV, "").strip()
    if cap:
        workers = min(workers, int(cap))
    return max(1, workers)


def pack_instance(instance: ProblemInstance):
    """Flatten start sets and energy patterns into kernel-ready arrays."""
    sets_ = start_sets(instance)
    radices = np.asarray([len(s) for s in sets_], dtype=np.int64)
    starts_flat = np.concatenate([np.asarray(s, dtype=np.int64) for s in sets_])
    starts_off = np.concatenate([[0], np.cumsum(radices[:-1])]).astype(np.int64)
    gammas = [np.asarray(a.energy_pattern) for a in instance.appliances]
    durations = np.asarray([a.duration for a in instance.appliances], dtype=np.int64)
    gammas_flat = np.concatenate(gammas)
    gamma_off = np.concatenate([[0], np.cumsum(durations[:-1])]).astype(np.int64)
    return radices, starts_flat, starts_off, gammas_flat, gamma_off, durations


def _decode_schedule(instance: ProblemInstance, index: int) -> tuple[int, ...]:
    sets_ = start_sets(instance)
    digits = []
    rem = index
    for starts in reversed(sets_):
        digits.append(rem % len(starts))
        rem //= len(starts)
    digits.reverse()
    return tuple(sets_[n][d] for n, d in enumerate(digits))


def brute_force(
    instance: ProblemInstance,
    objective: ObjectiveKind,
    limit: int = DEFAULT_LIMIT,
    workers: int | None = None,
) -> OracleResult:
    """Evaluate the objective at every feasible schedule and return the best.

    Refuses instances whose joint start space exceeds ``limit`` evaluations
    (TooLargeError reports the exact size).
    """
    total = enumeration_size(instance)
    if total > limit:
        raise TooLargeError(total, limit)

    packed = pack_instance(instance)
    mode = _kernels.COST if objective is ObjectiveKind.COST else _kernels.PAR
    coeffs = np.asarray(instance.cost_coefficients)
    total_energy = instance_total_energy(instance)
    args = (*packed, instance.horizon, coeffs, mode, total_energy)

    workers = resolve_workers(workers)
    if workers == 1 or total < _MIN_PARALLEL_SIZE:
        best_val, best_idx = _kernels.scan_range(0, total, *args)
    else:
        chunk = -(-total // (workers * _CHUNKS_PER_WORKER))
        ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(lambda r: _kernels.scan_range(r[0], r[1], *args), ranges)
            )
        best_val, best_idx = np.inf, -1
        for val, idx in partials:  # ranges are ascending: ties keep lowest index
            if val < best_val:
                best_val, best_idx = val, idx

    return OracleResult(
        schedule=_decode_schedule(instance, int(best_idx)),
        objective_value=float(best_val),
        evaluations=total,
        objective=objective,
    )
