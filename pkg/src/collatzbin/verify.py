"""Batch convergence checks over contiguous ranges, with checkpoints.

The engine walks every n in [lo, hi) to 1 (or to a step cap), recording
the stopping time, the orbit peak, and the digit class, then folds chunk
results into one report. Internally it runs on machine integers under
numpy with two escape hatches: values below a fixed table bound resolve
through precomputed stopping-time/peak tables, and values at risk of
overflowing 64 bits fall back to plain Python integers. The bound and the
tables depend only on (hi, step_cap), and chunks are pure functions of
their endpoints, so the merged report is identical for any chunk size,
any worker count, and across checkpoint interrupt/resume.

Truncation (cap reached before 1) is data, never an error: truncated
inputs are listed in the report and excluded from the aggregates.
Argmax ties go to the smaller n; peaks of truncated walks do not count.

Checkpoint files are versioned line-oriented text, written atomically
(temp file then rename) at chunk boundaries only.
"""

from __future__ import annotations

import multiprocessing
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np

from .bitnat import BinaryNat
from .classify import NumberClass
from .collatz import cycle_check
from .errors import CapExceeded, CheckpointError, DomainError

__all__ = [
    "DEFAULT_STEP_CAP",
    "DEFAULT_CHUNK_SIZE",
    "BASE_TABLE_BOUND",
    "CHECKPOINT_VERSION",
    "RangeReport",
    "Checkpoint",
    "verify_range",
    "checkpoint_save",
    "checkpoint_load",
    "checkpoint_resume",
    "summarize",
]

DEFAULT_STEP_CAP = 10**5
DEFAULT_CHUNK_SIZE = 1 << 16
BASE_TABLE_BOUND = 1 << 20
CHECKPOINT_VERSION = 1

# largest value whose 3v+1 still fits in int64
_INT64_SAFE = (2**63 - 2) // 3
# histogram order, fixed for serialization
_HIST_ORDER = (
    NumberClass.ORIGIN,
    NumberClass.PURE_EVEN,
    NumberClass.PURE_ODD,
    NumberClass.MIXED_EVEN,
    NumberClass.MIXED_ODD,
)

IntLike = Union[int, BinaryNat]


@dataclass(frozen=True, slots=True)
class RangeReport:
    """Aggregated outcome of one verified range [lo, hi)."""

    lo: BinaryNat
    hi: BinaryNat
    step_cap: int
    verified_count: int
    max_stopping_time: Optional[int]
    max_stopping_time_at: Optional[BinaryNat]
    max_excursion: Optional[BinaryNat]
    max_excursion_at: Optional[BinaryNat]
    class_histogram: dict[NumberClass, int]
    truncated_inputs: tuple[BinaryNat, ...]


@dataclass(slots=True)
class Checkpoint:
    """Mutable run state; everything needed to continue at a chunk boundary."""

    format_version: int
    lo: int
    hi: int
    step_cap: int
    chunk_size: int
    next_unprocessed: int
    verified_count: int
    max_stopping_time: Optional[int]
    max_stopping_time_at: Optional[int]
    max_excursion: Optional[int]
    max_excursion_at: Optional[int]
    histogram: tuple[int, int, int, int, int]
    truncated: list[int]


class _ChunkStats(NamedTuple):
    lo: int
    hi: int
    verified: int
    max_sigma: Optional[int]
    max_sigma_at: Optional[int]
    max_peak: Optional[int]
    max_peak_at: Optional[int]
    hist: tuple[int, int, int, int, int]
    truncated: tuple[int, ...]


# ---------------------------------------------------------------------------
# base tables, shared with forked workers through module globals

_SIG: Optional[np.ndarray] = None
_PK: Optional[np.ndarray] = None
_BOUND = 0
_CAP = 0


def _ensure_tables(bound: int, cap: int) -> None:
    """Stopping times and orbit peaks for all n < bound, memoized walks.

    sig[n] is the exact stopping time whenever the walk from n resolves
    within cap steps (directly or through earlier entries), else -1.
    pk[n] is the full-orbit peak for resolved entries. Entries are built
    in ascending order, so the tables are a pure function of (bound, cap).
    """
    global _SIG, _PK, _BOUND, _CAP
    if _SIG is not None and _BOUND == bound and _CAP == cap:
        return
    sig = np.full(bound, -1, dtype=np.int64)
    pk = np.zeros(bound, dtype=np.int64)
    sig[1] = 0
    pk[1] = 1
    for n in range(2, bound):
        if sig[n] >= 0:
            continue
        path = []
        v = n
        while not (v < bound and sig[v] >= 0):
            path.append(v)
            v = 3 * v + 1 if v & 1 else v >> 1
            if len(path) > cap:
                break
        else:
            s = int(sig[v])
            p = int(pk[v])
            for u in reversed(path):
                s += 1
                if u > p:
                    p = u
                if u < bound:
                    sig[u] = s
                    pk[u] = p
            continue
        # cap hit with no resolution: only n itself is known unresolved
    _SIG, _PK, _BOUND, _CAP = sig, pk, bound, cap


def _walk_python(v: int, steps: int, peak: int) -> tuple[Optional[int], int]:
    """Finish one orbit on plain integers; (stopping time or None, peak)."""
    while True:
        if v < _BOUND:
            s = int(_SIG[v])
            if s < 0:
                return None, peak
            total = steps + s
            peak = max(peak, int(_PK[v]))
            return (total, peak) if total <= _CAP else (None, peak)
        if steps >= _CAP:
            return None, peak
        v = 3 * v + 1 if v & 1 else v >> 1
        steps += 1
        if v > peak:
            peak = v


# ---------------------------------------------------------------------------
# per-chunk statistics


def _classify_counts(ns: np.ndarray) -> tuple[int, int, int, int, int]:
    # order matches _HIST_ORDER
    odd = (ns & 1) == 1
    origin = ns == 1
    pure_even = ((ns & (ns - 1)) == 0) & ~origin
    pure_odd = ((ns & (ns + 1)) == 0) & ~origin
    mixed_odd = odd & ~pure_odd & ~origin
    mixed_even = ~odd & ~pure_even
    return (
        int(origin.sum()),
        int(pure_even.sum()),
        int(pure_odd.sum()),
        int(mixed_even.sum()),
        int(mixed_odd.sum()),
    )


def _class_slot(n: int) -> int:
    if n == 1:
        return 0
    if n & (n - 1) == 0:
        return 1
    if n & (n + 1) == 0:
        return 2
    return 4 if n & 1 else 3


def _finish_chunk(
    lo: int,
    hi: int,
    hist: tuple[int, int, int, int, int],
    results: "list[tuple[int, Optional[int], Optional[int]]]",
) -> _ChunkStats:
    """Fold per-n (n, sigma, peak) rows, ascending, into chunk stats."""
    verified = 0
    max_sigma = max_sigma_at = None
    max_peak = max_peak_at = None
    truncated = []
    for n, sigma, peak in results:
        if sigma is None:
            truncated.append(n)
            continue
        verified += 1
        if max_sigma is None or sigma > max_sigma:
            max_sigma, max_sigma_at = sigma, n
        if max_peak is None or peak > max_peak:
            max_peak, max_peak_at = peak, n
    return _ChunkStats(
        lo, hi, verified, max_sigma, max_sigma_at, max_peak, max_peak_at, hist, tuple(truncated)
    )


def _chunk_stats_numpy(lo: int, hi: int) -> _ChunkStats:
    ns = np.arange(lo, hi, dtype=np.int64)
    size = ns.size
    hist = _classify_counts(ns)
    sig = np.empty(size, dtype=np.int64)
    pk = np.empty(size, dtype=np.int64)
    v = ns.copy()
    steps = np.zeros(size, dtype=np.int64)
    peak = ns.copy()
    big: dict[int, tuple[Optional[int], int]] = {}
    active = np.arange(size)
    while active.size:
        done = v[active] < _BOUND
        if done.any():
            di = active[done]
            s = _SIG[v[di]]
            sig[di] = np.where(s < 0, np.int64(-1), steps[di] + s)
            pk[di] = np.maximum(peak[di], _PK[v[di]])
            active = active[~done]
            if not active.size:
                break
        over = steps[active] >= _CAP
        if over.any():
            oi = active[over]
            sig[oi] = -1
            pk[oi] = peak[oi]
            active = active[~over]
            if not active.size:
                break
        huge = v[active] > _INT64_SAFE
        if huge.any():
            for pos in active[huge].tolist():
                s_total, p_total = _walk_python(int(v[pos]), int(steps[pos]), int(peak[pos]))
                big[pos] = (s_total, p_total)
                sig[pos] = -1 if s_total is None else s_total
                pk[pos] = 0
            active = active[~huge]
            if not active.size:
                break
        vv = v[active]
        nxt = np.where((vv & 1) == 1, 3 * vv + 1, vv >> 1)
        v[active] = nxt
        steps[active] += 1
        peak[active] = np.maximum(peak[active], nxt)
    trunc_mask = (sig < 0) | (sig > _CAP)
    conv_idx = np.flatnonzero(~trunc_mask)
    verified = int(conv_idx.size)
    max_sigma = max_sigma_at = max_peak = max_peak_at = None
    if verified:
        # argmax first occurrence = smallest n, the tie rule
        j = conv_idx[int(np.argmax(sig[conv_idx]))]
        max_sigma, max_sigma_at = int(sig[j]), int(ns[j])
        jj = conv_idx[int(np.argmax(pk[conv_idx]))]
        max_peak, max_peak_at = int(pk[jj]), int(ns[jj])
        for pos in sorted(big):
            s_total, p_total = big[pos]
            if s_total is None:
                continue
            n_pos = int(ns[pos])
            if p_total > max_peak or (p_total == max_peak and n_pos < max_peak_at):
                max_peak, max_peak_at = p_total, n_pos
    truncated = tuple(int(x) for x in ns[trunc_mask])
    return _ChunkStats(
        lo, hi, verified, max_sigma, max_sigma_at, max_peak, max_peak_at, hist, truncated
    )


def _chunk_stats_python(lo: int, hi: int) -> _ChunkStats:
    hist = [0, 0, 0, 0, 0]
    results = []
    for n in range(lo, hi):
        hist[_class_slot(n)] += 1
        sigma, peak = _walk_python(n, 0, n)
        results.append((n, sigma, peak if sigma is not None else None))
    return _finish_chunk(lo, hi, tuple(hist), results)


def _chunk_stats(bounds: tuple[int, int]) -> _ChunkStats:
    lo, hi = bounds
    if hi <= 2**63:
        return _chunk_stats_numpy(lo, hi)
    return _chunk_stats_python(lo, hi)


# ---------------------------------------------------------------------------
# merging, running, checkpointing


def _merge(state: Checkpoint, c: _ChunkStats) -> None:
    # chunks arrive in ascending order; strict > keeps the smaller argmax n
    state.verified_count += c.verified
    if c.max_sigma is not None and (
        state.max_stopping_time is None or c.max_sigma > state.max_stopping_time
    ):
        state.max_stopping_time = c.max_sigma
        state.max_stopping_time_at = c.max_sigma_at
    if c.max_peak is not None and (
        state.max_excursion is None or c.max_peak > state.max_excursion
    ):
        state.max_excursion = c.max_peak
        state.max_excursion_at = c.max_peak_at
    state.histogram = tuple(a + b for a, b in zip(state.histogram, c.hist))
    state.truncated.extend(c.truncated)
    state.next_unprocessed = c.hi


def _as_int(n: IntLike, name: str) -> int:
    if isinstance(n, BinaryNat):
        return n.to_int()
    if isinstance(n, int):
        return n
    raise DomainError(f"{name} must be an integer value, got {type(n).__name__}")


def _sample_cycles(state: Checkpoint, count: int) -> None:
    """Spot-check the tail cycle on a seeded sample of the range.

    A failure here would falsify the {1,4,2} tail on a converged input,
    so it raises; truncated samples are skipped.
    """
    if count <= 0:
        return
    rng = random.Random(f"cycle:{state.lo}:{state.hi}:{state.step_cap}")
    for _ in range(count):
        n = rng.randrange(state.lo, state.hi)
        try:
            ok = cycle_check(BinaryNat.from_int(n), cap=state.step_cap)
        except CapExceeded:
            continue
        if not ok:
            raise RuntimeError(f"tail cycle broken at {n}")


def _report(state: Checkpoint) -> RangeReport:
    hist = {cls: state.histogram[i] for i, cls in enumerate(_HIST_ORDER)}
    return RangeReport(
        lo=BinaryNat.from_int(state.lo),
        hi=BinaryNat.from_int(state.hi),
        step_cap=state.step_cap,
        verified_count=state.verified_count,
        max_stopping_time=state.max_stopping_time,
        max_stopping_time_at=(
            None if state.max_stopping_time_at is None
            else BinaryNat.from_int(state.max_stopping_time_at)
        ),
        max_excursion=(
            None if state.max_excursion is None else BinaryNat.from_int(state.max_excursion)
        ),
        max_excursion_at=(
            None if state.max_excursion_at is None
            else BinaryNat.from_int(state.max_excursion_at)
        ),
        class_histogram=hist,
        truncated_inputs=tuple(BinaryNat.from_int(t) for t in state.truncated),
    )


def _run(
    state: Checkpoint,
    jobs: int,
    checkpoint_path: Optional[Union[str, Path]],
    cycle_samples: int,
) -> RangeReport:
    _ensure_tables(min(BASE_TABLE_BOUND, state.hi), state.step_cap)
    chunks = [
        (a, min(a + state.chunk_size, state.hi))
        for a in range(state.next_unprocessed, state.hi, state.chunk_size)
    ]

    def consume(stats_iter):
        for stats in stats_iter:
            _merge(state, stats)
            if checkpoint_path is not None:
                checkpoint_save(state, checkpoint_path)

    if jobs > 1 and len(chunks) > 1:
        # tables are inherited by forked workers; results stream in order
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            consume(pool.map(_chunk_stats, chunks))
    else:
        consume(map(_chunk_stats, chunks))
    if checkpoint_path is not None:
        checkpoint_save(state, checkpoint_path)
    _sample_cycles(state, cycle_samples)
    return _report(state)


def verify_range(
    lo: IntLike,
    hi: IntLike,
    step_cap: int = DEFAULT_STEP_CAP,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    jobs: int = 1,
    checkpoint_path: Optional[Union[str, Path]] = None,
    cycle_samples: int = 1000,
) -> RangeReport:
    """Verify every n in [lo, hi); see the module notes for guarantees."""
    lo_i = _as_int(lo, "lo")
    hi_i = _as_int(hi, "hi")
    if lo_i < 1 or hi_i <= lo_i:
        raise DomainError(f"need 1 <= lo < hi, got [{lo_i}, {hi_i})")
    if step_cap < 1:
        raise DomainError(f"step_cap must be >= 1, got {step_cap}")
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be >= 1, got {chunk_size}")
    if jobs < 1:
        raise DomainError(f"jobs must be >= 1, got {jobs}")
    state = Checkpoint(
        format_version=CHECKPOINT_VERSION,
        lo=lo_i,
        hi=hi_i,
        step_cap=step_cap,
        chunk_size=chunk_size,
        next_unprocessed=lo_i,
        verified_count=0,
        max_stopping_time=None,
        max_stopping_time_at=None,
        max_excursion=None,
        max_excursion_at=None,
        histogram=(0, 0, 0, 0, 0),
        truncated=[],
    )
    return _run(state, jobs, checkpoint_path, cycle_samples)


def _fmt_opt_pair(value: Optional[int], at: Optional[int]) -> str:
    if value is None:
        return "- -"
    return f"{value} {at}"


def checkpoint_save(state: Checkpoint, path: Union[str, Path]) -> None:
    """Atomically write the run state: temp file in place, then rename."""
    path = Path(path)
    lines = [
        f"collatzbin-checkpoint v{state.format_version}",
        f"range {state.lo} {state.hi}",
        f"step_cap {state.step_cap}",
        f"chunk_size {state.chunk_size}",
        f"next {state.next_unprocessed}",
        f"verified {state.verified_count}",
        f"max_sigma {_fmt_opt_pair(state.max_stopping_time, state.max_stopping_time_at)}",
        f"max_excursion {_fmt_opt_pair(state.max_excursion, state.max_excursion_at)}",
        "hist " + " ".join(str(c) for c in state.histogram),
    ]
    lines.extend(f"trunc {t}" for t in state.truncated)
    lines.append("end")
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def _parse_opt_pair(rest: list[str]) -> tuple[Optional[int], Optional[int]]:
    if rest == ["-", "-"]:
        return None, None
    a, b = rest
    return int(a), int(b)


def checkpoint_load(path: Union[str, Path]) -> Checkpoint:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise CheckpointError(f"empty checkpoint file {path}")
    head = lines[0]
    if head != f"collatzbin-checkpoint v{CHECKPOINT_VERSION}":
        raise CheckpointError(
            f"unsupported checkpoint header {head!r}; this build reads v{CHECKPOINT_VERSION}"
        )
    if lines[-1] != "end":
        raise CheckpointError(f"checkpoint {path} is incomplete (no end marker)")
    try:
        fields = {}
        truncated = []
        for line in lines[1:-1]:
            key, *rest = line.split(" ")
            if key == "trunc":
                truncated.append(int(rest[0]))
            else:
                fields[key] = rest
        lo, hi = (int(x) for x in fields["range"])
        sig_pair = _parse_opt_pair(fields["max_sigma"])
        exc_pair = _parse_opt_pair(fields["max_excursion"])
        hist = tuple(int(x) for x in fields["hist"])
        if len(hist) != 5:
            raise ValueError(f"expected 5 histogram buckets, got {len(hist)}")
        return Checkpoint(
            format_version=CHECKPOINT_VERSION,
            lo=lo,
            hi=hi,
            step_cap=int(fields["step_cap"][0]),
            chunk_size=int(fields["chunk_size"][0]),
            next_unprocessed=int(fields["next"][0]),
            verified_count=int(fields["verified"][0]),
            max_stopping_time=sig_pair[0],
            max_stopping_time_at=sig_pair[1],
            max_excursion=exc_pair[0],
            max_excursion_at=exc_pair[1],
            histogram=hist,
            truncated=truncated,
        )
    except (KeyError, ValueError, IndexError) as exc:
        raise CheckpointError(f"malformed checkpoint {path}: {exc}") from exc


def checkpoint_resume(
    path: Union[str, Path],
    jobs: int = 1,
    cycle_samples: int = 1000,
) -> RangeReport:
    """Continue an interrupted run; the final report matches an unbroken one."""
    state = checkpoint_load(path)
    return _run(state, jobs, path, cycle_samples)


def summarize(report: RangeReport) -> str:
    """Fixed-layout text summary; byte-identical for equal reports."""
    sig = "none"
    if report.max_stopping_time is not None:
        sig = f"{report.max_stopping_time} at {report.max_stopping_time_at.to_decimal()}"
    exc = "none"
    if report.max_excursion is not None:
        exc = f"{report.max_excursion.to_decimal()} at {report.max_excursion_at.to_decimal()}"
    classes = ", ".join(
        f"{cls.value} {report.class_histogram[cls]}" for cls in _HIST_ORDER
    )
    lines = [
        f"range: [{report.lo.to_decimal()}, {report.hi.to_decimal()})",
        f"step cap: {report.step_cap}",
        f"verified: {report.verified_count}",
        f"truncated: {len(report.truncated_inputs)}",
        f"max stopping time: {sig}",
        f"max excursion: {exc}",
        f"classes: {classes}",
    ]
    if report.truncated_inputs:
        lines.append(
            "truncated inputs: "
            + " ".join(t.to_decimal() for t in report.truncated_inputs)
        )
    return "\n".join(lines) + "\n"
