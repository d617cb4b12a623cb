"""Range engine: oracles, determinism, checkpoints."""

import random

import pytest

from collatzbin import (
    BinaryNat,
    CheckpointError,
    DomainError,
    NumberClass,
    checkpoint_resume,
    stopping_time,
    summarize,
    verify_range,
)
from collatzbin.verify import (
    CHECKPOINT_VERSION,
    Checkpoint,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_STEP_CAP,
    checkpoint_load,
    checkpoint_save,
)
from collatzbin import verify as verify_mod

from conftest import bn


def orbit_oracle(n: int, cap: int = 10**5):
    """(stopping time or None, peak) on plain integers."""
    v, steps, peak = n, 0, n
    while v != 1:
        v = 3 * v + 1 if v & 1 else v >> 1
        steps += 1
        peak = max(peak, v)
        if steps > cap:
            return None, peak
    return steps, peak


def test_tiny_ranges():
    r = verify_range(1, 10, cycle_samples=20)
    assert r.verified_count == 9
    assert not r.truncated_inputs
    # brute force over 1..9: sigma(9) = 19 tops sigma(7) = 16
    best = max(range(1, 10), key=lambda n: (orbit_oracle(n)[0], -n))
    assert (r.max_stopping_time, r.max_stopping_time_at) == (19, bn(9))
    assert r.max_stopping_time == orbit_oracle(best)[0]
    # 7 and 9 both peak at 52; the tie goes to the smaller n
    assert (r.max_excursion, r.max_excursion_at) == (bn(52), bn(7))
    assert r.class_histogram[NumberClass.ORIGIN] == 1
    assert sum(r.class_histogram.values()) == 9

    r1 = verify_range(1, 2, cycle_samples=5)
    assert r1.verified_count == 1
    assert (r1.max_stopping_time, r1.max_stopping_time_at) == (0, bn(1))
    assert (r1.max_excursion, r1.max_excursion_at) == (bn(1), bn(1))

    r255 = verify_range(255, 256, cycle_samples=1)
    assert r255.max_stopping_time == 47
    assert r255.max_excursion == bn(13120)


def test_invalid_ranges():
    with pytest.raises(DomainError):
        verify_range(0, 5)
    with pytest.raises(DomainError):
        verify_range(5, 5)
    with pytest.raises(DomainError):
        verify_range(1, 10, step_cap=0)
    with pytest.raises(DomainError):
        verify_range(1, 10, chunk_size=0)
    with pytest.raises(DomainError):
        verify_range(1, 10, jobs=0)


def test_report_independent_of_chunk_size():
    reports = [
        verify_range(1, 20000, chunk_size=c, cycle_samples=10)
        for c in (64, 999, 4096, DEFAULT_CHUNK_SIZE)
    ]
    assert all(r == reports[0] for r in reports[1:])


def test_report_independent_of_workers():
    serial = verify_range(1, 200000, cycle_samples=10)
    for jobs in (2, 4):
        assert verify_range(1, 200000, jobs=jobs, cycle_samples=10) == serial


def test_window_reports_match_oracle():
    rng = random.Random(31337)
    for _ in range(60):
        n = rng.randrange(2, 10**6)
        r = verify_range(n, n + 1, cycle_samples=0)
        sigma, peak = orbit_oracle(n)
        assert r.max_stopping_time == sigma
        assert r.max_excursion == bn(peak)
        assert r.verified_count == 1


def test_engine_agrees_with_bit_string_walk():
    # dual route: numpy kernel vs the BinaryNat iteration
    rng = random.Random(2024)
    for _ in range(40):
        n = rng.randrange(2, 10**6)
        r = verify_range(n, n + 1, cycle_samples=0)
        assert r.max_stopping_time == stopping_time(bn(n))


def test_truncation_is_reported_not_raised():
    r = verify_range(27, 28, step_cap=5, cycle_samples=0)
    assert r.verified_count == 0
    assert r.truncated_inputs == (bn(27),)
    assert r.max_stopping_time is None and r.max_excursion is None
    assert sum(r.class_histogram.values()) == 1
    text = summarize(r)
    assert "truncated: 1" in text and "truncated inputs: 27" in text


def test_histogram_and_counts_add_up():
    r = verify_range(1, 5000, step_cap=30, cycle_samples=0)
    assert r.verified_count + len(r.truncated_inputs) == 4999
    assert sum(r.class_histogram.values()) == 4999
    # every listed truncation really does exceed the cap
    for t in r.truncated_inputs[:20]:
        assert orbit_oracle(t.to_int(), cap=30)[0] is None


def test_int64_overflow_fallback():
    # orbits straddling 2**62 leave the vectorized path mid-walk
    lo = 2**62 - 2
    r = verify_range(lo, lo + 4, cycle_samples=0)
    assert r.verified_count == 4
    for n in range(lo, lo + 4):
        sigma, peak = orbit_oracle(n)
        assert sigma is not None
        assert r.max_stopping_time >= sigma
    sigmas = {n: orbit_oracle(n)[0] for n in range(lo, lo + 4)}
    peaks = {n: orbit_oracle(n)[1] for n in range(lo, lo + 4)}
    best_sigma = max(sigmas.values())
    expect_at = min(n for n, s in sigmas.items() if s == best_sigma)
    assert (r.max_stopping_time, r.max_stopping_time_at) == (best_sigma, bn(expect_at))
    best_peak = max(peaks.values())
    peak_at = min(n for n, p in peaks.items() if p == best_peak)
    assert (r.max_excursion, r.max_excursion_at) == (bn(best_peak), bn(peak_at))


def test_python_path_beyond_int64():
    # ranges past 2**63 skip numpy entirely
    lo = 2**64 + 1
    r = verify_range(lo, lo + 2, cycle_samples=0)
    assert r.verified_count == 2
    assert r.max_stopping_time == max(orbit_oracle(n)[0] for n in (lo, lo + 1))


def test_summarize_layout():
    r = verify_range(1, 10, cycle_samples=0)
    assert summarize(r) == (
        "range: [1, 10)\n"
        "step cap: 100000\n"
        "verified: 9\n"
        "truncated: 0\n"
        "max stopping time: 19 at 9\n"
        "max excursion: 52 at 7\n"
        "classes: origin 1, pure-even 3, pure-odd 2, mixed-even 1, mixed-odd 2\n"
    )


# -- checkpoints

def _fresh_state(lo, hi, chunk):
    return Checkpoint(
        format_version=CHECKPOINT_VERSION,
        lo=lo,
        hi=hi,
        step_cap=DEFAULT_STEP_CAP,
        chunk_size=chunk,
        next_unprocessed=lo,
        verified_count=0,
        max_stopping_time=None,
        max_stopping_time_at=None,
        max_excursion=None,
        max_excursion_at=None,
        histogram=(0, 0, 0, 0, 0),
        truncated=[],
    )


def test_checkpoint_save_load_roundtrip(tmp_path):
    path = tmp_path / "ck.txt"
    state = _fresh_state(1, 100000, 4096)
    state.verified_count = 17
    state.max_stopping_time = 350
    state.max_stopping_time_at = 77031
    state.truncated = [12345, 999]
    checkpoint_save(state, path)
    assert checkpoint_load(path) == state
    assert not list(tmp_path.glob("*.tmp"))  # rename completed


def test_checkpoint_interrupted_run_matches_straight_run(tmp_path):
    path = tmp_path / "ck.txt"
    chunk = 2048
    state = _fresh_state(1, 20000, chunk)
    verify_mod._ensure_tables(min(verify_mod.BASE_TABLE_BOUND, state.hi), state.step_cap)
    bounds = [
        (a, min(a + chunk, state.hi)) for a in range(state.lo, state.hi, chunk)
    ]
    for b in bounds[:4]:  # simulate dying mid-run
        verify_mod._merge(state, verify_mod._chunk_stats(b))
    checkpoint_save(state, path)
    resumed = checkpoint_resume(path, cycle_samples=10)
    straight = verify_range(1, 20000, chunk_size=chunk, cycle_samples=10)
    assert resumed == straight
    assert summarize(resumed) == summarize(straight)
    # the file now records a finished run
    assert checkpoint_load(path).next_unprocessed == 20000


def test_checkpoint_written_during_verify(tmp_path):
    path = tmp_path / "ck.txt"
    r = verify_range(1, 9000, chunk_size=1000, checkpoint_path=path, cycle_samples=0)
    saved = checkpoint_load(path)
    assert saved.next_unprocessed == 9000
    assert saved.verified_count == r.verified_count


def test_checkpoint_missing_file():
    with pytest.raises(CheckpointError):
        checkpoint_load("/nonexistent/nope.txt")
    with pytest.raises(CheckpointError):
        checkpoint_resume("/nonexistent/nope.txt")


def test_checkpoint_version_mismatch(tmp_path):
    path = tmp_path / "ck.txt"
    state = _fresh_state(1, 100, 10)
    checkpoint_save(state, path)
    text = path.read_text().replace("checkpoint v1", "checkpoint v99")
    path.write_text(text)
    with pytest.raises(CheckpointError, match="v99"):
        checkpoint_load(path)


def test_checkpoint_detects_torn_write(tmp_path):
    path = tmp_path / "ck.txt"
    state = _fresh_state(1, 100, 10)
    checkpoint_save(state, path)
    whole = path.read_text()
    path.write_text(whole[: len(whole) // 2])
    with pytest.raises(CheckpointError):
        checkpoint_load(path)


def test_checkpoint_rejects_garbage(tmp_path):
    path = tmp_path / "ck.txt"
    path.write_text("collatzbin-checkpoint v1\nrange x y\nend\n")
    with pytest.raises(CheckpointError):
        checkpoint_load(path)
