"""Beat grids, 8-count segmentation, and time/beat/frame conversions."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dancekit.timeline import (
    BEATS_PER_SEGMENT,
    build_beat_grid,
    locate,
    segment_eight_counts,
    time_to_frame,
)


class TestBeatGrid:
    def test_120bpm_four_seconds(self):
        grid = build_beat_grid(120.0, 0.0, 4.0)
        np.testing.assert_allclose(grid.beat_times, np.arange(8) * 0.5, atol=1e-12)

    def test_offset_enumeration(self):
        # 60 bpm from 0.5 s: enumerate t_k < 3 by hand -> 0.5, 1.5, 2.5.
        grid = build_beat_grid(60.0, 0.5, 3.0)
        np.testing.assert_allclose(grid.beat_times, [0.5, 1.5, 2.5], atol=1e-12)

    def test_every_time_below_duration(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            bpm = float(rng.uniform(40, 220))
            duration = float(rng.uniform(1, 90))
            offset = float(rng.uniform(0, min(duration * 0.5, 5.0)))
            grid = build_beat_grid(bpm, offset, duration)
            assert (grid.beat_times < duration).all()
            assert grid.beat_count >= 1
            diffs = np.diff(grid.beat_times)
            np.testing.assert_allclose(diffs, 60.0 / bpm, atol=1e-9)
            # One more beat would land at or past the end.
            assert grid.beat_times[-1] + grid.beat_period_s >= duration - 1e-9

    def test_offset_at_or_past_duration_rejected(self):
        with pytest.raises(ValueError):
            build_beat_grid(120.0, 4.0, 4.0)
        with pytest.raises(ValueError):
            build_beat_grid(120.0, 5.0, 4.0)

    def test_bad_bpm(self):
        with pytest.raises(ValueError):
            build_beat_grid(0.0, 0.0, 4.0)


class TestSegmentation:
    def test_sixteen_beats_two_full_segments(self):
        grid = build_beat_grid(120.0, 0.0, 8.0)
        segs = segment_eight_counts(grid)
        assert len(segs) == 2
        assert (segs[0].start_s, segs[0].end_s) == (0.0, 4.0)
        assert (segs[1].start_s, segs[1].end_s) == (4.0, 8.0)
        assert not segs[0].partial and not segs[1].partial
        assert segs[0].beat_indices == tuple(range(8))
        assert segs[1].beat_indices == tuple(range(8, 16))

    def test_exactly_eight_beats_single_full_segment(self):
        grid = build_beat_grid(120.0, 0.0, 4.0)
        segs = segment_eight_counts(grid)
        assert len(segs) == 1
        assert not segs[0].partial
        assert len(segs[0].beat_indices) == 8

    def test_ten_beats_trailing_partial(self):
        # 10 beats at 60 bpm over 10 s: second segment holds beats 8, 9.
        grid = build_beat_grid(60.0, 0.0, 10.0)
        assert grid.beat_count == 10
        segs = segment_eight_counts(grid)
        assert len(segs) == 2
        assert segs[1].beat_indices == (8, 9)
        assert segs[1].partial

    def test_truncated_final_segment_flagged_partial(self):
        # 8 beats but the grid ends early: span < 8 periods -> partial.
        grid = build_beat_grid(60.0, 0.0, 7.7)
        assert grid.beat_count == 8
        segs = segment_eight_counts(grid)
        assert len(segs) == 1
        assert segs[0].partial

    def test_disjoint_ordered_union(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            bpm = float(rng.uniform(60, 200))
            duration = float(rng.uniform(2, 60))
            offset = float(rng.uniform(0, min(1.0, duration / 2)))
            grid = build_beat_grid(bpm, offset, duration)
            segs = segment_eight_counts(grid)
            assert segs[0].start_s == pytest.approx(offset, abs=1e-12)
            assert segs[-1].end_s == pytest.approx(duration, abs=1e-12)
            for a, b in zip(segs, segs[1:]):
                assert a.end_s == pytest.approx(b.start_s, abs=1e-12)
                assert a.index + 1 == b.index
            for seg in segs[:-1]:
                assert not seg.partial
                assert seg.end_s - seg.start_s == pytest.approx(8 * 60.0 / bpm, abs=1e-9)

    def test_full_segments_span_eight_periods(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            bpm = float(rng.uniform(60, 200))
            duration = float(rng.uniform(5, 60))
            grid = build_beat_grid(bpm, 0.0, duration)
            for seg in segment_eight_counts(grid):
                if not seg.partial:
                    assert seg.end_s - seg.start_s == pytest.approx(8 * 60.0 / bpm, abs=1e-9)


class TestLocate:
    def test_time_zero(self):
        grid = build_beat_grid(120.0, 0.0, 8.0)
        segs = segment_eight_counts(grid)
        assert locate(grid, segs, 0.0) == (0, 1, 0.0)

    def test_segment_one_count_one_mid_beat(self):
        # Beat 8 spans 4.0..4.5 s, so t = 4.25 is count 1 at phase 0.5.
        grid = build_beat_grid(120.0, 0.0, 8.0)
        segs = segment_eight_counts(grid)
        seg, count, phase = locate(grid, segs, 4.25)
        assert (seg, count) == (1, 1)
        assert phase == pytest.approx(0.5, abs=1e-12)

    def test_preroll_clamps(self):
        grid = build_beat_grid(120.0, 1.0, 8.0)
        segs = segment_eight_counts(grid)
        assert locate(grid, segs, 0.25) == (0, 1, 0.0)

    def test_out_of_range(self):
        grid = build_beat_grid(120.0, 0.0, 8.0)
        segs = segment_eight_counts(grid)
        with pytest.raises(ValueError):
            locate(grid, segs, 8.0)
        with pytest.raises(ValueError):
            locate(grid, segs, -0.1)

    def test_beat_times_round_trip(self):
        rng = np.random.default_rng(53)
        for _ in range(20):
            bpm = float(rng.uniform(60, 200))
            duration = float(rng.uniform(5, 40))
            offset = float(rng.uniform(0, 2))
            grid = build_beat_grid(bpm, min(offset, duration / 2), duration)
            segs = segment_eight_counts(grid)
            for k, t in enumerate(grid.beat_times):
                seg, count, phase = locate(grid, segs, float(t))
                assert phase == 0.0
                assert count == 1 + k % BEATS_PER_SEGMENT
                assert seg == min(k // BEATS_PER_SEGMENT, len(segs) - 1)

    def test_monotone_in_time(self):
        grid = build_beat_grid(93.0, 0.3, 21.0)
        segs = segment_eight_counts(grid)
        last = (0, 0)
        for t in np.linspace(0.0, 20.999, 500):
            seg, count, phase = locate(grid, segs, float(t))
            if t >= grid.offset_s:
                beat = int((t - grid.offset_s) / grid.beat_period_s)
                key = (seg, beat)
                assert key >= last
                last = key
            assert 0.0 <= phase < 1.0


class TestTimeToFrame:
    def test_examples(self):
        assert time_to_frame(0.0, 30.0) == 0
        assert time_to_frame(1 / 30, 30.0) == 1
        assert time_to_frame(0.999, 30.0) == 29  # floor(29.97)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            time_to_frame(-0.01, 30.0)

    def test_floor_semantics(self):
        assert time_to_frame(0.5, 30.0) == 15
        assert time_to_frame(0.49999, 30.0) == 14
