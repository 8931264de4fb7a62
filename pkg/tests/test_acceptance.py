"""End-to-end checks against the published efficiency results."""

import random

import pytest

from empasim.core import RunMode, assemble
from empasim.core.metrics import load_golden_table, run_sample, sweep
from empasim.core.programs import sample_source, vector_for_length
from empasim.core.trace import audit_fifo, audit_no_lost_updates, audit_operation_rate, audit_star_topology

WORD = 0xFFFFFFFF
CLOSED_FORMS = {
    RunMode.NO: lambda length: 22 + 30 * length,
    RunMode.FOR: lambda length: 20 + 11 * length,
    RunMode.SUMUP: lambda length: 32 + length,
}
CLOSED_FORM_LENGTHS = range(1, 502)
# (vector length, S/k, alpha_eff) read off the SUMUP efficiency plot, whose
# abscissa counts one more than the vector length.
SUMUP_PLOT_POINTS = [(1, 0.79, 0.73), (5, 0.77, 0.94), (10, 0.70, 0.96), (30, 0.48, 0.96),
                     (100, 0.74, 0.99), (500, 0.91, 1.00)]

_rng = random.Random(20240607)
RANDOM_VECTORS = [
    [_rng.getrandbits(32) for _ in range(_rng.randint(1, 64))]
    for _ in range(100)
]


def expected_peak_cores(mode: RunMode, length: int) -> int:
    if mode == RunMode.NO:
        return 1
    if mode == RunMode.FOR:
        return 2
    return min(length + 1, 31)


class TestReferenceTable:
    """The efficiency table is reproduced exactly."""

    @pytest.mark.parametrize("row", load_golden_table(), ids=lambda row: f"{row['mode']}-{row['length']}")
    def test_clocks_and_cores(self, timing, row):
        """Test clocks and peak cores of every published row."""
        report = run_sample(RunMode(row["mode"]), vector_for_length(int(row["length"])),
                            timing=timing, check_invariants=True)
        assert report.total_clocks == int(row["clocks"])
        assert report.peak_cores == int(row["k"])

    def test_metrics(self, timing):
        """Test S, S/k and alpha_eff within rounding of the published cells."""
        measured = {(r.length, r.mode.value): r for r in sweep([1, 2, 4, 6], RunMode, timing=timing)}
        for row in load_golden_table():
            result = measured[(int(row["length"]), row["mode"])]
            alpha = 1.0 if result.alpha_eff is None else result.alpha_eff
            assert result.speedup == pytest.approx(float(row["S"]), abs=0.01)
            assert result.s_over_k == pytest.approx(float(row["S_over_k"]), abs=0.01)
            assert alpha == pytest.approx(float(row["alpha_eff"]), abs=0.01)


class TestClosedForms:
    """Clock totals are linear in the vector length."""

    @pytest.mark.parametrize("mode", list(RunMode))
    def test_totals(self, timing, mode):
        """Test totals and peak cores for every length 1..501."""
        for length in CLOSED_FORM_LENGTHS:
            report = run_sample(mode, vector_for_length(length), timing=timing, record_trace=False)
            assert report.total_clocks == CLOSED_FORMS[mode](length), length
            assert report.peak_cores == expected_peak_cores(mode, length), length


class TestEfficiency:
    """SUMUP efficiency curve and saturation."""

    @pytest.mark.parametrize("length,s_over_k,alpha", SUMUP_PLOT_POINTS)
    def test_sumup_plot_points(self, timing, length, s_over_k, alpha):
        """Test the SUMUP S/k and alpha_eff points."""
        rows = {row.mode: row for row in sweep([length], [RunMode.NO, RunMode.SUMUP], timing=timing)}
        assert rows[RunMode.SUMUP].s_over_k == pytest.approx(s_over_k, abs=0.02)
        assert rows[RunMode.SUMUP].alpha_eff == pytest.approx(alpha, abs=0.02)

    def test_s_over_k_turns_back(self, timing):
        """Test S/k falls while cores are added and recovers once k saturates."""
        rows = {row.length: row for row in sweep([2, 30, 500], [RunMode.SUMUP], timing=timing)}
        assert rows[2].s_over_k > rows[30].s_over_k < rows[500].s_over_k

    def test_saturation(self, timing):
        """Test FOR approaches 30/11 and SUMUP approaches 30 at length 2000."""
        rows = {row.mode: row for row in sweep([2000], RunMode, timing=timing)}
        assert rows[RunMode.FOR].speedup == pytest.approx(30 / 11, rel=0.02)
        assert rows[RunMode.FOR].speedup < 30 / 11
        assert rows[RunMode.SUMUP].speedup == pytest.approx(30, rel=0.05)
        assert rows[RunMode.SUMUP].speedup < 30

    @pytest.mark.parametrize("mode", [RunMode.FOR, RunMode.SUMUP])
    def test_speedup_increasing(self, timing, mode):
        """Test speedup grows strictly with the vector length."""
        speedups = [row.speedup for row in sweep([1, 2, 4, 8, 16, 64, 256], [mode], timing=timing)
                    if row.mode == mode]
        assert speedups == sorted(speedups)
        assert len(set(speedups)) == len(speedups)


class TestSemanticEquivalence:
    """All modes compute the same sum as a plain interpreter."""

    @pytest.mark.parametrize("index", range(len(RANDOM_VECTORS)))
    def test_random_vector(self, timing, reference, index):
        """Test the three modes agree with the reference interpreter."""
        values = RANDOM_VECTORS[index]
        expected = sum(values) & WORD
        for mode in RunMode:
            report = run_sample(mode, values, timing=timing, check_invariants=True, record_trace=False)
            assert report.result == expected, mode
        assert reference(assemble(sample_source(RunMode.NO, values)))[0] == expected


class TestRunIntegrity:
    """Trace audits and repeatability."""

    @pytest.mark.parametrize("mode", list(RunMode))
    @pytest.mark.parametrize("length", [1, 2, 4, 6, 31, 40])
    def test_audits(self, timing, mode, length):
        """Test every trace audit on checked runs."""
        report = run_sample(mode, vector_for_length(length), timing=timing, check_invariants=True)
        for audit in (audit_star_topology, audit_operation_rate, audit_fifo, audit_no_lost_updates):
            assert audit(report.trace) == [], audit.__name__

    @pytest.mark.parametrize("mode", list(RunMode))
    def test_deterministic(self, timing, mode):
        """Test identical runs give identical traces."""
        first = run_sample(mode, vector_for_length(12), timing=timing)
        second = run_sample(mode, vector_for_length(12), timing=timing)
        assert [e.to_line() for e in first.trace] == [e.to_line() for e in second.trace]
