import pytest

from sphdesign.core import Mode
from sphdesign.optimize import SolverOptions
from sphdesign.scan import (
    ScanRecord,
    ScanTable,
    bisect_jump,
    detect_jump,
    detect_special,
    exceptional_check,
    load_table,
    save_table,
    scan_n_range,
)


def synthetic_table(flags, n_start=10, mode=Mode.EQUAL_NORM):
    records = []
    for i, zero in enumerate(flags):
        n = n_start + i
        records.append(
            ScanRecord(
                t=2,
                d=3,
                n=n,
                mode=mode,
                best_f=1e-15 * n * n if zero else 0.1 / (i + 1),
                restarts_used=20,
                wall_seconds=float(i),
                is_zero=zero,
            )
        )
    return ScanTable(records=tuple(records), metadata={"seed": 0})


class TestScanNRange:
    def test_t2_d2_equal_norm(self):
        table = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 5, restarts=20,
                             options=SolverOptions(seed=0))
        assert [r.is_zero for r in table.records] == [False, True, True, True]
        assert detect_jump(table) == 3

    def test_t3_d2_first_zero_at_4(self):
        table = scan_n_range(3, 2, Mode.EQUAL_NORM, 2, 5, restarts=20,
                             options=SolverOptions(seed=0))
        zeros = [r.n for r in table.records if r.is_zero]
        assert zeros and zeros[0] == 4

    def test_weighted_best_f_non_increasing(self):
        table = scan_n_range(2, 3, Mode.WEIGHTED, 4, 7, restarts=20,
                             options=SolverOptions(seed=0))
        values = [r.best_f for r in table.records]
        for a, b in zip(values, values[1:]):
            assert b <= a + 1e-12

    def test_resume_reproduces_fresh_run(self):
        opts = SolverOptions(seed=3)
        fresh = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 5, restarts=5, options=opts)
        partial = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 3, restarts=5, options=opts)
        resumed = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 5, restarts=5, options=opts,
                               resume=partial)
        for a, b in zip(fresh.records, resumed.records):
            assert (a.t, a.d, a.n, a.mode, a.best_f, a.restarts_used, a.is_zero) == (
                b.t, b.d, b.n, b.mode, b.best_f, b.restarts_used, b.is_zero)

    def test_more_restarts_never_raise_best(self):
        small = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 4, restarts=3,
                             options=SolverOptions(seed=1), escalate=False)
        large = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 4, restarts=6,
                             options=SolverOptions(seed=1), escalate=False)
        for a, b in zip(small.records, large.records):
            assert b.best_f <= a.best_f
        assert detect_jump(large) == detect_jump(small)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            scan_n_range(2, 2, Mode.EQUAL_NORM, 5, 4, restarts=1)


class TestDetectJump:
    def test_returns_none_for_isolated_zero_at_end_range(self):
        # zeros only at one interior point, nonzero afterwards
        flags = [False, False, True, False, False, False, False, False]
        table = synthetic_table(flags, n_start=118)
        assert detect_jump(table) is None
        assert detect_special(table) == [120]

    def test_all_nonzero(self):
        assert detect_jump(synthetic_table([False] * 4)) is None

    def test_ignores_special_zero_below_jump(self):
        flags = [False, True, False, False, True, True, True]
        table = synthetic_table(flags, n_start=55)
        assert detect_jump(table) == 59
        assert detect_special(table) == [56]

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError):
            detect_jump(ScanTable(records=(), metadata={}))


class TestDetectSpecial:
    def test_isolated_zero_reported(self):
        flags = [False] * 5 + [True] + [False] * 11 + [True, True]
        table = synthetic_table(flags, n_start=55)  # isolated zero at 60
        assert detect_special(table) == [60]
        assert detect_jump(table) == 72  # the all-zero tail is 72..73

    def test_generic_jump_no_special(self):
        flags = [False, False, True, True, True]
        assert detect_special(synthetic_table(flags)) == []


class TestExceptionalCheck:
    def test_true_for_isolated_zero(self):
        table = synthetic_table([False, True, False])
        assert exceptional_check(table, 11)

    def test_false_when_neighbour_zero(self):
        table = synthetic_table([False, True, True])
        assert not exceptional_check(table, 11)

    def test_missing_neighbours_rejected(self):
        table = synthetic_table([False, True, False])
        with pytest.raises(ValueError):
            exceptional_check(table, 10)

    def test_real_case_t2_d3_n6(self):
        table = scan_n_range(2, 3, Mode.EQUAL_NORM, 5, 7, restarts=20,
                             options=SolverOptions(seed=0))
        assert exceptional_check(table, 6)

    def test_real_case_t2_d2_n3_not_exceptional(self):
        table = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 4, restarts=10,
                             options=SolverOptions(seed=0))
        assert not exceptional_check(table, 3)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        table = synthetic_table([False, True, True], mode=Mode.WEIGHTED)
        path = tmp_path / "scan.csv"
        save_table(table, path)
        loaded = load_table(path)
        assert loaded.records == table.records
        assert loaded.metadata == table.metadata

    def test_csv_sorted_by_n_with_17_digits(self, tmp_path):
        table = scan_n_range(2, 2, Mode.EQUAL_NORM, 2, 4, restarts=3,
                             options=SolverOptions(seed=0))
        path = tmp_path / "scan.csv"
        save_table(table, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,d,n,mode,best_f,restarts_used,wall_seconds,is_zero"
        ns = [int(line.split(",")[2]) for line in lines[1:]]
        assert ns == sorted(ns)
        nonzero_f = lines[1].split(",")[4]
        mantissa = nonzero_f.lstrip("-").replace(".", "").split("e")[0].lstrip("0")
        assert len(mantissa) >= 16

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            load_table(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            load_table(tmp_path / "none.csv")


class TestBisect:
    def test_matches_linear_scan(self):
        jump, table = bisect_jump(2, 2, Mode.EQUAL_NORM, 2, 6, restarts=10,
                                  options=SolverOptions(seed=0))
        assert jump == 3
        evaluated = [r.n for r in table.records]
        assert evaluated == sorted(evaluated)
        assert len(evaluated) <= 5

    def test_no_zero_at_top(self):
        jump, _ = bisect_jump(2, 2, Mode.EQUAL_NORM, 1, 2, restarts=5,
                              options=SolverOptions(seed=0))
        assert jump is None
