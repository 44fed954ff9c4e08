import io

import pytest
from hypothesis import given, settings, strategies as st

from purefields.algebra import is_squarefree
from purefields.field import ElementRep, PureField, scaled_charpoly
from purefields.orders import is_algebraic_integer, maximal_order
from purefields.periodicity import (
    SKIPPED,
    SweepRecord,
    charpoly_divisibility,
    check_shift_invariance,
    compute_n0,
    export_csv,
    partition_jobs,
    read_job,
    read_report,
    residue_sweep_records,
    run_job,
    valid_residues,
    verify_period,
    write_job,
)


@pytest.mark.parametrize("n, n0, power", [(3, 3, 27), (4, 16, 65536), (5, 25, 9765625), (6, 216, 216**6)])
def test_compute_n0(n, n0, power):
    assert compute_n0(n) == n0 and n0**n == power


@pytest.mark.parametrize("n", range(2, 10))
def test_n0_squared_divides_n_power(n):
    assert (n**n) % compute_n0(n) ** 2 == 0


@pytest.mark.parametrize("n", range(3, 10))
def test_denominators_divide_n0(n):
    n0 = compute_n0(n)
    for m in range(-150, 151):
        if m in (0, 1, -1) or not is_squarefree(m):
            continue
        for q in maximal_order(PureField(n, m)).denominators:
            assert n0 % q == 0 and (n**n) % (q * q) == 0


def test_divisibility_example():
    recs = charpoly_divisibility(PureField(3, 10), (1, 1, 1), 3)
    assert [(r.j, r.value, r.required, r.holds) for r in recs] == [
        (2, -3, 3, True),
        (1, -27, 9, True),
        (0, -81, 27, True),
    ]
    assert not all(r.holds for r in charpoly_divisibility(PureField(3, 2), (1, 1, 1), 3))
    assert all(r.holds for r in charpoly_divisibility(PureField(5, 7), (3, -1, 4, 1, 5), 1))


fields = st.sampled_from([(3, 10), (3, 2), (4, 5), (4, 7), (5, 7), (6, 17), (8, 5), (9, 10)])


@given(fields, st.lists(st.integers(-8, 8), min_size=9, max_size=9), st.sampled_from([1, 2, 3, 4, 6, 8, 9]))
@settings(max_examples=200, deadline=None)
def test_integrality_iff_divisibility(nm, nums, q):
    n, m = nm
    nums = tuple(nums[:n])
    f = PureField(n, m)
    holds = all(r.holds for r in charpoly_divisibility(f, nums, q))
    assert holds == is_algebraic_integer(f, ElementRep(nums, q))


@given(fields, st.lists(st.integers(-8, 8), min_size=9, max_size=9))
@settings(max_examples=60, deadline=None)
def test_divisibility_transfers_across_shift(nm, nums):
    n, m = nm
    nums = tuple(nums[:n])
    n0 = compute_n0(n)
    shifted = m + n0**n
    # the shifted m need not be square-free; P_j is a polynomial in m
    b_P = scaled_charpoly(n, shifted, nums)
    for q in [d for d in range(1, n0 + 1) if n0 % d == 0]:
        a = charpoly_divisibility(PureField(n, m), nums, q)
        for rec in a:
            need = q ** (n - rec.j)
            assert rec.holds == (b_P[rec.j] % need == 0)


@pytest.mark.parametrize("n, m", [(3, 2), (3, 10), (4, 5)])
def test_shift_invariance_examples(n, m):
    assert check_shift_invariance(n, m) is True


def test_shift_invariance_skips_non_squarefree():
    assert check_shift_invariance(3, 23) is None  # 23 + 27 = 50 = 2 * 5^2


def test_verify_period_modes():
    assert all(r.passed for r in verify_period(3, 2, "exhaustive", bound=500))
    sampled = verify_period(7, 18, "sampled", count=50)
    assert len(sampled) == 50 and all(r.passed for r in sampled)
    assert verify_period(5, 7, "sampled", count=10, seed=1) == verify_period(5, 7, "sampled", count=10, seed=1)
    with pytest.raises(ValueError):
        verify_period(3, 2, "bogus")
    with pytest.raises(ValueError):
        verify_period(4, 8)


def test_residue_sweep_sextic_mod_3():
    reps = verify_period(6, 10, "residue-sweep", p=3)
    assert len(reps) == 3**6 and all(r.passed for r in reps)
    ks = {(r.m - 10) // 36 % 729 for r in reps}
    assert ks == set(range(729))


def test_residue_sweep_records_skip_non_squarefree():
    recs = list(residue_sweep_records(3, 1, 3, ks=range(27)))
    skipped = [r for r, _ in recs if r.status == SKIPPED]
    done = [r for r, rep in recs if rep is not None]
    assert len(done) == 27 and all(r.status == "pass" for r in done)
    assert all(not is_squarefree(r.m) for r in skipped) and skipped


# ---------------------------------------------------------------- jobs

def _assert_exact_cover(jobs, n, residues):
    """Per (r, p) the k-ranges tile [0, p^n) without overlap."""
    spans: dict = {}
    for j in jobs:
        for p, lo, hi in j.sweeps:
            spans.setdefault((j.r, p), []).append((lo, hi))
    primes = [p for p in (2, 3, 5, 7) if n % p == 0]
    assert set(spans) == {(r, p) for r in residues for p in primes}
    for (r, p), ivs in spans.items():
        ivs.sort()
        assert ivs[0][0] == 0 and ivs[-1][1] == p**n
        assert all(a[1] == b[0] for a, b in zip(ivs, ivs[1:]))


def test_partition_seven():
    residues = valid_residues(7)
    assert len(residues) == 48
    jobs = partition_jobs(7, residues, 10)
    assert len(jobs) == 48 and {j.node for j in jobs} == set(range(10))
    _assert_exact_cover(jobs, 7, residues)


def test_partition_single_sextic_job():
    (job,) = partition_jobs(6, [5], 1)
    assert job.sweeps == ((2, 0, 64), (3, 0, 729))


@given(st.integers(1, 12), st.sampled_from([3, 4, 6]), st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_partition_is_exact_cover(nodes, n, count):
    residues = valid_residues(n)[:count]
    jobs = partition_jobs(n, residues, nodes)
    _assert_exact_cover(jobs, n, residues)
    cells = [c for j in jobs for c in j.cells()]
    assert len(cells) == len(set(cells))
    assert {j.node for j in jobs} <= set(range(nodes))


def test_partition_splits_k_ranges():
    jobs = partition_jobs(3, [1], 4)
    assert len(jobs) == 4 and len({j.node for j in jobs}) == 4


def test_job_files_resume(tmp_path):
    job = partition_jobs(4, [5], 1)[0]
    jp, rp = tmp_path / "job.txt", tmp_path / "report.txt"
    write_job(job, jp)
    node, items = read_job(jp)
    assert node == 0 and len(items) == 2**4
    first = run_job(jp, rp)
    assert {s.status for s in first} <= {"pass", SKIPPED}
    assert len([s for s in first if s.status == "pass"]) == 16
    # an interrupted run: drop the tail of the report and resume
    lines = rp.read_text().splitlines()
    rp.write_text("\n".join(lines[:5]) + "\n")
    again = run_job(jp, rp)
    assert len(again) == len(lines) - 5
    assert read_report(rp) == [SweepRecord.from_line(x) for x in lines]
    assert run_job(jp, rp) == []


def test_record_line_roundtrip():
    rec = SweepRecord(6, 5, 3, 113, "pass")
    assert rec.to_line() == "n=6 r=5 k=3 m=113 status=pass"
    assert SweepRecord.from_line(rec.to_line()) == rec
    with pytest.raises(ValueError):
        SweepRecord.from_line("n=6 r=5 status=pass")


def test_csv_export():
    buf = io.StringIO()
    export_csv([SweepRecord(4, 5, 0, 5, "pass"), SweepRecord(4, 5, 1, 21, "fail")], buf)
    assert buf.getvalue() == "n,r,k,m,status\n4,5,0,5,pass\n4,5,1,21,fail\n"
