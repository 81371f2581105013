import io

import numpy as np
import pytest

from csmatrix.errors import BadK, BadParams, SingularSupport, ZeroColumn
from csmatrix.recovery import (
    CSV_HEADER,
    ExperimentResult,
    KRecord,
    RealMatrix,
    binarize_to_real,
    gaussian_matrix,
    generate_sparse_signal,
    omp,
    omp_path,
    read_csv,
    run_comparison,
    run_experiment,
    to_csv,
    trial_rng,
    write_csv,
)
from csmatrix.sparse import SparseBinaryMatrix


def _real(entries):
    entries = np.asarray(entries, dtype=np.float64)
    return RealMatrix(entries=entries, column_norms=np.linalg.norm(entries, axis=0))


def test_binarize(additive5):
    A = binarize_to_real(additive5.H, name="additive-q5")
    assert (A.m, A.n, A.name) == (25, 25, "additive-q5")
    assert np.allclose(A.column_norms, np.sqrt(5))
    with pytest.raises(ZeroColumn):
        binarize_to_real(SparseBinaryMatrix(2, 2, [[0], []]))


def test_gaussian_matrix_is_seeded():
    a, b = gaussian_matrix(100, 300, 7), gaussian_matrix(100, 300, 7)
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, gaussian_matrix(100, 300, 8).entries)
    assert np.all(np.abs(a.column_norms / np.sqrt(100) - 1) < 0.3)
    with pytest.raises(BadParams):
        gaussian_matrix(0, 3, 7)


def test_sparse_signal(rng):
    signal = generate_sparse_signal(50, 7, rng)
    assert signal.k == 7
    assert np.all(np.diff(signal.support) > 0)
    assert np.count_nonzero(signal.dense()) == 7
    for k in (0, 51):
        with pytest.raises(BadK):
            generate_sparse_signal(50, k, rng)


def test_trial_streams_are_independent_of_order():
    first = generate_sparse_signal(300, 10, trial_rng(7, 10, 3))
    generate_sparse_signal(300, 10, trial_rng(7, 10, 4))
    again = generate_sparse_signal(300, 10, trial_rng(7, 10, 3))
    assert np.array_equal(first.support, again.support)
    assert np.array_equal(first.values, again.values)


def test_omp_on_identity():
    A = binarize_to_real(SparseBinaryMatrix.identity(6))
    x = np.array([0.0, 2.0, 0.0, -1.0, 0.0, 0.5])
    assert np.allclose(omp(A, A.entries @ x, 3), x)


def test_omp_path_residuals_do_not_grow(rng):
    A = gaussian_matrix(40, 80, rng)
    signal = generate_sparse_signal(80, 6, rng)
    path = omp_path(A, A.entries @ signal.dense(), 6)
    assert len(path.support) == len(set(path.support))
    norms = np.array(path.residual_norms)
    assert np.all(np.diff(norms) <= 1e-12 * norms[0])


def test_omp_ties_pick_the_smallest_index():
    A = _real(np.eye(3))
    path = omp_path(A, np.array([1.0, 1.0, 1.0]), 1)
    assert path.support == (0,)


def test_omp_stops_on_exact_fit():
    A = _real(np.eye(4))
    path = omp_path(A, np.array([0.0, 3.0, 0.0, 0.0]), 3)
    assert path.support == (1,)


def test_omp_k_zero_returns_zero():
    A = _real(np.eye(3))
    assert np.array_equal(omp(A, np.ones(3), 0), np.zeros(3))
    with pytest.raises(BadK):
        omp(A, np.ones(3), 4)


def test_omp_rank_deficient_support():
    A = _real([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
    with pytest.raises(SingularSupport):
        omp_path(A, np.array([1.0, 0.0, 1.0]), 2)


def test_experiment_on_identity():
    A = binarize_to_real(SparseBinaryMatrix.identity(20), name="identity")
    result = run_experiment(A, [1, 5, 20], trials=10, seed=3)
    assert [r.percent for r in result.records] == [100.0, 100.0, 100.0]
    assert all(r.perfect == 10 and r.mean_rel_err < 1e-12 for r in result.records)
    assert result.percent(5) == 100.0
    with pytest.raises(BadK):
        run_experiment(A, [21], trials=1, seed=3)
    with pytest.raises(BadParams):
        run_experiment(A, [2], trials=0, seed=3)


def test_experiment_is_deterministic():
    A = gaussian_matrix(20, 40, 1)
    first = run_experiment(A, [3, 6], trials=20, seed=9)
    assert run_experiment(A, [3, 6], trials=20, seed=9) == first


def test_workers_match_sequential_run():
    A = gaussian_matrix(20, 40, 1)
    sequential = run_experiment(A, [3, 6], trials=20, seed=9)
    assert run_experiment(A, [3, 6], trials=20, seed=9, workers=2) == sequential


def test_comparison_shares_the_schedule(additive5):
    A = binarize_to_real(additive5.H, name="additive-q5")
    ours, gaussian = run_comparison(A, [2], trials=5, seed=4)
    assert ours.matrix == "additive-q5"
    assert gaussian.matrix == "gaussian-25x25"
    assert (gaussian.m, gaussian.n, gaussian.seed) == (25, 25, 4)


def test_csv_format():
    result = ExperimentResult(
        matrix="additive-q19-100x300",
        m=100,
        n=300,
        seed=2015,
        threshold=0.001,
        records=(
            KRecord(k=5, trials=500, perfect=500, percent=100.0, mean_rel_err=0.0),
            KRecord(k=50, trials=500, perfect=1, percent=0.2, mean_rel_err=0.123456789),
        ),
    )
    text = to_csv([result])
    assert text.splitlines() == [
        ",".join(CSV_HEADER),
        "additive-q19-100x300,100,300,5,500,500,100,0,2015",
        "additive-q19-100x300,100,300,50,500,1,0.2,0.123457,2015",
    ]

    (back,) = read_csv(io.StringIO(text))
    assert back.records[0] == result.records[0]
    assert back.records[1].mean_rel_err == pytest.approx(0.123457, abs=1e-12)


def test_csv_file(tmp_path):
    result = ExperimentResult("gaussian-20x40", 20, 40, 9, 0.001, (KRecord(3, 20, 10, 50.0, 0.25),))
    write_csv([result, result], tmp_path / "out.csv")
    assert read_csv(tmp_path / "out.csv")[0].records == (result.records[0], result.records[0])


def test_binary_column_norms(rs_latin19):
    A = binarize_to_real(rs_latin19.H)
    assert np.allclose(A.column_norms, np.sqrt(17))


def test_gaussian_entries_are_centered():
    assert abs(gaussian_matrix(100, 300, 2015).entries.mean()) < 0.02


def test_full_support_signal(rng):
    assert np.array_equal(generate_sparse_signal(8, 8, rng).support, np.arange(8))


@pytest.mark.slow
def test_support_is_uniform():
    rng = np.random.default_rng(11)
    n, k, draws = 10, 3, 100_000
    counts = np.zeros(n)
    for _ in range(draws):
        counts[generate_sparse_signal(n, k, rng).support] += 1
    p = k / n
    assert np.all(np.abs(counts - draws * p) <= 4 * np.sqrt(draws * p * (1 - p)))


def test_omp_single_atom():
    A = binarize_to_real(SparseBinaryMatrix.identity(5))
    assert np.array_equal(omp(A, np.eye(5)[3], 1), np.eye(5)[3])


def test_infinite_threshold_counts_everything():
    A = gaussian_matrix(10, 30, 5)
    result = run_experiment(A, [8], trials=10, seed=1, threshold=np.inf)
    assert result.percent(8) == 100.0


def test_omp_support_ignores_column_scale(rng):
    A = gaussian_matrix(30, 60, rng)
    signal = generate_sparse_signal(60, 5, rng)
    x = signal.dense()
    j = int(signal.support[2])
    entries = A.entries.copy()
    entries[:, j] *= 10.0
    scaled_x = x.copy()
    scaled_x[j] /= 10.0
    scaled = _real(entries)
    y = A.entries @ x
    assert np.allclose(scaled.entries @ scaled_x, y)
    first, second = omp_path(A, y, 5), omp_path(scaled, y, 5)
    assert first.support == second.support
    assert np.isclose(second.x[j] * 10.0, first.x[j])
