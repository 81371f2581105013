import pytest
from piccolo.engine.sqlite import SQLiteEngine

from csmatrix import store
from csmatrix.errors import CsMatrixError
from csmatrix.models import ExperimentRecord, ExperimentRun
from csmatrix.recovery import ExperimentResult, KRecord


@pytest.fixture
def ledger(tmp_path):
    store.init_db(SQLiteEngine(path=str(tmp_path / "ledger.db")))
    yield
    ExperimentRun._meta.db = None
    ExperimentRecord._meta.db = None


def _result(name="additive-q19-100x300"):
    return ExperimentResult(
        matrix=name,
        m=100,
        n=300,
        seed=2015,
        threshold=0.001,
        records=(
            KRecord(k=5, trials=500, perfect=498, percent=99.6, mean_rel_err=0.0031),
            KRecord(k=10, trials=500, perfect=470, percent=94.0, mean_rel_err=0.0417),
        ),
    )


def test_round_trip(ledger):
    run_id = store.record_experiment(_result())
    assert store.load_experiment(run_id) == _result()


def test_runs_are_kept_apart(ledger):
    first = store.record_experiment(_result())
    second = store.record_experiment(_result("gaussian-100x300"))
    assert first != second
    assert store.load_experiment(second).matrix == "gaussian-100x300"
    assert len(store.load_experiment(first).records) == 2


def test_init_is_idempotent(ledger):
    store.init_db()
    assert ExperimentRun.count().run_sync() == 0


def test_missing_run(ledger):
    with pytest.raises(CsMatrixError):
        store.load_experiment(42)
