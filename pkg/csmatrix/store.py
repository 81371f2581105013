"""Results ledger: experiment runs kept in SQLite through piccolo."""
import logging
from typing import Optional

from piccolo.engine.base import Engine
from piccolo.table import create_db_tables_sync

from csmatrix.errors import CsMatrixError
from csmatrix.models import TABLES, ExperimentRecord, ExperimentRun
from csmatrix.recovery import ExperimentResult, KRecord

logger = logging.getLogger(__name__)


def use_engine(engine: Engine):
    """Point the ledger tables at another engine than the one in piccolo_conf."""
    for table in TABLES:
        table._meta.db = engine


def init_db(engine: Optional[Engine] = None):
    if engine is not None:
        use_engine(engine)
    create_db_tables_sync(*TABLES, if_not_exists=True)


def record_experiment(result: ExperimentResult) -> int:
    run_id = ExperimentRun.insert(
        ExperimentRun(
            matrix=result.matrix,
            m=result.m,
            n=result.n,
            seed=result.seed,
            threshold=result.threshold,
        )
    ).run_sync()[0]["id"]
    if result.records:
        ExperimentRecord.insert(
            *[
                ExperimentRecord(
                    run_id=run_id,
                    k=r.k,
                    trials=r.trials,
                    perfect=r.perfect,
                    percent=r.percent,
                    mean_rel_err=r.mean_rel_err,
                )
                for r in result.records
            ]
        ).run_sync()
    logger.info("recorded %s (%d k values) as run %d", result.matrix, len(result.records), run_id)
    return run_id


def load_experiment(run_id: int) -> ExperimentResult:
    run = ExperimentRun.select().where(ExperimentRun.id == run_id).first().run_sync()
    if run is None:
        raise CsMatrixError(f"no experiment run with id {run_id}")
    rows = (
        ExperimentRecord.select()
        .where(ExperimentRecord.run_id == run_id)
        .order_by(ExperimentRecord.id)
        .run_sync()
    )
    return ExperimentResult(
        matrix=run["matrix"],
        m=run["m"],
        n=run["n"],
        seed=run["seed"],
        threshold=run["threshold"],
        records=tuple(
            KRecord(
                k=row["k"],
                trials=row["trials"],
                perfect=row["perfect"],
                percent=row["percent"],
                mean_rel_err=row["mean_rel_err"],
            )
            for row in rows
        ),
    )
