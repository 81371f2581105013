from piccolo.columns import BigInt, DoublePrecision, ForeignKey, Integer, OnDelete, Serial, Timestamp, Varchar
from piccolo.table import Table

# No migrations ship; `poetry run init` creates these tables if they are
# missing (see store.init_db). Existing ledgers are not altered.


class ExperimentRun(Table):
    id = Serial(primary_key=True)
    matrix = Varchar()
    m = Integer()
    n = Integer()
    seed = BigInt()
    threshold = DoublePrecision()
    created_at = Timestamp()


class ExperimentRecord(Table):
    id = Serial(primary_key=True)
    run_id = ForeignKey(ExperimentRun, on_delete=OnDelete.cascade)
    k = Integer()
    trials = Integer()
    perfect = Integer()
    percent = DoublePrecision()
    mean_rel_err = DoublePrecision()


TABLES = [ExperimentRun, ExperimentRecord]
