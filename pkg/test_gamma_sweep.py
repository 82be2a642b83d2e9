from fractions import Fraction

import pytest

from app.core.errors import LengthOutOfRangeError
from app.core.sequences import builtin_spec
from app.schemas.rows import GammaRow
from app.services.gamma_sweep import gamma_record, gamma_table


def test_table_rows_are_ordered_and_filled_on_request():
    records = gamma_table(builtin_spec("tm"), 8, fields=("spans", "delta", "greedy"))
    assert [record.n for record in records] == list(range(1, 9))
    assert [record.gamma for record in records] == [1, 2, 2, 2, 2, 2, 3, 3]
    assert all(record.proven for record in records)
    assert records[0].delta == Fraction(1)
    assert records[3].greedy_size == 3
    assert records[0].minspan == records[0].maxspan == 0
    assert all(record.minspan <= record.maxspan for record in records)


def test_unrequested_columns_stay_empty():
    record = gamma_record(builtin_spec("pd"), 26)
    assert record.gamma == 2
    assert record.minspan is None
    assert record.delta is None
    cells = GammaRow.from_record(record).cells()
    assert cells["minspan"] == ""
    assert cells["proven"] == "true"


def test_worker_pool_matches_serial_run():
    spec = builtin_spec("vtm")
    serial = gamma_table(spec, 12, fields=("delta",), threads=1)
    pooled = gamma_table(spec, 12, fields=("delta",), threads=2)
    assert pooled == serial


def test_bounds():
    assert gamma_table(builtin_spec("tm"), 4, n_min=5) == []
    with pytest.raises(LengthOutOfRangeError):
        gamma_table(builtin_spec("tm"), 4, n_min=0)
