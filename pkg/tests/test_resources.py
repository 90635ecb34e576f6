"""Bundled resource table shape and consistency."""

import pytest

from chasepressure.resources import ResourceTable


@pytest.fixture(scope="module")
def table():
    return ResourceTable.bundled()


def test_endpoints(table):
    assert table.remaining(120, 0) == 100.0
    assert table.remaining(0, 0) == 0.0
    for w in range(11):
        assert table.remaining(0, w) == 0.0
    for b in range(0, 121):
        assert table.remaining(b, 10) == 0.0


def test_monotone_in_balls(table):
    for w in range(11):
        prev = -1.0
        for b in range(0, 121):
            cur = table.remaining(b, w)
            assert cur >= prev
            prev = cur


def test_monotone_in_wickets(table):
    for b in range(0, 121):
        prev = None
        for w in range(11):
            cur = table.remaining(b, w)
            if prev is not None:
                assert cur <= prev
            prev = cur


def test_used_pct_endpoints(table):
    assert table.used_pct(120, 120, 0) == 0.0
    assert table.used_pct(120, 0, 0) == 100.0
    assert 0.0 < table.used_pct(120, 60, 2) < 100.0


def test_csv_roundtrip(tmp_path, table):
    path = tmp_path / "t.csv"
    with open(path, "w") as fh:
        fh.write("balls_remaining,wickets_lost,resource_pct\n")
        for (b, w), pct in sorted(table.items()):
            fh.write(f"{b},{w},{pct}\n")
    again = ResourceTable.from_csv(path)
    assert dict(again.items()) == dict(table.items())


def test_validation_rejects_bad_tables():
    values = {(b, w): 0.0 for b in range(121) for w in range(11)}
    with pytest.raises(ValueError):
        ResourceTable(values)  # start-of-innings cell must be 100
