import pytest

from pairsim.detection import ScanRecord
from pairsim.scantable import (
    CSV_HEADER,
    from_csv,
    from_json_lines,
    read_records,
    to_csv,
    to_json_lines,
)

RECORDS = [
    ScanRecord(-4e-15, 185700, 622700, 78, 10.0, 111),
    ScanRecord(0.0, 185000, 623000, 95, 10.0, 222),
    ScanRecord(4e-15, 186000, 622000, 60, 10.0, 333),
]


def test_header_schema_exact():
    assert CSV_HEADER == (
        "delay_s,counts_a,counts_b,counts_cc,int_time_s,"
        "rate_a_hz,rate_b_hz,rate_cc_hz,seed"
    )
    assert to_csv([]).splitlines() == [CSV_HEADER]


def test_csv_roundtrip():
    text = to_csv(RECORDS)
    assert from_csv(text) == RECORDS


def test_csv_rate_columns_consistent():
    line = to_csv(RECORDS).splitlines()[1].split(",")
    assert float(line[5]) == pytest.approx(185700 / 10.0)
    assert float(line[7]) == pytest.approx(7.8)


def test_json_lines_roundtrip():
    text = to_json_lines(RECORDS)
    assert from_json_lines(text) == RECORDS
    assert read_records(text) == RECORDS


def test_read_records_sniffs_csv():
    assert read_records(to_csv(RECORDS)) == RECORDS


def test_serialization_deterministic():
    assert to_csv(RECORDS) == to_csv(RECORDS)
    assert to_json_lines(RECORDS) == to_json_lines(RECORDS)


def test_bad_header_rejected():
    with pytest.raises(ValueError, match="header"):
        from_csv("delay,counts\n1,2\n")


def test_malformed_row_rejected():
    text = to_csv(RECORDS) + "1,2,3\n"
    with pytest.raises(ValueError, match="malformed"):
        from_csv(text)


def test_empty_rejected():
    with pytest.raises(ValueError):
        read_records("")
