"""Tests for predictions/signals file ingestion."""

from __future__ import annotations

import pytest

from deployassure import (
    EmptyFileError,
    MalformedRowError,
    MissingColumnError,
    Sample,
    parse_predictions,
    parse_signals,
)
from deployassure.lifecycle import format_real


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestParsePredictions:
    def test_single_row(self, tmp_path):
        path = write(
            tmp_path, "p.csv", "sample_id,score,label,subgroup\ns1,0.9,1,A\n"
        )
        assert parse_predictions(path) == [Sample("s1", 0.9, 1, "A")]

    def test_score_out_of_range_reports_row_two(self, tmp_path):
        path = write(
            tmp_path, "p.csv", "sample_id,score,label,subgroup\ns2,1.5,1,A\n"
        )
        with pytest.raises(MalformedRowError) as excinfo:
            parse_predictions(path)
        assert excinfo.value.row == 2
        assert "p.csv" in str(excinfo.value)
        assert "score" in str(excinfo.value)

    def test_header_only_is_empty(self, tmp_path):
        path = write(tmp_path, "p.csv", "sample_id,score,label,subgroup\n")
        with pytest.raises(EmptyFileError):
            parse_predictions(path)

    def test_zero_byte_file_is_empty(self, tmp_path):
        path = write(tmp_path, "p.csv", "")
        with pytest.raises(EmptyFileError):
            parse_predictions(path)

    def test_missing_column_named(self, tmp_path):
        path = write(tmp_path, "p.csv", "sample_id,score,label\ns1,0.9,1\n")
        with pytest.raises(MissingColumnError) as excinfo:
            parse_predictions(path)
        assert "subgroup" in str(excinfo.value)

    def test_bad_label_rejected(self, tmp_path):
        path = write(
            tmp_path, "p.csv", "sample_id,score,label,subgroup\ns1,0.9,2,A\n"
        )
        with pytest.raises(MalformedRowError):
            parse_predictions(path)

    def test_empty_subgroup_rejected(self, tmp_path):
        path = write(
            tmp_path, "p.csv", "sample_id,score,label,subgroup\ns1,0.9,1,\n"
        )
        with pytest.raises(MalformedRowError):
            parse_predictions(path)

    def test_extra_columns_ignored(self, tmp_path):
        path = write(
            tmp_path,
            "p.csv",
            "sample_id,score,label,subgroup,note\ns1,0.9,1,A,keep\n",
        )
        assert parse_predictions(path) == [Sample("s1", 0.9, 1, "A")]

    def test_jsonl_round(self, tmp_path):
        path = write(
            tmp_path,
            "p.jsonl",
            '{"sample_id": "s1", "score": 0.9, "label": 1, "subgroup": "A"}\n'
            '{"sample_id": "s2", "score": 0.1, "label": 0, "subgroup": "B"}\n',
        )
        samples = parse_predictions(path)
        assert [s.sample_id for s in samples] == ["s1", "s2"]
        assert samples[1].subgroup == "B"

    def test_jsonl_bad_row_numbered(self, tmp_path):
        path = write(
            tmp_path,
            "p.jsonl",
            '{"sample_id": "s1", "score": 0.9, "label": 1, "subgroup": "A"}\n'
            '{"sample_id": "s2", "score": 2.0, "label": 1, "subgroup": "A"}\n',
        )
        with pytest.raises(MalformedRowError) as excinfo:
            parse_predictions(path)
        assert excinfo.value.row == 2

    def test_jsonl_missing_key_detected(self, tmp_path):
        path = write(tmp_path, "p.jsonl", '{"sample_id": "s1", "score": 0.9}\n')
        with pytest.raises(MissingColumnError):
            parse_predictions(path)


class TestParseSignals:
    def test_reference_row(self, signals_file):
        rows = parse_signals(signals_file)
        assert [r[0] for r in rows] == ["baseline", "mitigation_a", "mitigation_b"]
        baseline = rows[0][1]
        assert baseline.fdi == 0.68
        assert baseline.delta_fpr == 0.304
        assert baseline.delta_fnr == 0.694
        assert baseline.tsz == 0.42
        assert baseline.remediation_event is False
        assert rows[1][1].remediation_event is True

    def test_signal_out_of_range(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event\n"
            "snap,1.2,0.1,0.1,0.1,0\n",
        )
        with pytest.raises(MalformedRowError) as excinfo:
            parse_signals(path)
        assert "fdi" in str(excinfo.value)

    def test_first_bad_row_reported(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event\n"
            "a,0.1,0.1,0.1,0.1,0\n"
            "b,1.4,0.1,0.1,0.1,0\n"
            "c,1.9,0.1,0.1,0.1,0\n",
        )
        with pytest.raises(MalformedRowError) as excinfo:
            parse_signals(path)
        assert excinfo.value.row == 3

    def test_r_m_without_remediation_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event,r_m\n"
            "snap,0.1,0.1,0.1,0.1,0,0.2\n",
        )
        with pytest.raises(MalformedRowError) as excinfo:
            parse_signals(path)
        assert "r_m" in str(excinfo.value)

    def test_r_m_parsed_on_remediation(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event,r_m\n"
            "snap,0.1,0.1,0.1,0.1,1,-0.25\n",
        )
        rows = parse_signals(path)
        assert rows[0][1].r_m == -0.25

    def test_score_columns_on_input_are_ignored(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event,das,drc\n"
            "snap,0.1,0.1,0.1,0.1,0,0.99,Deployable\n",
        )
        rows = parse_signals(path)
        assert rows[0][0] == "snap"

    def test_jsonl_booleans(self, tmp_path):
        path = write(
            tmp_path,
            "s.jsonl",
            '{"snapshot_id": "snap", "fdi": 0.1, "delta_fpr": 0.1, '
            '"delta_fnr": 0.1, "tsz": 0.1, "remediation_event": true, "r_m": 0.05}\n',
        )
        rows = parse_signals(path)
        assert rows[0][1].remediation_event is True
        assert rows[0][1].r_m == 0.05

    def test_lossless_at_four_decimals(self, tmp_path):
        cells = [
            ("a", "0.6800", "0.3040", "0.6940", "0.4200"),
            ("b", "0.4100", "0.2060", "0.4240", "0.2800"),
            ("c", "0.0001", "0.9999", "0.5000", "0.1234"),
        ]
        text = "snapshot_id,fdi,delta_fpr,delta_fnr,tsz,remediation_event\n"
        text += "".join(",".join(row) + ",0\n" for row in cells)
        path = write(tmp_path, "s.csv", text)
        for (snapshot_id, signals), row in zip(parse_signals(path), cells):
            assert format_real(signals.fdi) == row[1]
            assert format_real(signals.delta_fpr) == row[2]
            assert format_real(signals.delta_fnr) == row[3]
            assert format_real(signals.tsz) == row[4]
