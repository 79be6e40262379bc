import json

import numpy as np
import pytest

from atsroot.cli import main
from atsroot.designs import SettingSpec, setting_hypothesis
from atsroot.io import (
    FormatError,
    parse_hypothesis_json,
    parse_matrix_csv,
    read_matrix_csv,
    read_vector_csv,
    write_hypothesis,
    write_matrix_csv,
)
from atsroot.reduction import Hypothesis
from instances import H1, H2


@pytest.fixture
def files(tmp_path):
    def make(name, h, y=None):
        path = tmp_path / name
        hyp = Hypothesis.homogeneous(h) if y is None else Hypothesis(h, y)
        write_hypothesis(path, hyp)
        return str(path)

    return make


class TestFormats:
    def test_csv_roundtrip(self, tmp_path, rng):
        a = rng.standard_normal((3, 4))
        write_matrix_csv(tmp_path / "a.csv", a)
        np.testing.assert_array_equal(read_matrix_csv(tmp_path / "a.csv"), a)

    def test_ragged_rows_name_the_line(self):
        with pytest.raises(FormatError, match=":2: ragged"):
            parse_matrix_csv("1,2\n3\n", "m.csv")

    def test_garbage_names_the_line(self):
        with pytest.raises(FormatError, match=":3:"):
            parse_matrix_csv("1\n2\nabc\n", "m.csv")

    def test_empty(self):
        with pytest.raises(FormatError, match="empty"):
            parse_matrix_csv("\n")

    def test_vector_row_or_column(self, tmp_path):
        (tmp_path / "r.csv").write_text("1,2,3\n")
        (tmp_path / "c.csv").write_text("1\n2\n3\n")
        np.testing.assert_array_equal(read_vector_csv(tmp_path / "r.csv"), [1, 2, 3])
        np.testing.assert_array_equal(read_vector_csv(tmp_path / "c.csv"), [1, 2, 3])

    def test_hypothesis_json(self):
        h = parse_hypothesis_json('{"H": [[1, -1, 0], [0, 1, -1]], "y": [0, 0]}')
        np.testing.assert_array_equal(h.H, H2)

    @pytest.mark.parametrize(
        "text",
        [
            '{"H": [[1, 2], [3]], "y": [0, 0]}',
            '{"H": [[1, 2]], "y": [0, 0]}',
            '{"H": [], "y": []}',
            '{"y": [1]}',
            '{"H": [[1, "a"]], "y": [0]}',
            "[1, 2",
        ],
    )
    def test_bad_hypothesis_json(self, text):
        with pytest.raises(FormatError):
            parse_hypothesis_json(text)


class TestReduceCommand:
    def test_h1(self, files, tmp_path, capsys):
        out = tmp_path / "h1"
        assert main(["reduce", files("h1.json", H1), "-o", str(out)]) == 0
        assert "3 → 2" in capsys.readouterr().out
        side = json.loads((tmp_path / "h1.json").read_text())
        assert side["ell"] == 2 and side["rank"] == 2 and side["a"] == 1.0 and side["delta"] == 0.0
        L = read_matrix_csv(tmp_path / "h1.L.csv")
        np.testing.assert_allclose(L.T @ L, H1.T @ H1, atol=1e-12)
        assert read_vector_csv(tmp_path / "h1.y.csv").shape == (2,)

    def test_setting_c(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        write_hypothesis(path, setting_hypothesis(SettingSpec("C", 5, 1.0)))
        assert main(["reduce", str(path), "-o", str(tmp_path / "c")]) == 0
        assert json.loads((tmp_path / "c.json").read_text())["ell"] == 1

    def test_literal_setting_c_is_empty(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        write_hypothesis(path, setting_hypothesis(SettingSpec("C", 5, 1.0), literal_offset=True))
        assert main(["reduce", str(path), "-o", str(tmp_path / "out")]) == 1
        assert "empty solution set" in capsys.readouterr().err

    def test_empty_file(self, tmp_path, capsys):
        (tmp_path / "e.json").write_text("")
        assert main(["reduce", str(tmp_path / "e.json"), "-o", str(tmp_path / "o")]) == 1
        assert "e.json" in capsys.readouterr().err

    def test_canonical(self, files, tmp_path):
        assert main(["reduce", files("a.json", H1), "-o", str(tmp_path / "a"), "--canonical"]) == 0
        assert main(["reduce", files("b.json", H2), "-o", str(tmp_path / "b"), "--canonical"]) == 0
        assert (tmp_path / "a.L.csv").read_text() == (tmp_path / "b.L.csv").read_text()

    def test_canonical_needs_zero_offset(self, files, tmp_path, capsys):
        path = files("y.json", np.eye(2), [1.0, 0.0])
        assert main(["reduce", path, "-o", str(tmp_path / "y"), "--canonical"]) == 2

    def test_kron(self, tmp_path, capsys):
        write_matrix_csv(tmp_path / "w.csv", np.eye(3) - 1 / 3)
        write_matrix_csv(tmp_path / "s.csv", np.eye(4))
        out = tmp_path / "k"
        assert main(["reduce", "--kron", str(tmp_path / "w.csv"), str(tmp_path / "s.csv"), "-o", str(out)]) == 0
        assert "12 → 8" in capsys.readouterr().out
        assert read_matrix_csv(tmp_path / "k.L.csv").shape == (8, 12)

    def test_json_flag(self, files, tmp_path, capsys):
        assert main(["reduce", files("h1.json", H1), "-o", str(tmp_path / "o"), "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["ell"] == 2


class TestCheckCommand:
    def test_worked_example(self, files, capsys):
        assert main(["check", files("a.json", H1), files("b.json", H2)]) == 3
        out = capsys.readouterr().out
        assert "same_hypothesis" in out and "True" in out
        assert "ats_s_equal" in out

    def test_self(self, files, capsys):
        p = files("a.json", H1)
        assert main(["check", p, p]) == 0

    def test_scaled_pair_json(self, files, capsys):
        a = files("a.json", 2 * np.eye(2), [2.0, 2.0])
        b = files("b.json", np.eye(2), [1.0, 1.0])
        assert main(["--json", "check", a, b]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["witness_a"] == pytest.approx(4.0)
        assert report["ats_s_equal"] and not report["ats_equal"]

    def test_dimension_mismatch(self, files, capsys):
        assert main(["check", files("a.json", H1), files("b.json", np.eye(2))]) == 2
        assert "dimension mismatch" in capsys.readouterr().err


class TestAtsCommand:
    @pytest.fixture
    def inputs(self, tmp_path):
        (tmp_path / "x.csv").write_text("1,2,3\n")
        write_matrix_csv(tmp_path / "s.csv", np.eye(3))
        return str(tmp_path / "x.csv"), str(tmp_path / "s.csv")

    @pytest.mark.parametrize(
        "h,variant,expected",
        [(H2, "ats", "2"), (H1, "ats", "6"), (H2, "ats_s", "0.5"), (H1, "ats_s", "1"), (H2, "ats_f", "0.8")],
    )
    def test_values(self, files, inputs, capsys, h, variant, expected):
        x, s = inputs
        assert main(["ats", files("h.json", h), x, s, "--variant", variant]) == 0
        assert capsys.readouterr().out.strip() == expected

    def test_missing_sigma(self, files, inputs, capsys):
        assert main(["ats", files("h.json", H2), inputs[0], "--variant", "ats_s"]) == 2


class TestBenchCommand:
    def test_smoke_markdown(self, tmp_path, capsys):
        csv_path = tmp_path / "b.csv"
        argv = ["bench", "--setting", "A", "--sizes", "2,3", "--reps", "1", "--csv", str(csv_path)]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "| d(q) | 4(2) | 6(3) |" in out
        assert csv_path.read_text().splitlines()[0] == (
            "setting,d,ell,variant,reps,seed,t_full_s,t_compact_s,t_reduce_s,speedup,checksum_full,checksum_compact"
        )

    def test_csv_format_c(self, capsys):
        assert main(["bench", "--setting", "C", "--sizes", "3", "--reps", "20", "--format", "csv", "--seed", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        row = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert row["ell"] == "1" and row["seed"] == "5" and float(row["speedup"]) > 0

    def test_bad_sizes(self, capsys):
        assert main(["bench", "--setting", "A", "--sizes", "x"]) == 2
