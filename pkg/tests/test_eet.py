import numpy as np
import pytest

from heet import EetMatrix, HeetError, ParseError, WorkloadMix
from heet.eet import resolve_mix


def test_from_rows_labels(worked):
    assert worked.task_labels == ("T1", "T2")
    assert worked.machine_labels == ("M1", "M2")
    assert worked.shape == (2, 2)


@pytest.mark.parametrize("rows", [[[0, 1]], [[-1, 2]], [[np.inf, 1]], [[np.nan]]])
def test_rejects_non_positive_entries(rows):
    with pytest.raises(HeetError):
        EetMatrix.from_rows(rows)


def test_rejects_duplicate_labels():
    with pytest.raises(HeetError, match="duplicate"):
        EetMatrix(("T1",), ("M", "M"), [[1.0, 2.0]])


def test_rejects_shape_mismatch():
    with pytest.raises(HeetError, match="shape"):
        EetMatrix(("T1", "T2"), ("M1",), [[1.0, 2.0]])


def test_entries_are_read_only(worked):
    with pytest.raises(ValueError):
        worked.entries[0, 0] = 1.0


def test_csv_round_trip(worked):
    again = EetMatrix.from_csv(worked.to_csv())
    assert again == worked


def test_csv_with_instance_suffix_labels():
    text = "task,g4dn.xlarge#1,g4dn.xlarge#2\nresnet,0.1,0.1\n"
    eet = EetMatrix.from_csv(text)
    assert eet.machine_labels == ("g4dn.xlarge#1", "g4dn.xlarge#2")


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("machine,M1\nT1,1\n", 1),
        ("task,M1,M2\nT1,1\n", 2),
        ("task,M1\nT1,1\nT2,abc\n", 3),
        ("task,M1\n", 2),
    ],
)
def test_csv_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        EetMatrix.from_csv(text)
    assert info.value.line == line


def test_csv_domain_error_is_not_parse_error():
    with pytest.raises(HeetError) as info:
        EetMatrix.from_csv("task,M1\nT1,-2\n")
    assert not isinstance(info.value, ParseError)


def test_mix_validation():
    WorkloadMix((0.25, 0.75))
    with pytest.raises(HeetError):
        WorkloadMix((0.5, 0.6))
    with pytest.raises(HeetError):
        WorkloadMix((1.5, -0.5))
    with pytest.raises(HeetError):
        WorkloadMix(())


def test_mix_normalized_sums_to_one():
    mix = WorkloadMix.normalized([1, 1, 1])
    assert sum(mix.weights) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(HeetError):
        WorkloadMix.normalized([0, 0])


def test_resolve_mix_defaults_to_uniform():
    assert resolve_mix(None, 4).weights == (0.25,) * 4
    with pytest.raises(HeetError):
        resolve_mix([1.0], 2)


def test_permuted_and_with_column(worked):
    p = worked.permuted(task_order=[1, 0], machine_order=[1, 0])
    assert p.entries.tolist() == [[4, 8], [2, 4]]
    assert p.task_labels == ("T2", "T1")
    w = worked.with_column([4, 8], "M1#2")
    assert w.n == 3 and w.entries[:, 2].tolist() == [4, 8]
