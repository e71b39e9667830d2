import csv
import io
import json

import pytest

from heet import (
    HeetError,
    MachineCatalog,
    MachineType,
    SystemConfig,
    expand_config,
    optimize,
    sweep,
    with_simulation,
)
from heet.catalogs import inference_catalog
from heet.explorer import SweepRow, enumerate_configs, sweep_csv
from heet.workload import synth_bag


def test_expand_duplicates_columns(small_catalog):
    eet = expand_config(small_catalog, SystemConfig((2, 0)))
    assert eet.entries.tolist() == [[4, 4], [8, 8]]
    assert eet.machine_labels == ("M1#1", "M1#2")


def test_expand_worked_matrix(small_catalog):
    eet = expand_config(small_catalog, SystemConfig((1, 1)))
    assert eet.entries.tolist() == [[4, 2], [8, 4]]


def test_expand_single_column(small_catalog):
    eet = expand_config(small_catalog, SystemConfig((1, 0)))
    assert eet.entries.tolist() == [[4], [8]]


def test_expand_rejects_empty_and_over_limit(small_catalog):
    with pytest.raises(HeetError):
        expand_config(small_catalog, SystemConfig((0, 0)))
    with pytest.raises(HeetError):
        expand_config(small_catalog, SystemConfig((3, 0)))
    with pytest.raises(HeetError):
        expand_config(small_catalog, SystemConfig((1,)))


def test_sweep_grid(small_catalog):
    rows = sweep(small_catalog, [0.5, 0.5], 0.5, 1000)
    assert len(rows) == 8
    assert [r.config.counts for r in rows] == sorted(r.config.counts for r in rows)
    by = {r.config.counts: r for r in rows}
    # theta = sum over machines of 1/e*_j, with e* = 6 (M1) and 3 (M2)
    expected = {
        (0, 1): (1 / 3, 3), (0, 2): (2 / 3, 6), (1, 0): (1 / 6, 1), (1, 1): (0.5, 4),
        (1, 2): (5 / 6, 7), (2, 0): (1 / 3, 2), (2, 1): (2 / 3, 5), (2, 2): (1.0, 8),
    }
    for counts, (theta, cost) in expected.items():
        assert by[counts].predicted_throughput == pytest.approx(theta, rel=1e-12)
        assert by[counts].cost == cost
        assert by[counts].meets_target == (by[counts].predicted_throughput >= 0.5)
    assert by[(1, 1)].meets_target and not by[(0, 1)].meets_target


def test_sweep_predictions_match_simulation(small_catalog):
    rows = sweep(small_catalog, [0.5, 0.5], 0.5, 1000)
    trace = synth_bag(1000, [0.5, 0.5], seed=0)
    for r in with_simulation(rows, small_catalog, trace):
        assert r.simulated_throughput == pytest.approx(r.predicted_throughput, rel=0.02)


def test_sweep_rejects_bad_target(small_catalog):
    with pytest.raises(HeetError):
        sweep(small_catalog, None, 0, 10)


def test_catalog_validation():
    with pytest.raises(HeetError):
        MachineCatalog(("T1",), ())
    with pytest.raises(HeetError):
        MachineCatalog(("T1",), (MachineType("A", 1, (1,), 0),))
    with pytest.raises(HeetError):
        MachineCatalog(("T1", "T2"), (MachineType("A", 1, (1,), 1),))
    with pytest.raises(HeetError):
        MachineType("A", -1, (1,), 1)


def test_optimize_examples(small_catalog):
    rows = sweep(small_catalog, [0.5, 0.5], 0.5, 1000)
    best = optimize(rows)
    assert best.config.counts == (1, 1) and best.cost == 4
    assert optimize(rows, 5.0) is None


def test_optimize_tie_prefers_throughput():
    a = SweepRow(SystemConfig((1, 0)), 1, 1, 0.5, 1, 3.0, True)
    b = SweepRow(SystemConfig((0, 1)), 1, 1, 0.6, 1, 3.0, True)
    assert optimize([a, b]) is b
    c = SweepRow(SystemConfig((0, 2)), 1, 1, 0.6, 1, 3.0, True)
    assert optimize([c, b]) is b  # then lexicographic counts


def test_worker_pool_does_not_change_order():
    cat = inference_catalog(2)
    assert sweep(cat, None, 1.0, 100, workers=4) == sweep(cat, None, 1.0, 100)


def test_sweep_csv_columns(small_catalog):
    rows = sweep(small_catalog, None, 0.5, 10)
    table = list(csv.DictReader(io.StringIO(sweep_csv(rows, small_catalog))))
    assert list(table[0]) == ["M1", "M2", "n", "heet", "s_heet", "theta", "tau", "cost", "meets_target"]
    assert len(table) == 8
    sim = with_simulation(rows[:2], small_catalog, synth_bag(10, [0.5, 0.5], 0))
    header = sweep_csv(sim, small_catalog).splitlines()[0]
    assert header.endswith("sim_makespan,sim_theta")


def test_catalog_json_round_trip(tmp_path, small_catalog):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(small_catalog.to_dict()))
    assert MachineCatalog.load_json(path) == small_catalog


def test_inference_catalog_size():
    assert inference_catalog().grid_size == 124
    assert len(enumerate_configs(inference_catalog())) == 124
