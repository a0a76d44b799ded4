import numpy as np
import pytest

from enose_fis import fis
from enose_fis.data import LabeledDataset, SessionConfig, generate_session
from enose_fis.evaluation import EvalConfig, rmse, segment_objects
from enose_fis.pipeline import (
    TrainConfig,
    one_hot_targets,
    run_experiment,
    split_train_test,
    train,
)


@pytest.mark.parametrize(
    "index,expected", [(1, [1, 0, 0]), (2, [0, 1, 0]), (3, [0, 0, 1])]
)
def test_one_hot_targets(index, expected):
    y = one_hot_targets(index, 3)
    np.testing.assert_array_equal(y, expected)
    assert y.sum() == 1


@pytest.mark.parametrize("index", [0, 4, -1])
def test_one_hot_out_of_range(index):
    with pytest.raises(ValueError):
        one_hot_targets(index, 3)


def dataset_of(sizes):
    return LabeledDataset(
        tuple(f"o{i}" for i in range(len(sizes))),
        tuple(np.arange(k * 5, dtype=float).reshape(k, 5) + 1000 * i for i, k in enumerate(sizes)),
    )


def test_split_train_test_sizes():
    train_set, test_set = split_train_test(dataset_of([800, 2, 5]))
    assert [len(b) for b in train_set.blocks] == [400, 1, 3]
    assert [len(b) for b in test_set.blocks] == [400, 1, 2]


def test_split_is_ordered_and_disjoint():
    ds = dataset_of([9, 4])
    train_set, test_set = split_train_test(ds)
    for full, a, b in zip(ds.blocks, train_set.blocks, test_set.blocks):
        np.testing.assert_array_equal(np.concatenate([a, b]), full)
        rows_a = {tuple(r) for r in a}
        assert not rows_a & {tuple(r) for r in b}


def test_split_rejects_tiny_object():
    with pytest.raises(ValueError):
        split_train_test(dataset_of([10, 1]))


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(eta=1.5)
    with pytest.raises(ValueError):
        TrainConfig(m=0)


def test_train_rejects_empty_data():
    empty = LabeledDataset(("a",), (np.zeros((0, 5)),))
    with pytest.raises(ValueError):
        train(empty, TrainConfig(epochs=1))


def test_train_is_deterministic():
    ds = generate_session(SessionConfig(exposure_duration=60))
    a = train(ds, TrainConfig(epochs=2))
    b = train(ds, TrainConfig(epochs=2))
    assert a.model.same_parameters(b.model)
    assert a.rmse_trace == b.rmse_trace
    assert len(a.rmse_trace) == 3


def test_train_equals_manual_block_walk():
    ds = generate_session(SessionConfig(exposure_duration=20))
    config = TrainConfig(epochs=2, m=4)
    model = fis.init_model(5, 4, 3, seed=config.seed)
    for _ in range(config.epochs):
        for i, block in enumerate(ds.blocks):
            for z in block:
                model = fis.train_step(model, z, one_hot_targets(i + 1, 3), config.eta)
    assert train(ds, config).model.same_parameters(model)


def test_shuffled_training_differs_but_is_reproducible():
    ds = generate_session(SessionConfig(exposure_duration=30))
    plain = train(ds, TrainConfig(epochs=1))
    shuffled = train(ds, TrainConfig(epochs=1, shuffle=True))
    again = train(ds, TrainConfig(epochs=1, shuffle=True))
    assert not plain.model.same_parameters(shuffled.model)
    assert shuffled.model.same_parameters(again.model)


def test_fixture_training_reduces_error_and_fits_tests(proposed_run, session_dataset):
    trace = proposed_run.rmse_trace
    assert trace[-1] <= trace[0]
    _, test_set = split_train_test(session_dataset)
    for i, segments in enumerate(segment_objects(test_set.blocks)):
        target = one_hot_targets(i + 1, 3)
        assert max(rmse(proposed_run.model, seg, target) for seg in segments) < 0.1


def test_run_experiment_report(proposed_run):
    rows = dict(proposed_run.summary_rows())
    assert rows["m"] == "10"
    assert rows["eta"] == "0.1"
    assert rows["epsilon"] == "0.1"
    assert rows["epochs"] == "10"
    assert rows["seed"] == "1"
    assert rows["efficiency"] == "100.00"
    assert rows["pec[apple][apple]"] == "37.50"
    assert rows["degenerate"] == "false"
    text = proposed_run.report()
    assert "m=10" in text and "efficiency: 100.00%" in text
    assert proposed_run.summary_csv().startswith("key,value\nm,10\n")


def test_identical_objects_flag_degeneracy():
    reading = np.array([0.4, 0.3, 0.5, 0.2, 0.6])
    ds = LabeledDataset(("a", "b", "c"), (np.tile(reading, (64, 1)),) * 3)
    result = run_experiment(ds, TrainConfig(epochs=2))
    assert result.degenerate
    assert result.efficiency < 100
    # identical inputs give identical RMSE against any fixed target
    np.testing.assert_array_equal(result.mean_rmse[:, 0], result.mean_rmse[:, 1])
    assert "degenerate" in result.report()


def test_single_object_experiment():
    ds = generate_session(SessionConfig(objects=("papaya",), exposure_duration=64))
    result = run_experiment(ds, TrainConfig(epochs=3), EvalConfig())
    assert result.confusion.cells.shape == (1, 1)
    assert result.efficiency == result.confusion.cells[0, 0]
    assert not result.degenerate


def test_run_experiment_rejects_unusable_segments():
    ds = generate_session(SessionConfig(exposure_duration=8))
    with pytest.raises(ValueError):
        run_experiment(ds, TrainConfig(epochs=1))
