import numpy as np
import pytest

import osmlelm


def stream(n=120, d=6, m=3, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, (n, d))
    y = (rng.random((n, m)) < 0.4).astype(np.uint8)
    return x, y


def test_sequential_updates_match_numpy_least_squares():
    x, y = stream()
    layer = osmlelm.init_hidden(6, 12, osmlelm.Activation.sigmoid, 3)
    t = osmlelm.to_bipolar(y)
    model = osmlelm.init_phase(layer, x[:20], t[:20])
    for i in range(20, len(x)):
        osmlelm.update(model, x[i], t[i])
    h = osmlelm.hidden_output(layer, x)
    beta, *_ = np.linalg.lstsq(h, t, rcond=None)
    assert np.max(np.abs(model.beta - beta)) < 1e-6
    assert model.samples_seen == len(x)


def test_hidden_output_matches_scalar_formula():
    x, _ = stream(n=4, d=3)
    layer = osmlelm.init_hidden(3, 5, osmlelm.Activation.sigmoid, 11)
    w, b = layer.weights, np.asarray(layer.biases)
    expected = 1.0 / (1.0 + np.exp(-(x @ w.T + b)))
    np.testing.assert_allclose(osmlelm.hidden_output(layer, x), expected, rtol=0, atol=1e-12)


def test_calibrate_decode_and_metrics():
    truth = np.array([[1, 0, 1], [0, 1, 0]], dtype=np.uint8)
    raw = np.where(truth == 1, 0.9, -0.9)
    cal = osmlelm.calibrate_threshold(raw, truth)
    assert cal.threshold == 0.0
    assert cal.training_hamming == 0.0
    pred = osmlelm.decode(raw, cal.threshold)
    report = osmlelm.evaluate(pred, truth)
    assert report.hamming_loss == 0.0
    assert report.accuracy == 1.0
    assert osmlelm.label_cardinality(truth) == 1.5


def test_errors_surface_as_python_exceptions(tmp_path):
    layer = osmlelm.init_hidden(2, 8)
    with pytest.raises(osmlelm.NumericalError):
        osmlelm.init_phase(layer, np.zeros((3, 2)), np.ones((3, 1)))
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,1\n1,2\n")
    with pytest.raises(osmlelm.DataError):
        osmlelm.load_csv(str(bad), 1)


def test_model_file_round_trip(tmp_path):
    x, y = stream(n=30, d=4, m=2, seed=5)
    model = osmlelm.init_phase(osmlelm.init_hidden(4, 10, osmlelm.Activation.sine, 2), x, osmlelm.to_bipolar(y))
    model.threshold = 0.125
    path = tmp_path / "model.txt"
    osmlelm.save_model(str(path), osmlelm.ModelFile(model))
    back = osmlelm.load_model(str(path)).model
    assert np.array_equal(back.beta, model.beta)
    assert np.array_equal(back.m, model.m)
    assert back.threshold == 0.125


def test_kfold_partitions():
    folds = osmlelm.kfold(23, 5, 1)
    tests = sorted(i for f in folds for i in f.test)
    assert tests == list(range(23))
