import json
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cadorder.features import fit_standardizer
from cadorder.learners import (
    DTConfig,
    DecisionTreeClassifier,
    GridBoundaryWarning,
    KNNClassifier,
    KNNConfig,
    MLPClassifier,
    MLPConfig,
    SVMClassifier,
    SVMConfig,
    TrainedModel,
    entropy,
    fit,
    gini,
    grid_search,
    kfold_split,
    load_model,
    make_config,
    rbf_kernel,
    save_model,
)
from cadorder.learners.knn import BallTree, brute_query
from cadorder.learners.model import ModelFormatError


def blobs(rng, n=120, classes=3, d=4, spread=0.6):
    centers = rng.normal(0, 3, size=(classes, d))
    y = rng.integers(0, classes, size=n)
    return centers[y] + rng.normal(0, spread, size=(n, d)), y


XOR_X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 5, dtype=float)
XOR_Y = np.array([0, 1, 1, 0] * 5)


# -- impurity -------------------------------------------------------------------


def test_impurity_values():
    assert gini([5, 0]) == 0 and entropy([5, 0]) == 0
    assert gini([1, 1]) == pytest.approx(0.5)
    assert entropy([1, 1]) == pytest.approx(1.0)
    assert gini([1, 1, 1, 1, 1, 1]) == pytest.approx(5 / 6)


# -- KNN ----------------------------------------------------------------------------


@given(st.integers(0, 2**31), st.integers(1, 12))
def test_ball_tree_matches_brute_force(seed, k):
    rng = np.random.default_rng(seed)
    # small integer coordinates: many exact distance ties, no rounding
    data = rng.integers(-4, 5, size=(60, 3)).astype(float)
    tree = BallTree(data, leaf_size=4)
    for q in rng.integers(-5, 6, size=(10, 3)).astype(float):
        idx, d2 = tree.query(q, k)
        np.testing.assert_array_equal(idx, oracles.knn_neighbors(data, q, k))
        np.testing.assert_array_equal(idx, brute_query(data, q, k)[0])


def test_knn_one_neighbor_returns_training_label(rng):
    X, y = blobs(rng)
    clf = KNNClassifier(KNNConfig(k=1)).fit(X, y)
    np.testing.assert_array_equal(clf.predict(X), y)


def test_knn_uniform_majority():
    X = np.array([[0.0], [0.1], [0.2], [5.0]])
    y = np.array([2, 2, 5, 5])
    clf = KNNClassifier(KNNConfig(k=3, weighting="uniform", algorithm="brute")).fit(X, y)
    assert clf.predict([[0.05]])[0] == 2


def test_knn_exact_match_wins_under_distance_weighting():
    X = np.array([[0.0], [1.0], [1.0]])
    y = np.array([0, 1, 1])
    clf = KNNClassifier(KNNConfig(k=3)).fit(X, y)
    assert clf.predict([[0.0]])[0] == 0


def test_knn_rejects_large_k():
    with pytest.raises(ValueError):
        KNNClassifier(KNNConfig(k=5)).fit(np.zeros((3, 2)), [0, 1, 0])


# -- decision tree -------------------------------------------------------------------


def test_dt_single_split():
    clf = DecisionTreeClassifier(DTConfig(max_depth=1)).fit([[0.0], [1.0]], [0, 3])
    np.testing.assert_array_equal(clf.predict([[0.0], [1.0]]), [0, 3])


def test_dt_pure_leaf():
    clf = DecisionTreeClassifier().fit(np.zeros((4, 2)), [4, 4, 4, 4])
    assert clf.depth == 0 and clf.predict([[9.0, 9.0]])[0] == 4


def test_dt_xor_needs_depth_two():
    shallow = DecisionTreeClassifier(DTConfig(max_depth=1)).fit(XOR_X, XOR_Y)
    deep = DecisionTreeClassifier(DTConfig(max_depth=17)).fit(XOR_X, XOR_Y)
    assert np.mean(shallow.predict(XOR_X) == XOR_Y) <= 0.75
    assert np.mean(deep.predict(XOR_X) == XOR_Y) == 1.0


@given(st.integers(0, 2**31))
def test_dt_fits_distinct_points_exactly(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 6, size=40)
    clf = DecisionTreeClassifier(DTConfig(max_depth=None)).fit(X, y)
    np.testing.assert_array_equal(clf.predict(X), y)


def test_dt_respects_max_depth(rng):
    X, y = blobs(rng, n=200, classes=6, spread=3.0)
    for depth in (1, 2, 4):
        assert DecisionTreeClassifier(DTConfig(max_depth=depth)).fit(X, y).depth <= depth


# -- MLP -----------------------------------------------------------------------------


def test_mlp_loss_decreases_and_fits(rng):
    X, y = blobs(rng, n=90, classes=3)
    clf = MLPClassifier(MLPConfig(hidden_size=8)).fit(X, y, seed=1)
    curve = clf.loss_curve_
    assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))
    assert np.mean(clf.predict(X) == y) > 0.95


def test_mlp_predicts_argmax(rng):
    X, y = blobs(rng, n=60, classes=4)
    with pytest.warns(UserWarning, match="without converging"):
        clf = MLPClassifier(MLPConfig(hidden_size=6, max_iter=5)).fit(X, y)
    np.testing.assert_array_equal(clf.predict(X), clf.classes_[clf.predict_proba(X).argmax(axis=1)])


@pytest.mark.parametrize("activation", ["tanh", "relu", "logistic"])
def test_mlp_seed_determinism(rng, activation):
    X, y = blobs(rng, n=50)
    cfg = MLPConfig(hidden_size=5, activation=activation, max_iter=40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = MLPClassifier(cfg).fit(X, y, seed=3)
        b = MLPClassifier(cfg).fit(X, y, seed=3)
    np.testing.assert_array_equal(a.theta_, b.theta_)


# -- SVM -----------------------------------------------------------------------------


def test_rbf_kernel_at_same_point():
    x = np.array([[0.3, -1.2, 4.0]])
    assert rbf_kernel(x, x, 0.08)[0, 0] == 1.0


def test_svm_multiclass_fits_blobs(rng):
    X, y = blobs(rng, n=90, classes=3)
    clf = SVMClassifier(SVMConfig()).fit(X, y)
    assert len(clf.machines_) == 3
    assert np.mean(clf.predict(X) == y) == 1.0


def test_svm_single_class():
    clf = SVMClassifier().fit(np.eye(3), [2, 2, 2])
    np.testing.assert_array_equal(clf.predict(np.zeros((2, 3))), [2, 2])


# -- model files -----------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["knn", "dt", "mlp", "svm"])
def test_model_round_trip(tmp_path, rng, kind):
    X, y = blobs(rng, n=60)
    std = fit_standardizer(X)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = fit(make_config(kind, {}), std.transform(X), y, seed=2, standardizer=std)
    path = tmp_path / "m.json"
    save_model(model, path)
    again = load_model(path)
    np.testing.assert_array_equal(again.predict_raw(X), model.predict_raw(X))
    assert again.to_json() == model.to_json()


def test_model_rejects_wrong_version(rng):
    X, y = blobs(rng, n=30)
    model = fit(make_config("dt", {}), X, y)
    doc = json.loads(model.to_json())
    doc["version"] = 999
    with pytest.raises(ModelFormatError):
        TrainedModel.from_dict(doc)


def test_model_rejects_non_finite(rng):
    X, y = blobs(rng, n=30)
    model = fit(make_config("dt", {}), X, y)
    with pytest.raises(ValueError):
        model.predict(np.full((1, X.shape[1]), np.nan))


def test_make_config_rejects_unknown():
    with pytest.raises(ValueError):
        make_config("forest", {})
    with pytest.raises((TypeError, ValueError)):
        make_config("dt", {"depth": 3})


# -- cross-validation ----------------------------------------------------------------


def test_kfold_sizes_and_partition():
    folds = kfold_split(10, 5, seed=0)
    assert [len(v) for _, v in folds] == [2] * 5
    assert sorted(np.concatenate([v for _, v in folds]).tolist()) == list(range(10))
    for train, val in folds:
        assert not set(train) & set(val)
    again = kfold_split(10, 5, seed=0)
    assert all(np.array_equal(a[1], b[1]) for a, b in zip(folds, again))


def test_grid_single_point(rng):
    X, y = blobs(rng, n=30)
    best, table = grid_search("dt", {"max_depth": [3]}, X, y, k=3)
    assert best.max_depth == 3 and len(table) == 1


def test_grid_prefers_deep_tree_on_xor():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridBoundaryWarning)
        best, table = grid_search("dt", {"max_depth": [1, 17]}, XOR_X, XOR_Y, k=5)
    assert best.max_depth == 17
    assert table[0]["mean_accuracy"] <= 0.75


def test_grid_boundary_warning():
    with pytest.warns(GridBoundaryWarning):
        grid_search("dt", {"max_depth": [1, 17]}, XOR_X, XOR_Y, k=5)


def test_grid_interior_optimum_is_quiet(rng):
    X, y = blobs(rng, n=80, classes=2, spread=0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error", GridBoundaryWarning)
        # every k scores 100%, so the first listed value wins, and 3 is interior
        grid_search("knn", {"k": [3, 1, 5]}, X, y, k=4)
