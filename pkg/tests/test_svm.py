import numpy as np
import pytest

from rwrl.errors import (
    DimensionMismatchError,
    EmptyDataError,
    SingleClassError,
)
from rwrl.features import scale_features
from rwrl.svm import (
    KernelParams,
    kernel_matrix,
    svm_predict,
    svm_predict_batch,
    svm_train,
)

SEPARABLE_X = np.array([[0.0, 0.0], [1.0, 1.0], [4.0, 4.0], [5.0, 5.0]])
SEPARABLE_Y = np.array([0, 0, 1, 1])

XOR_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
XOR_Y = np.array([0, 0, 1, 1])


def ten_class_blobs(n_per_class=6, seed=0):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-10, 10, size=(10, 5))
    X, y = [], []
    for label, center in enumerate(centers):
        X.append(center + rng.normal(scale=0.3, size=(n_per_class, 5)))
        y.extend([label] * n_per_class)
    return np.vstack(X), np.array(y)


class TestTraining:
    def test_linear_separable(self):
        model = svm_train(SEPARABLE_X, SEPARABLE_Y,
                          KernelParams("linear", C=10.0), seed=0)
        assert (svm_predict_batch(model, SEPARABLE_X) == SEPARABLE_Y).all()

    def test_xor_with_quadratic_kernel(self):
        model = svm_train(XOR_X, XOR_Y,
                          KernelParams("polynomial", degree=2, coef0=1.0,
                                       C=10.0), seed=0)
        assert (svm_predict_batch(model, XOR_X) == XOR_Y).all()

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassError):
            svm_train(np.zeros((3, 2)), np.zeros(3, dtype=int))

    def test_empty_rejected(self):
        with pytest.raises(EmptyDataError):
            svm_train(np.zeros((0, 2)), np.zeros(0, dtype=int))

    def test_label_count_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            svm_train(np.zeros((3, 2)), np.array([0, 1]))

    def test_dual_constraints_hold(self):
        X, y = ten_class_blobs(seed=3)
        model = svm_train(X, y, KernelParams("rbf", gamma=0.5, C=2.0), seed=1)
        for machine in model.machines:
            alphas = np.abs(machine.coefficients)
            assert (alphas <= 2.0 + 1e-9).all()
            assert (alphas > 0).all()  # only support vectors are stored
            assert abs(machine.coefficients.sum()) <= 1e-6

    def test_separable_margins(self):
        model = svm_train(SEPARABLE_X, SEPARABLE_Y,
                          KernelParams("linear", C=10.0), seed=0)
        machine = model.machines[0]
        Xs = scale_features(SEPARABLE_X, model.mean, model.std)
        decisions = machine.decision(model.params, Xs)
        signed = np.where(SEPARABLE_Y == machine.first, 1.0, -1.0) * decisions
        assert (signed >= 1.0 - 1e-3).all()

    def test_deterministic_model_bytes(self):
        from rwrl.model_io import model_save
        X, y = ten_class_blobs(seed=4)
        params = KernelParams("polynomial")
        a = model_save(svm_train(X, y, params, seed=7))
        b = model_save(svm_train(X, y, params, seed=7))
        assert a == b

    def test_duplicated_training_set_same_predictions(self):
        rng = np.random.default_rng(5)
        probes = rng.uniform(-1, 6, size=(40, 2))
        base = svm_train(SEPARABLE_X, SEPARABLE_Y,
                         KernelParams("linear", C=10.0), seed=0)
        doubled = svm_train(np.vstack([SEPARABLE_X, SEPARABLE_X]),
                            np.concatenate([SEPARABLE_Y, SEPARABLE_Y]),
                            KernelParams("linear", C=10.0), seed=0)
        assert (svm_predict_batch(base, probes)
                == svm_predict_batch(doubled, probes)).all()


class TestPrediction:
    def test_training_points_recovered(self):
        X, y = ten_class_blobs(seed=6)
        model = svm_train(X, y, KernelParams("polynomial"), seed=0)
        assert (svm_predict_batch(model, X) == y).all()

    def test_vote_counts_sum(self):
        X, y = ten_class_blobs(seed=8)
        model = svm_train(X, y, KernelParams("polynomial"), seed=0)
        label, votes = svm_predict(model, X[17])
        assert sum(votes.values()) == 45
        assert label == y[17]

    def test_dimension_mismatch(self):
        model = svm_train(SEPARABLE_X, SEPARABLE_Y,
                          KernelParams("linear"), seed=0)
        with pytest.raises(DimensionMismatchError):
            svm_predict(model, np.zeros(5))


class TestKernels:
    def test_linear(self):
        a = np.array([[1.0, 2.0]])
        b = np.array([[3.0, 4.0]])
        assert kernel_matrix(KernelParams("linear"), a, b)[0, 0] == 11.0

    def test_polynomial(self):
        p = KernelParams("polynomial", degree=2, gamma=1.0, coef0=1.0)
        a = np.array([[1.0, 0.0]])
        assert kernel_matrix(p, a, a)[0, 0] == 4.0  # (1*1 + 1)^2

    def test_rbf_diagonal_is_one(self):
        p = KernelParams("rbf", gamma=0.7)
        a = np.random.default_rng(0).normal(size=(5, 3))
        assert np.allclose(np.diag(kernel_matrix(p, a, a)), 1.0)

    def test_bad_params_rejected(self):
        with pytest.raises(ValueError):
            KernelParams("polynomial", degree=0)
        with pytest.raises(ValueError):
            KernelParams("rbf", gamma=-1.0)
        with pytest.raises(ValueError):
            KernelParams("polynomial", C=0.0)
        with pytest.raises(ValueError):
            KernelParams("sigmoid")
