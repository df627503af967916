"""Lightweight regressors for the overall-quality estimate.

Three interchangeable model kinds — ridge linear regression, a bagged
CART-style regression forest, and a one-hidden-layer MLP — all trained
on internally standardized features, all deterministic under a fixed
seed, and all serializable to a versioned, checksummed text format.
"""

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CorruptModel,
    DimensionMismatch,
    FormatVersionMismatch,
    NonFiniteLoss,
    SchemaMismatch,
    SingularSystem,
    TooFewSamples,
)
from .features import SCHEMA_VERSION, FeatureVector

MODEL_FORMAT = "quality-model-v1"

MODEL_KINDS = ("linear", "forest", "mlp")


@dataclass(frozen=True)
class ForestConfig:
    trees: int = 100
    max_depth: int = 6
    min_leaf: int = 2
    feature_frac: float = 1 / 3
    seed: int = 0
    bootstrap: bool = True


@dataclass(frozen=True)
class MLPConfig:
    hidden: int = 16
    lr: float = 0.01
    epochs: int = 2000
    seed: int = 0


@dataclass(frozen=True)
class LinearConfig:
    ridge_lambda: float = 1e-6


@dataclass
class TrainedModel:
    """A fitted regressor plus the standardization it was trained under."""

    kind: str
    params: dict
    feature_means: np.ndarray
    feature_stds: np.ndarray
    schema_version: str
    training_meta: dict

    def __post_init__(self):
        assert self.kind in MODEL_KINDS
        assert np.all(self.feature_stds > 0)


def _check_training_inputs(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1:
        raise DimensionMismatch(f"need 2-D X and 1-D y, got shapes {X.shape} and {y.shape}")
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.shape[0]} targets")
    if X.shape[0] < 2:
        raise TooFewSamples(f"need at least 2 samples, got {X.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DimensionMismatch("training data contains non-finite values")
    return X, y


def _standardization(X: np.ndarray):
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    # A spread at rounding-noise level relative to the column magnitude
    # means the column is constant; dividing by such a std would turn
    # accumulated float error into a feature amplified by ~1/eps.
    floor = 1e-9 * np.maximum(1.0, np.abs(means))
    stds = np.where(stds <= floor, 1.0, stds)
    return means, stds


def _base_meta(n: int, d: int, hyperparameters: dict, extra_meta: dict | None) -> dict:
    meta = {"n_samples": n, "n_features": d, "hyperparameters": hyperparameters}
    if extra_meta:
        meta.update(extra_meta)
    return meta


# ---------------------------------------------------------------------------
# linear


def fit_linear(
    X,
    y,
    ridge_lambda: float = 1e-6,
    schema_version: str = SCHEMA_VERSION,
    extra_meta: dict | None = None,
) -> TrainedModel:
    """Ridge regression via the normal equations, intercept unregularized."""
    X, y = _check_training_inputs(X, y)
    n, d = X.shape
    means, stds = _standardization(X)
    Z = (X - means) / stds
    A = np.hstack([Z, np.ones((n, 1))])
    gram = A.T @ A
    reg = np.diag(np.append(np.full(d, float(ridge_lambda)), 0.0))
    try:
        w = np.linalg.solve(gram + reg, A.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"normal equations are singular: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise SingularSystem("normal equations produced non-finite coefficients")
    params = {"weights": w[:d].tolist(), "intercept": float(w[d])}
    meta = _base_meta(n, d, {"kind": "linear", "ridge_lambda": float(ridge_lambda)}, extra_meta)
    return TrainedModel("linear", params, means, stds, schema_version, meta)


def linear_coefficients(model: TrainedModel):
    """(weights, intercept) mapped back to original feature units."""
    assert model.kind == "linear"
    w_std = np.asarray(model.params["weights"], dtype=float)
    w = w_std / model.feature_stds
    b = model.params["intercept"] - float(np.dot(w_std, model.feature_means / model.feature_stds))
    return w, b


# ---------------------------------------------------------------------------
# MLP


def mlp_init(d: int, hidden: int, seed: int) -> dict:
    """Seeded uniform init in +/- 1/sqrt(fan_in); zero biases."""
    rng = np.random.default_rng(seed)
    lim1 = 1.0 / np.sqrt(d)
    lim2 = 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-lim1, lim1, size=(d, hidden)),
        "b1": np.zeros(hidden),
        "w2": rng.uniform(-lim2, lim2, size=hidden),
        "b2": 0.0,
    }


def mlp_forward(params: dict, Z: np.ndarray) -> np.ndarray:
    H = np.maximum(Z @ params["W1"] + params["b1"], 0.0)
    return H @ params["w2"] + params["b2"]


def mlp_loss_and_gradients(params: dict, Z: np.ndarray, y: np.ndarray):
    """Mean-squared-error loss and its analytic gradients.

    The ReLU subgradient at exactly zero is taken as 0. Exposed so the
    gradients can be checked against finite differences.
    """
    n = Z.shape[0]
    pre = Z @ params["W1"] + params["b1"]
    H = np.maximum(pre, 0.0)
    pred = H @ params["w2"] + params["b2"]
    err = pred - y
    loss = float(np.mean(err**2))
    g = 2.0 * err / n
    gH = np.outer(g, params["w2"]) * (pre > 0.0)
    grads = {
        "W1": Z.T @ gH,
        "b1": gH.sum(axis=0),
        "w2": H.T @ g,
        "b2": float(g.sum()),
    }
    return loss, grads


def fit_mlp(
    X,
    y,
    config: MLPConfig | dict | None = None,
    schema_version: str = SCHEMA_VERSION,
    extra_meta: dict | None = None,
) -> TrainedModel:
    """One hidden ReLU layer trained by full-batch gradient descent."""
    cfg = config if isinstance(config, MLPConfig) else MLPConfig(**(config or {}))
    X, y = _check_training_inputs(X, y)
    n, d = X.shape
    means, stds = _standardization(X)
    Z = (X - means) / stds
    # The target is standardized during optimization (predictions are
    # mapped back), which keeps the fixed default learning rate usable
    # across target scales.
    y_mean = float(y.mean())
    y_std = float(y.std())
    if y_std == 0.0:
        y_std = 1.0
    ys = (y - y_mean) / y_std

    params = mlp_init(d, cfg.hidden, cfg.seed)
    losses = []
    for epoch in range(cfg.epochs):
        loss, grads = mlp_loss_and_gradients(params, Z, ys)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"training diverged at epoch {epoch}", epoch=epoch)
        losses.append(loss)
        params["W1"] = params["W1"] - cfg.lr * grads["W1"]
        params["b1"] = params["b1"] - cfg.lr * grads["b1"]
        params["w2"] = params["w2"] - cfg.lr * grads["w2"]
        params["b2"] = params["b2"] - cfg.lr * grads["b2"]

    out_params = {
        "W1": params["W1"].tolist(),
        "b1": params["b1"].tolist(),
        "w2": params["w2"].tolist(),
        "b2": float(params["b2"]),
        "y_mean": y_mean,
        "y_std": y_std,
    }
    meta = _base_meta(n, d, {"kind": "mlp", **asdict(cfg)}, extra_meta)
    meta["loss_curve"] = losses
    meta["final_loss"] = losses[-1] if losses else None
    return TrainedModel("mlp", out_params, means, stds, schema_version, meta)


# ---------------------------------------------------------------------------
# forest


def _build_tree(X, y, rng, depth, cfg: ForestConfig):
    n, d = X.shape
    if depth >= cfg.max_depth or n < 2 * cfg.min_leaf or np.all(y == y[0]):
        return {"leaf": float(y.mean())}

    n_feats = max(1, int(round(cfg.feature_frac * d)))
    feats = np.sort(rng.choice(d, size=min(n_feats, d), replace=False))

    best = None  # (score, feature, threshold)
    for j in feats:
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys**2)
        total_sum, total_sq = csum[-1], csq[-1]
        for i in range(cfg.min_leaf, n - cfg.min_leaf + 1):
            if xs[i - 1] == xs[i]:
                continue
            left_sse = csq[i - 1] - csum[i - 1] ** 2 / i
            right_sum = total_sum - csum[i - 1]
            right_sse = (total_sq - csq[i - 1]) - right_sum**2 / (n - i)
            score = left_sse + right_sse
            if best is None or score < best[0]:
                best = (score, int(j), float((xs[i - 1] + xs[i]) / 2.0))

    if best is None:
        return {"leaf": float(y.mean())}
    _, feature, threshold = best
    mask = X[:, feature] <= threshold
    return {
        "feature": feature,
        "threshold": threshold,
        "left": _build_tree(X[mask], y[mask], rng, depth + 1, cfg),
        "right": _build_tree(X[~mask], y[~mask], rng, depth + 1, cfg),
    }


def _tree_predict(tree: dict, x: np.ndarray) -> float:
    while "leaf" not in tree:
        tree = tree["left"] if x[tree["feature"]] <= tree["threshold"] else tree["right"]
    return tree["leaf"]


def fit_forest(
    X,
    y,
    config: ForestConfig | dict | None = None,
    schema_version: str = SCHEMA_VERSION,
    extra_meta: dict | None = None,
) -> TrainedModel:
    """Bagged variance-reduction regression trees with random feature subsets."""
    cfg = config if isinstance(config, ForestConfig) else ForestConfig(**(config or {}))
    X, y = _check_training_inputs(X, y)
    n, d = X.shape
    means, stds = _standardization(X)
    Z = (X - means) / stds

    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.trees)
    trees = []
    for seq in seeds:
        rng = np.random.default_rng(seq)
        if cfg.bootstrap:
            idx = rng.integers(0, n, size=n)
            trees.append(_build_tree(Z[idx], y[idx], rng, 0, cfg))
        else:
            trees.append(_build_tree(Z, y, rng, 0, cfg))
    params = {"trees": trees}
    meta = _base_meta(n, d, {"kind": "forest", **asdict(cfg)}, extra_meta)
    return TrainedModel("forest", params, means, stds, schema_version, meta)


# ---------------------------------------------------------------------------
# unified fit / predict


def fit(
    kind: str,
    X,
    y,
    config: dict | None = None,
    schema_version: str = SCHEMA_VERSION,
    extra_meta: dict | None = None,
) -> TrainedModel:
    """Dispatch to the fitter for ``kind`` with an optional config dict."""
    if kind == "linear":
        cfg = LinearConfig(**(config or {}))
        return fit_linear(X, y, ridge_lambda=cfg.ridge_lambda, schema_version=schema_version, extra_meta=extra_meta)
    if kind == "forest":
        return fit_forest(X, y, config=config, schema_version=schema_version, extra_meta=extra_meta)
    if kind == "mlp":
        return fit_mlp(X, y, config=config, schema_version=schema_version, extra_meta=extra_meta)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def predict_matrix(model: TrainedModel, X) -> np.ndarray:
    """Predictions for raw (unstandardized) feature rows."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.feature_means.shape[0]:
        raise DimensionMismatch(
            f"expected shape (*, {model.feature_means.shape[0]}), got {X.shape}"
        )
    Z = (X - model.feature_means) / model.feature_stds
    if model.kind == "linear":
        w = np.asarray(model.params["weights"], dtype=float)
        out = Z @ w + model.params["intercept"]
    elif model.kind == "mlp":
        p = {
            "W1": np.asarray(model.params["W1"], dtype=float),
            "b1": np.asarray(model.params["b1"], dtype=float),
            "w2": np.asarray(model.params["w2"], dtype=float),
            "b2": float(model.params["b2"]),
        }
        out = mlp_forward(p, Z) * model.params["y_std"] + model.params["y_mean"]
    elif model.kind == "forest":
        trees = model.params["trees"]
        out = np.array(
            [sum(_tree_predict(t, row) for t in trees) / len(trees) for row in Z]
        )
    else:  # pragma: no cover
        raise ValueError(f"unknown model kind {model.kind!r}")
    if not np.all(np.isfinite(out)):
        raise SingularSystem("model produced a non-finite prediction")
    return out


def predict(model: TrainedModel, f: FeatureVector) -> float:
    """Prediction for one feature vector; schema versions must match."""
    if f.schema_version != model.schema_version:
        raise SchemaMismatch(
            f"feature schema {f.schema_version!r} does not match model schema {model.schema_version!r}"
        )
    return float(predict_matrix(model, np.asarray([f.values], dtype=float))[0])


# ---------------------------------------------------------------------------
# persistence


def _canonical_payload(model: TrainedModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "kind": model.kind,
        "schema_version": model.schema_version,
        "feature_means": model.feature_means.tolist(),
        "feature_stds": model.feature_stds.tolist(),
        "params": model.params,
        "training_meta": model.training_meta,
    }


def save_model(model: TrainedModel, path: str | Path) -> None:
    """Write the model as checksummed JSON text (byte-deterministic)."""
    payload = _canonical_payload(model)
    body = json.dumps(payload, sort_keys=True)
    checksum = hashlib.sha256(body.encode("utf-8")).hexdigest()
    doc = {"checksum": checksum, **payload}
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_model(path: str | Path, expected_schema_version: str | None = None) -> TrainedModel:
    """Read a model file, verifying format version and checksum."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except ValueError as exc:
        raise CorruptModel(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "format" not in doc:
        raise CorruptModel("model file lacks a format tag")
    if doc["format"] != MODEL_FORMAT:
        raise FormatVersionMismatch(
            f"model format {doc['format']!r} not supported (expected {MODEL_FORMAT!r})"
        )
    stored_checksum = doc.get("checksum")
    payload = {k: v for k, v in doc.items() if k != "checksum"}
    body = json.dumps(payload, sort_keys=True)
    if stored_checksum != hashlib.sha256(body.encode("utf-8")).hexdigest():
        raise CorruptModel("model file checksum mismatch")
    try:
        model = TrainedModel(
            kind=doc["kind"],
            params=doc["params"],
            feature_means=np.asarray(doc["feature_means"], dtype=float),
            feature_stds=np.asarray(doc["feature_stds"], dtype=float),
            schema_version=doc["schema_version"],
            training_meta=doc["training_meta"],
        )
    except (KeyError, AssertionError) as exc:
        raise CorruptModel(f"model file is missing required fields: {exc}") from exc
    if expected_schema_version is not None and model.schema_version != expected_schema_version:
        raise FormatVersionMismatch(
            f"model was trained for feature schema {model.schema_version!r}, "
            f"expected {expected_schema_version!r}"
        )
    return model
