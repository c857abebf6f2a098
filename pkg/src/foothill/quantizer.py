"""Shifted penalties and binary quantization of a small dense network.

The shifted foothill penalty p(x - mu*sign(x)) vanishes at x = +/-mu, so
adding it to the task loss drags latent weights toward mu * {-1, +1}
while the forward pass runs on sign-binarized weights and activations.
Modified L1 and L2 baselines (| |x|-mu | and (|x|-mu)^2) share the
interface. sign(0) is +1 throughout.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .penalty import PenaltyParams, grad as penalty_grad, value as penalty_value

MU_FLOOR = 1e-4
STE_CLIP = 1.0
# a weight counts as concentrated when it is within 10% of +mu or -mu
CONCENTRATION_BAND = 0.1

KINDS = ("foothill", "mod_l1", "mod_l2")


@dataclass(frozen=True)
class ShiftedPenalty:
    """Regularizer pulling weights toward +/-mu: shifted foothill or L1/L2 baselines."""

    kind: str
    params: PenaltyParams | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "foothill" and self.params is None:
            raise ValueError("foothill kind requires penalty params")


def _sign(x):
    # sign with sign(0) = +1, so binarization is total and deterministic
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def _check_mu(mu):
    mu = np.asarray(mu, dtype=np.float64)
    if not np.all(mu > 0):
        raise ValueError("mu must be positive")
    return mu


def shifted_eval(pen: ShiftedPenalty, x, mu):
    """Penalty value at x for target magnitude mu (> 0); zero at x = +/-mu."""
    mu = _check_mu(mu)
    x = np.asarray(x, dtype=np.float64)
    if pen.kind == "foothill":
        out = penalty_value(pen.params, x - mu * _sign(x))
    elif pen.kind == "mod_l1":
        out = np.abs(np.abs(x) - mu)
    else:
        out = (np.abs(x) - mu) ** 2
    out = np.asarray(out)
    return out if out.ndim else float(out)


def shifted_grad(pen: ShiftedPenalty, x, mu):
    """Derivatives (d/dx, d/dmu) of the shifted penalty.

    For the non-smooth baselines the subgradient 0 is chosen at kinks.
    """
    mu = _check_mu(mu)
    x = np.asarray(x, dtype=np.float64)
    s = _sign(x)
    if pen.kind == "foothill":
        g = penalty_grad(pen.params, x - mu * s)
        d_dx, d_dmu = g, -s * g
    elif pen.kind == "mod_l1":
        t = np.abs(x) - mu
        d_dx = np.sign(t) * np.sign(x)
        d_dmu = -np.sign(t)
    else:
        t = np.abs(x) - mu
        d_dx = 2.0 * t * np.sign(x)
        d_dmu = -2.0 * t
    d_dx, d_dmu = np.asarray(d_dx), np.asarray(d_dmu)
    if d_dx.ndim:
        return d_dx, d_dmu
    return float(d_dx), float(d_dmu)


def lambda_schedule(lambda_base: float, epoch: int) -> float:
    """Regularization weight at a given epoch: lambda_base * log(epoch + 1).

    Zero at epoch 0 and strictly increasing afterwards.
    """
    return lambda_base * math.log(epoch + 1)


@dataclass
class TrainConfig:
    epochs: int
    batch_size: int
    learning_rate: float
    lambda_base: float
    seed: int
    penalty: ShiftedPenalty

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs!r}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size!r}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate!r}")
        # lambda_base = 0 is the unregularized control
        if self.lambda_base < 0:
            raise ValueError(f"lambda_base must be >= 0, got {self.lambda_base!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")


@dataclass
class Layer:
    W: np.ndarray            # (fan_in, fan_out) latent weights
    b: np.ndarray            # (fan_out,)
    mu: np.ndarray           # (fan_out,) per-neuron scale, > 0
    binary: bool

    def copy(self):
        return Layer(self.W.copy(), self.b.copy(), self.mu.copy(), self.binary)


@dataclass
class QuantNet:
    """Dense net with sign activations on hidden layers and identity output.

    All layers except the first and the last run binarized: the forward
    pass uses sign(W) on sign(inputs), scaled per neuron by mu. The first
    and last layers stay full-precision.
    """

    layers: list = field(default_factory=list)

    @classmethod
    def initialize(cls, sizes, rng):
        if len(sizes) < 2:
            raise ValueError("need at least an input and an output size")
        layers = []
        n_layers = len(sizes) - 1
        for i in range(n_layers):
            fan_in, fan_out = sizes[i], sizes[i + 1]
            W = rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in)
            mu = np.maximum(np.mean(np.abs(W), axis=0), MU_FLOOR)
            binary = 0 < i < n_layers - 1
            layers.append(Layer(W=W, b=np.zeros(fan_out), mu=mu, binary=binary))
        return cls(layers=layers)

    def copy(self):
        return QuantNet(layers=[layer.copy() for layer in self.layers])


@dataclass
class QuantReport:
    train_accuracy: list
    concentration: list
    lambdas: list
    final_mu: list


def _forward_binary(net: QuantNet, X):
    """Training-mode forward: binarized weights/activations, mu scaling.

    The preactivation is computed as s_in @ (sign(W) * mu), the same
    operation order a plain forward uses on a hardened snapshot, so
    binarize_snapshot evaluation reproduces this pass bitwise. Returns
    logits and the per-layer cache needed for backprop.
    """
    a = X
    cache = []
    last = len(net.layers) - 1
    for i, layer in enumerate(net.layers):
        if layer.binary:
            s_in = _sign(a)
            wb = _sign(layer.W)
            m = s_in @ wb
            z = s_in @ (wb * layer.mu) + layer.b
        else:
            s_in = None
            m = None
            z = a @ layer.W + layer.b
        cache.append((a, s_in, m, z))
        a = _sign(z) if i < last else z
    return a, cache


def _softmax_loss_grad(logits, labels):
    zmax = logits.max(axis=1, keepdims=True)
    e = np.exp(logits - zmax)
    p = e / e.sum(axis=1, keepdims=True)
    nb = labels.shape[0]
    rows = np.arange(nb)
    loss = float(-np.mean(np.log(p[rows, labels] + 1e-300)))
    dz = p
    dz[rows, labels] -= 1.0
    dz /= nb
    return loss, dz


def _backward(net: QuantNet, cache, dz_last):
    """Gradients of the batch loss w.r.t. W, b, mu via the straight-through rule.

    sign() backpropagates as identity, zeroed where the pre-sign value
    exceeds STE_CLIP in magnitude.
    """
    grads = [None] * len(net.layers)
    last = len(net.layers) - 1
    d_out = dz_last
    for i in range(last, -1, -1):
        layer = net.layers[i]
        a_in, s_in, m, z = cache[i]
        dz = d_out if i == last else d_out * (np.abs(z) <= STE_CLIP)
        if layer.binary:
            dmu = (dz * m).sum(axis=0)
            dm = dz * layer.mu
            dW = (s_in.T @ dm) * (np.abs(layer.W) <= STE_CLIP)
            db = dz.sum(axis=0)
            d_out = (dm @ _sign(layer.W).T) * (np.abs(a_in) <= STE_CLIP)
        else:
            dmu = None
            dW = a_in.T @ dz
            db = dz.sum(axis=0)
            d_out = dz @ layer.W.T
        grads[i] = (dW, db, dmu)
    return grads


def concentration(net: QuantNet) -> float:
    """Fraction of binarized-layer weights within 10% of +mu or -mu."""
    near, total = 0, 0
    for layer in net.layers:
        if not layer.binary:
            continue
        dist = np.minimum(np.abs(layer.W - layer.mu), np.abs(layer.W + layer.mu))
        near += int(np.sum(dist < CONCENTRATION_BAND * layer.mu))
        total += layer.W.size
    return near / total if total else 0.0


def train(X, y, net: QuantNet, cfg: TrainConfig) -> QuantReport:
    """Minibatch SGD on the quantized forward pass, shifted penalty on latent weights.

    Per step, binarized layers get the straight-through loss gradient plus
    lambda(epoch) times the penalty derivative; mu gets its forward-path
    gradient plus the penalty's d/dmu summed over the neuron's weights,
    clamped at MU_FLOOR. Deterministic given cfg.seed. Raises
    ValueError on an empty dataset, RuntimeError if the loss goes
    non-finite.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("dataset must be a nonempty 2-D feature matrix")
    if y.shape[0] != X.shape[0]:
        raise ValueError("labels must match the number of rows in X")
    y = y.astype(np.int64)

    rng = np.random.default_rng(cfg.seed)
    n = X.shape[0]
    lr = cfg.learning_rate
    accs, concs, lams = [], [], []

    for epoch in range(cfg.epochs):
        lam_t = lambda_schedule(cfg.lambda_base, epoch)
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            sel = order[start:start + cfg.batch_size]
            logits, cache = _forward_binary(net, X[sel])
            loss, dz = _softmax_loss_grad(logits, y[sel])
            if not np.isfinite(loss):
                raise RuntimeError(f"non-finite loss at epoch {epoch}")
            grads = _backward(net, cache, dz)
            for layer, (dW, db, dmu) in zip(net.layers, grads):
                if layer.binary:
                    pg_w, pg_mu = shifted_grad(cfg.penalty, layer.W, layer.mu)
                    layer.W -= lr * (dW + lam_t * pg_w)
                    layer.mu -= lr * (dmu + lam_t * pg_mu.sum(axis=0))
                    np.maximum(layer.mu, MU_FLOOR, out=layer.mu)
                else:
                    layer.W -= lr * dW
                layer.b -= lr * db
        logits, _ = _forward_binary(net, X)
        accs.append(float(np.mean(np.argmax(logits, axis=1) == y)))
        concs.append(concentration(net))
        lams.append(lam_t)

    return QuantReport(
        train_accuracy=accs,
        concentration=concs,
        lambdas=lams,
        final_mu=[layer.mu.copy() for layer in net.layers],
    )


def binarize_snapshot(net: QuantNet) -> QuantNet:
    """Copy of the net with binarized-layer weights hardened to mu * sign(W).

    Plain evaluation of the snapshot reproduces the quantized forward pass
    exactly, so its accuracy is the deployed (quantized) accuracy.
    """
    snap = net.copy()
    for layer in snap.layers:
        if layer.binary:
            layer.W = _sign(layer.W) * layer.mu
    return snap


def predict(net: QuantNet, X):
    """Plain forward with the stored weights: affine layers, sign on hidden."""
    a = np.asarray(X, dtype=np.float64)
    last = len(net.layers) - 1
    for i, layer in enumerate(net.layers):
        z = a @ layer.W + layer.b
        a = _sign(z) if i < last else z
    return a


def accuracy(net: QuantNet, X, y) -> float:
    return float(np.mean(np.argmax(predict(net, X), axis=1) == np.asarray(y)))


def two_gaussians(n: int, separation: float = 4.0, seed: int = 0, p: int = 2):
    """Balanced two-class Gaussian blobs, means `separation` apart, unit noise."""
    rng = np.random.default_rng(seed)
    n0 = n // 2
    shift = np.full(p, separation / (2.0 * np.sqrt(p)))
    X = rng.standard_normal((n, p))
    X[:n0] -= shift
    X[n0:] += shift
    y = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n - n0, dtype=np.int64)])
    order = rng.permutation(n)
    return X[order], y[order]
