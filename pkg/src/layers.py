import numpy as np

import autodiff as ad
import config
import consts
import errors


def uniform(rng, shape, bound):
    return rng.uniform(-bound, bound, size=shape)


class Embedding(object):
    """Lookup table W_w of |V| x d rows; the pad row stays zero."""

    def __init__(self, registry, name, vocab_size, dim, rng, weights=None, trainable=True,
                 pad_index=consts.PAD_INDEX, unk_index=consts.UNK_INDEX):
        if weights is None:
            weights = uniform(rng, (vocab_size, dim), config.EMBEDDING_INIT_RANGE)
        weights = np.array(weights, dtype=np.float64)
        if weights.shape != (vocab_size, dim):
            raise errors.DimensionError('embedding table {} for |V|={} d={}'.format(
                weights.shape, vocab_size, dim))
        weights[pad_index] = 0.0
        self.vocab_size = vocab_size
        self.dim = dim
        self.pad_index = pad_index
        self.unk_index = unk_index
        self.weight = registry.add('{}.weight'.format(name), weights, trainable)

    def __call__(self, token_ids):
        ids = np.asarray(token_ids, dtype=np.int64)
        bad = np.argwhere((ids < 0) | (ids >= self.vocab_size))
        if len(bad):
            position = tuple(int(x) for x in bad[0])
            raise errors.TokenIndexError(int(ids[position]), position, self.vocab_size)
        return ad.gather_rows(self.weight, ids, skip=self.pad_index)


def embed(table, token_ids):
    return table(token_ids)


class LSTMCell(object):

    GATES = ('i', 'f', 'g', 'o')

    def __init__(self, registry, name, input_size, hidden_size, rng):
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.W, self.U, self.b = {}, {}, {}
        for gate in self.GATES:
            self.W[gate] = registry.add('{}.W_{}'.format(name, gate),
                                        uniform(rng, (input_size, hidden_size), config.INIT_RANGE))
            self.U[gate] = registry.add('{}.U_{}'.format(name, gate),
                                        uniform(rng, (hidden_size, hidden_size), config.INIT_RANGE))
            bias = np.full(hidden_size, config.FORGET_BIAS if gate == 'f' else 0.0)
            self.b[gate] = registry.add('{}.b_{}'.format(name, gate), bias)

    def gate(self, name, x, h_prev):
        return ad.add(ad.add(ad.matmul(x, self.W[name]), ad.matmul(h_prev, self.U[name])), self.b[name])

    def zero_state(self, batch_size):
        zeros = np.zeros((batch_size, self.hidden_size))
        return ad.Tensor(zeros), ad.Tensor(zeros)


def lstm_step(cell, h_prev, c_prev, x):
    x, h_prev, c_prev = ad.as_tensor(x), ad.as_tensor(h_prev), ad.as_tensor(c_prev)
    if x.ndim == 1:
        h, c = lstm_step(cell, ad.reshape(h_prev, (1, -1)), ad.reshape(c_prev, (1, -1)),
                         ad.reshape(x, (1, -1)))
        return ad.reshape(h, (-1,)), ad.reshape(c, (-1,))
    if x.shape[-1] != cell.input_size or h_prev.shape[-1] != cell.hidden_size \
            or c_prev.shape != h_prev.shape or x.shape[0] != h_prev.shape[0]:
        raise errors.DimensionError('lstm step with x {}, h {}, c {} for cell {}x{}'.format(
            x.shape, h_prev.shape, c_prev.shape, cell.input_size, cell.hidden_size))
    i = ad.sigmoid(cell.gate('i', x, h_prev))
    f = ad.sigmoid(cell.gate('f', x, h_prev))
    g = ad.tanh(cell.gate('g', x, h_prev))
    o = ad.sigmoid(cell.gate('o', x, h_prev))
    c = ad.add(ad.mul(f, c_prev), ad.mul(i, g))
    h = ad.mul(o, ad.tanh(c))
    return h, c


def run_lstm(cell, X):
    """Left-to-right scan from a zero state over [n x d] or [batch x n x d] input."""
    X = ad.as_tensor(X)
    if X.ndim == 2:
        return ad.reshape(run_lstm(cell, ad.reshape(X, (1,) + X.shape)), (X.shape[0], cell.hidden_size))
    if X.ndim != 3 or X.shape[1] == 0:
        raise errors.EmptySequenceError('lstm input of shape {}'.format(X.shape))
    h, c = cell.zero_state(X.shape[0])
    states = []
    for t in range(X.shape[1]):
        h, c = lstm_step(cell, h, c, ad.select(X, t, axis=1))
        states.append(h)
    return ad.stack(states, axis=1)


def reverse_order(lengths, steps):
    # reverse each row within its own length, padding stays in place
    order = np.tile(np.arange(steps), (len(lengths), 1))
    for row, length in enumerate(lengths):
        order[row, :length] = np.arange(length)[::-1]
    return order


class BiLSTMStack(object):

    def __init__(self, registry, name, dim, layers, rng):
        if dim % 2:
            raise errors.ConfigError('Bi-LSTM dimension {} must be even'.format(dim))
        self.dim = dim
        self.layers = []
        for layer in range(layers):
            forward = LSTMCell(registry, '{}.{}.forward'.format(name, layer), dim, dim // 2, rng)
            backward = LSTMCell(registry, '{}.{}.backward'.format(name, layer), dim, dim // 2, rng)
            self.layers.append((forward, backward))

    def __call__(self, X, lengths=None, dropout=0.0, training=False, rng=None):
        return run_bilstm_stack(self, X, lengths, dropout, training, rng)


def run_bilstm_stack(stack, X, lengths=None, dropout=0.0, training=False, rng=None):
    X = ad.as_tensor(X)
    if X.ndim == 2:
        out = run_bilstm_stack(stack, ad.reshape(X, (1,) + X.shape), None, dropout, training, rng)
        return ad.reshape(out, (X.shape[0], stack.dim))
    if X.ndim != 3 or X.shape[1] == 0:
        raise errors.EmptySequenceError('Bi-LSTM input of shape {}'.format(X.shape))
    if lengths is None:
        lengths = [X.shape[1]] * X.shape[0]
    order = reverse_order(lengths, X.shape[1])
    H = X
    for forward, backward in stack.layers:
        ahead = run_lstm(forward, H)
        behind = ad.permute_steps(run_lstm(backward, ad.permute_steps(H, order)), order)
        H = ad.concat([ahead, behind], axis=-1)
        H = ad.dropout(H, dropout, training, rng)
    return H


class AttentionHead(object):
    """One category's attention: alpha = softmax(u . tanh(W h + b)) over positions."""

    def __init__(self, registry, name, dim, rng):
        self.W = registry.add('{}.W'.format(name), uniform(rng, (dim, dim), config.INIT_RANGE))
        self.b = registry.add('{}.b'.format(name), np.zeros(dim))
        self.u = registry.add('{}.u'.format(name), uniform(rng, (dim, 1), config.INIT_RANGE))

    def __call__(self, H, mask=None):
        return attention(self, H, mask)


def attention(head, H, mask=None):
    H = ad.as_tensor(H)
    if H.ndim == 2:
        alpha = attention(head, ad.reshape(H, (1,) + H.shape), None if mask is None else np.asarray(mask)[None])
        return ad.reshape(alpha, (H.shape[0],))
    batch, steps, dim = H.shape
    if steps == 0:
        raise errors.EmptySequenceError('attention input of shape {}'.format(H.shape))
    M = ad.tanh(ad.add(ad.matmul(ad.reshape(H, (batch * steps, dim)), head.W), head.b))
    scores = ad.reshape(ad.matmul(M, head.u), (batch, steps))
    return ad.softmax(scores, mask)


class Linear(object):

    def __init__(self, registry, name, in_size, out_size, rng):
        self.in_size = in_size
        self.out_size = out_size
        self.W = registry.add('{}.W'.format(name), uniform(rng, (in_size, out_size), config.INIT_RANGE))
        self.b = registry.add('{}.b'.format(name), np.zeros(out_size))

    def __call__(self, x):
        return linear(self.W, self.b, x)


def linear(W, b, x):
    x = ad.as_tensor(x)
    if x.ndim == 1:
        return ad.reshape(linear(W, b, ad.reshape(x, (1, -1))), (-1,))
    if x.ndim > 2:
        lead = x.shape[:-1]
        flat = linear(W, b, ad.reshape(x, (-1, x.shape[-1])))
        return ad.reshape(flat, lead + (flat.shape[-1],))
    return ad.add(ad.matmul(x, W), b)
