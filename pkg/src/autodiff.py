"""Dense tensors with define-by-run reverse-mode differentiation.

Every primitive below computes its value with numpy and, when a tape is active
and one of its inputs requires a gradient, records a closure that pushes the
output gradient back to the inputs. Tapes are confined to the thread that opened
them; parameters carry their gradient buffers across tapes until `zero_grad`.

Broadcasting is deliberately narrow: operands of binary operations must have
equal shapes, or one of them is a scalar, or one of them is a vector whose
length equals the last extent of the other (a vector added to every row).
"""
import threading

import numpy as np

import config
import errors
from loggers import getLogger


logger = getLogger(__name__)

PRECISIONS = {
    'float32': np.float32,
    'float64': np.float64,
}

_precision = {'dtype': np.dtype(PRECISIONS[config.PRECISION])}
_local = threading.local()


def set_precision(name):
    if name not in PRECISIONS:
        raise errors.ConfigError('precision must be one of {}'.format(', '.join(sorted(PRECISIONS))))
    _precision['dtype'] = np.dtype(PRECISIONS[name])


def get_dtype():
    return _precision['dtype']


class Tensor(object):

    def __init__(self, values, requires_grad=False, name=None):
        self.values = np.asarray(values, dtype=get_dtype())
        self.requires_grad = requires_grad
        self.name = name
        self.grad = None
        self._parents = ()
        self._backward = None

    @property
    def shape(self):
        return self.values.shape

    @property
    def ndim(self):
        return self.values.ndim

    @property
    def size(self):
        return self.values.size

    def item(self):
        return float(self.values.reshape(-1)[0])

    def numpy(self):
        return self.values

    def __repr__(self):
        return 'Tensor({}, shape={}{})'.format(
            self.name or '', self.shape, ', grad' if self.requires_grad else '')

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)


class Parameter(Tensor):

    def __init__(self, values, name, trainable=True):
        super(Parameter, self).__init__(values, requires_grad=trainable, name=name)
        self.grad = np.zeros_like(self.values)

    @property
    def trainable(self):
        return self.requires_grad

    @trainable.setter
    def trainable(self, value):
        self.requires_grad = bool(value)


class Tape(object):
    """Ordered record of executed primitives; `backward` replays it in reverse."""

    def __init__(self):
        self.nodes = []

    def record(self, out, parents, backward):
        out._parents = parents
        out._backward = backward
        self.nodes.append(out)

    def __enter__(self):
        stack = getattr(_local, 'tapes', None)
        if stack is None:
            stack = _local.tapes = []
        stack.append(self)
        return self

    def __exit__(self, *exc):
        _local.tapes.pop()
        return False

    def __len__(self):
        return len(self.nodes)

    def backward(self, loss):
        if loss.size != 1:
            raise errors.ContractError('backward needs a scalar loss, got shape {}'.format(loss.shape))
        if not loss.requires_grad:
            return
        loss.grad = np.ones_like(loss.values)
        # outputs are recorded after their inputs, so reverse order is topological
        for node in reversed(self.nodes):
            if node.grad is None:
                continue
            node._backward(node.grad)


def current_tape():
    stack = getattr(_local, 'tapes', None)
    if stack:
        return stack[-1]
    return None


def backward(loss):
    tape = current_tape()
    if tape is None:
        raise errors.ContractError('backward called outside of a tape')
    tape.backward(loss)


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _accumulate(tensor, grad):
    if not tensor.requires_grad:
        return
    if tensor.grad is None:
        tensor.grad = np.array(grad, dtype=tensor.values.dtype)
    else:
        tensor.grad += grad


def _make(values, parents, backward):
    tape = current_tape()
    requires = tape is not None and any(p.requires_grad for p in parents)
    out = Tensor(values, requires_grad=requires)
    if requires:
        tape.record(out, parents, backward)
    return out


def _check_broadcast(a, b, op):
    if a.shape == b.shape or a.ndim == 0 or b.ndim == 0:
        return
    if b.ndim == 1 and a.ndim >= 1 and a.shape[-1] == b.shape[0]:
        return
    if a.ndim == 1 and b.ndim >= 1 and b.shape[-1] == a.shape[0]:
        return
    raise errors.DimensionError('{} of {} and {}'.format(op, a.shape, b.shape))


def _unbroadcast(grad, shape):
    if grad.shape == shape:
        return grad
    if len(shape) == 0:
        return grad.sum()
    return grad.reshape(-1, shape[0]).sum(axis=0)


# linear algebra
def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise errors.DimensionError('matmul of {} and {}'.format(a.shape, b.shape))

    def backward(g):
        _accumulate(a, g @ b.values.T)
        _accumulate(b, a.values.T @ g)

    return _make(a.values @ b.values, (a, b), backward)


def bmm(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 3 or b.ndim != 3 or a.shape[0] != b.shape[0] or a.shape[2] != b.shape[1]:
        raise errors.DimensionError('batched matmul of {} and {}'.format(a.shape, b.shape))

    def backward(g):
        _accumulate(a, g @ b.values.transpose(0, 2, 1))
        _accumulate(b, a.values.transpose(0, 2, 1) @ g)

    return _make(a.values @ b.values, (a, b), backward)


# elementwise
def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, 'add')

    def backward(g):
        _accumulate(a, _unbroadcast(g, a.shape))
        _accumulate(b, _unbroadcast(g, b.shape))

    return _make(a.values + b.values, (a, b), backward)


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, 'sub')

    def backward(g):
        _accumulate(a, _unbroadcast(g, a.shape))
        _accumulate(b, -_unbroadcast(g, b.shape))

    return _make(a.values - b.values, (a, b), backward)


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, 'mul')

    def backward(g):
        _accumulate(a, _unbroadcast(g * b.values, a.shape))
        _accumulate(b, _unbroadcast(g * a.values, b.shape))

    return _make(a.values * b.values, (a, b), backward)


def neg(a):
    a = as_tensor(a)

    def backward(g):
        _accumulate(a, -g)

    return _make(-a.values, (a,), backward)


def tanh(a):
    a = as_tensor(a)
    out = np.tanh(a.values)

    def backward(g):
        _accumulate(a, g * (1.0 - out * out))

    return _make(out, (a,), backward)


def sigmoid(a):
    a = as_tensor(a)
    # tanh form stays finite for large |x|
    out = 0.5 * (1.0 + np.tanh(0.5 * a.values))

    def backward(g):
        _accumulate(a, g * out * (1.0 - out))

    return _make(out, (a,), backward)


def relu(a):
    a = as_tensor(a)
    positive = a.values > 0

    def backward(g):
        _accumulate(a, g * positive)

    return _make(a.values * positive, (a,), backward)


def log(a, clamp=None):
    a = as_tensor(a)
    clamp = config.LOG_CLAMP if clamp is None else clamp
    kept = a.values >= clamp
    safe = np.where(kept, a.values, clamp)

    def backward(g):
        _accumulate(a, g * kept / safe)

    return _make(np.log(safe), (a,), backward)


ELEMENTWISE = {
    'add': add,
    'sub': sub,
    'mul': mul,
    'tanh': tanh,
    'sigmoid': sigmoid,
    'relu': relu,
}


def elementwise(op, *args):
    try:
        func = ELEMENTWISE[op]
    except KeyError:
        raise errors.ContractError('unknown elementwise operation {}'.format(op))
    return func(*args)


def softmax(a, mask=None):
    """Softmax over the last axis; masked-out entries (mask False) get weight 0."""
    a = as_tensor(a)
    if a.ndim == 0 or a.shape[-1] == 0:
        raise errors.DimensionError('softmax of empty input {}'.format(a.shape))
    values = a.values
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != a.shape:
            raise errors.DimensionError('softmax mask {} for input {}'.format(mask.shape, a.shape))
        values = np.where(mask, values, -np.inf)
    shifted = values - values.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    out = exp / exp.sum(axis=-1, keepdims=True)

    def backward(g):
        inner = (g * out).sum(axis=-1, keepdims=True)
        _accumulate(a, out * (g - inner))

    return _make(out, (a,), backward)


def dropout(a, p, training, rng):
    if not 0.0 <= p < 1.0:
        raise errors.ConfigError('dropout probability {} is outside [0, 1)'.format(p))
    a = as_tensor(a)
    if not training or p == 0.0:
        return a
    mask = (rng.random(a.shape) >= p).astype(a.values.dtype) / (1.0 - p)

    def backward(g):
        _accumulate(a, g * mask)

    return _make(a.values * mask, (a,), backward)


# reductions and shape plumbing
def reduce_sum(a, axis=None):
    a = as_tensor(a)

    def backward(g):
        if axis is None:
            _accumulate(a, np.broadcast_to(g, a.shape))
        else:
            _accumulate(a, np.broadcast_to(np.expand_dims(g, axis), a.shape))

    return _make(a.values.sum(axis=axis), (a,), backward)


def reshape(a, shape):
    a = as_tensor(a)
    try:
        out = a.values.reshape(shape)
    except ValueError:
        raise errors.DimensionError('reshape of {} to {}'.format(a.shape, shape))

    def backward(g):
        _accumulate(a, g.reshape(a.shape))

    return _make(out, (a,), backward)


def concat(tensors, axis=-1):
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.concatenate([t.values for t in tensors], axis=axis)
    except ValueError:
        raise errors.DimensionError('concat of {}'.format([t.shape for t in tensors]))
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g):
        for t, part in zip(tensors, np.split(g, bounds, axis=axis)):
            _accumulate(t, part)

    return _make(out, tuple(tensors), backward)


def stack(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.stack([t.values for t in tensors], axis=axis)
    except ValueError:
        raise errors.DimensionError('stack of {}'.format([t.shape for t in tensors]))

    def backward(g):
        for index, t in enumerate(tensors):
            _accumulate(t, np.take(g, index, axis=axis))

    return _make(out, tuple(tensors), backward)


def select(a, index, axis=0):
    a = as_tensor(a)

    def backward(g):
        grad = np.zeros_like(a.values)
        slices = [slice(None)] * a.ndim
        slices[axis] = index
        grad[tuple(slices)] = g
        _accumulate(a, grad)

    return _make(np.take(a.values, index, axis=axis), (a,), backward)


def gather_rows(table, ids, skip=None):
    """Row lookup `table[ids]`; rows equal to `skip` never receive a gradient."""
    table = as_tensor(table)
    ids = np.asarray(ids, dtype=np.int64)

    def backward(g):
        grad = np.zeros_like(table.values)
        np.add.at(grad, ids.reshape(-1), g.reshape(-1, table.shape[-1]))
        if skip is not None:
            grad[skip] = 0.0
        _accumulate(table, grad)

    return _make(table.values[ids], (table,), backward)


def permute_steps(a, order):
    """Reorder the time axis of a [batch, steps, dim] tensor row by row."""
    a = as_tensor(a)
    order = np.asarray(order, dtype=np.int64)
    rows = np.arange(a.shape[0])[:, None]

    def backward(g):
        grad = np.zeros_like(a.values)
        np.add.at(grad, (rows, order), g)
        _accumulate(a, grad)

    return _make(a.values[rows, order], (a,), backward)


def detach(a):
    a = as_tensor(a)
    return Tensor(a.values)


class ParamRegistry(object):
    """Named parameters, iterated in lexicographic name order."""

    def __init__(self):
        self._params = {}

    def add(self, name, values, trainable=True):
        if name in self._params:
            raise errors.ContractError('parameter {} is already registered'.format(name))
        param = Parameter(values, name, trainable)
        self._params[name] = param
        return param

    def __getitem__(self, name):
        return self._params[name]

    def __contains__(self, name):
        return name in self._params

    def __len__(self):
        return len(self._params)

    def __iter__(self):
        return iter(sorted(self._params))

    def names(self):
        return sorted(self._params)

    def items(self, prefix=''):
        return [(name, self._params[name]) for name in sorted(self._params)
                if name.startswith(prefix)]

    def trainable(self):
        return [(name, param) for name, param in self.items() if param.trainable]

    def set_trainable(self, prefix, trainable):
        for _, param in self.items(prefix):
            param.trainable = trainable

    def zero_grad(self):
        for param in self._params.values():
            param.grad = np.zeros_like(param.values)

    def l2_penalty(self):
        terms = [reduce_sum(mul(param, param)) for _, param in self.trainable()]
        if not terms:
            return Tensor(0.0)
        total = terms[0]
        for term in terms[1:]:
            total = add(total, term)
        return total

    def grad_norm(self):
        return float(np.sqrt(sum(float((p.grad.astype(np.float64) ** 2).sum())
                                 for _, p in self.trainable())))

    def clip_grad_norm(self, max_norm):
        norm = self.grad_norm()
        if max_norm and norm > max_norm:
            scale = max_norm / (norm + 1e-12)
            for _, param in self.trainable():
                param.grad *= scale
        return norm

    def state_dict(self):
        return {name: param.values.copy() for name, param in self.items()}

    def load_state_dict(self, state):
        missing = set(self._params) ^ set(state)
        if missing:
            raise errors.ContractError('parameter sets differ: {}'.format(', '.join(sorted(missing))))
        for name, values in state.items():
            param = self._params[name]
            if tuple(np.shape(values)) != param.shape:
                raise errors.DimensionError('parameter {} has shape {}, expected {}'.format(
                    name, np.shape(values), param.shape))
            param.values = np.array(values, dtype=get_dtype())
            param.grad = np.zeros_like(param.values)


class GradCheckReport(object):

    def __init__(self, error_map, tol):
        self.errors = error_map
        self.tol = tol

    @property
    def max_error(self):
        return max(self.errors.values()) if self.errors else 0.0

    @property
    def passed(self):
        return self.max_error < self.tol

    def failed(self):
        return sorted(name for name, error in self.errors.items() if not error < self.tol)


def grad_check(f, registry, eps=1e-5, tol=1e-4, floor=1e-12):
    """Compare tape gradients of `f(registry)` against central differences.

    `floor` bounds the denominator of the relative error from below, so entries
    with gradients much smaller than `floor` are compared absolutely.
    """
    registry.zero_grad()
    with Tape() as tape:
        loss = f(registry)
        tape.backward(loss)
    analytic = {name: param.grad.copy() for name, param in registry.trainable()}
    report = {}
    for name, param in registry.trainable():
        flat = param.values.reshape(-1)
        numeric = np.zeros(flat.size, dtype=np.float64)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + eps
            plus = float(f(registry).values)
            flat[i] = old - eps
            minus = float(f(registry).values)
            flat[i] = old
            numeric[i] = (plus - minus) / (2.0 * eps)
        grad = analytic[name].reshape(-1).astype(np.float64)
        denominator = np.maximum(np.maximum(np.abs(grad), np.abs(numeric)), floor)
        report[name] = float((np.abs(grad - numeric) / denominator).max()) if flat.size else 0.0
    logger.debug('grad check max error %.3g over %d parameters', max(report.values() or [0.0]), len(report))
    return GradCheckReport(report, tol)
