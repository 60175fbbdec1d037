# -*- coding: utf-8 -*-
# MIT License
#
# Copyright (c) 2023 Jean-François Boismenu
#
# See LICENSE at the root of this project for more info.

import contextlib
import threading

import numpy as np

from casein.errors import ConfigurationError, DivergenceError


# The active tape and the working precision are per thread. A tape must never be shared
# between threads.
_state = threading.local()


def default_dtype():
    """
    Precision used for new tensors on this thread. ``numpy.float32`` unless inside
    :func:`shadow_precision`.
    """
    return getattr(_state, "dtype", np.float32)


@contextlib.contextmanager
def shadow_precision():
    """
    Create new tensors in 64-bit precision while the context is active.

    This is only used to evaluate finite differences during gradient checks.
    """
    previous = default_dtype()
    _state.dtype = np.float64
    try:
        yield
    finally:
        _state.dtype = previous


def active_tape():
    """
    :returns: The :class:`Tape` recording on this thread, or ``None``.
    """
    return getattr(_state, "tape", None)


def check_finite(values, what):
    """
    Ensure every value is finite.

    :param values: Array or :class:`Tensor` to check.
    :param str what: Description used in the error message.

    :raises DivergenceError: If a NaN or an infinity is found.
    """
    data = values.data if isinstance(values, Tensor) else np.asarray(values)
    if not np.all(np.isfinite(data)):
        raise DivergenceError(f"Non-finite values found in {what}.")


class Tensor:
    """
    Array of real values that can take part in reverse-mode differentiation.

    Data is a row-major ``numpy`` array. When ``requires_grad`` is set, gradients are
    accumulated in ``grad`` by :meth:`Tape.backward`.
    """

    __slots__ = ("_data", "_requires_grad", "grad", "name")

    def __init__(self, data, requires_grad=False, name=None):
        """
        :param data: Anything ``numpy.array`` accepts. The values are copied.
        :param bool requires_grad: If True, gradients will flow into this tensor.
        :param str name: Optional name, used in diagnostics.
        """
        self._data = np.array(data, dtype=default_dtype())
        self._requires_grad = requires_grad
        self.grad = None
        self.name = name

    @classmethod
    def wrap(cls, array):
        """
        Create a tensor around an existing array without copying it.

        :param numpy.ndarray array: Values of the tensor.
        """
        tensor = cls.__new__(cls)
        tensor._data = array
        tensor._requires_grad = False
        tensor.grad = None
        tensor.name = None
        return tensor

    @property
    def data(self):
        """
        Underlying ``numpy`` array.
        """
        return self._data

    @data.setter
    def data(self, values):
        values = np.asarray(values)
        if values.shape != self._data.shape:
            raise ConfigurationError(
                f"Can't assign values of shape {values.shape} to a tensor of shape "
                f"{self._data.shape}."
            )
        self._data = values.astype(self._data.dtype, copy=False)

    @property
    def shape(self):
        return self._data.shape

    @property
    def ndim(self):
        return self._data.ndim

    @property
    def size(self):
        return self._data.size

    @property
    def dtype(self):
        return self._data.dtype

    @property
    def requires_grad(self):
        """
        ``True`` if gradients flow into this tensor.
        """
        return self._requires_grad

    @requires_grad.setter
    def requires_grad(self, value):
        self._requires_grad = bool(value)

    def astype(self, dtype):
        """
        Convert the values in place to another precision.

        :param dtype: ``numpy`` type to convert to.
        """
        self._data = self._data.astype(dtype)
        if self.grad is not None:
            self.grad = self.grad.astype(dtype)
        return self

    def accumulate_grad(self, grad):
        """
        Add to the gradient of the tensor.

        :param numpy.ndarray grad: Gradient with the same shape as the tensor.
        """
        if grad.shape != self._data.shape:
            raise ConfigurationError(
                f"Gradient of shape {grad.shape} doesn't match tensor of shape {self.shape}."
            )
        if self.grad is None:
            self.grad = np.array(grad, dtype=self._data.dtype)
        else:
            self.grad += grad

    def zero_grad(self):
        """
        Drop the accumulated gradient.
        """
        self.grad = None

    def detach(self):
        """
        :returns: A tensor sharing the values of this one that gradients never flow into.
        """
        return Tensor.wrap(self._data)

    def numpy(self):
        """
        :returns: A copy of the values.
        """
        return self._data.copy()

    def item(self):
        """
        :returns: The value of a single element tensor as a Python ``float``.
        """
        if self._data.size != 1:
            raise ConfigurationError(f"Tensor of shape {self.shape} is not a scalar.")
        return float(self._data.reshape(-1)[0])

    def __repr__(self):
        name = f" '{self.name}'" if self.name else ""
        return f"<Tensor{name} shape={self.shape} requires_grad={self._requires_grad}>"

    # Arithmetic operators are implemented in the functional module.
    # FIXME: The lazy imports work around the circular dependency between both modules.
    def __add__(self, other):
        from casein.numerics import functional

        return functional.add(self, other)

    def __radd__(self, other):
        from casein.numerics import functional

        return functional.add(other, self)

    def __sub__(self, other):
        from casein.numerics import functional

        return functional.sub(self, other)

    def __rsub__(self, other):
        from casein.numerics import functional

        return functional.sub(other, self)

    def __mul__(self, other):
        from casein.numerics import functional

        return functional.mul(self, other)

    def __rmul__(self, other):
        from casein.numerics import functional

        return functional.mul(other, self)

    def __neg__(self):
        from casein.numerics import functional

        return functional.mul(self, -1.0)

    def __matmul__(self, other):
        from casein.numerics import functional

        return functional.matmul(self, other)


class Parameter(Tensor):
    """
    Tensor owned by a layer and updated by the optimizer.
    """

    __slots__ = ()

    def __init__(self, data, name=None):
        super().__init__(data, requires_grad=True, name=name)


class _Node:
    """
    One primitive operation recorded on a tape.
    """

    __slots__ = ("output", "inputs", "backward")

    def __init__(self, output, inputs, backward):
        """
        :param Tensor output: Tensor produced by the operation.
        :param tuple inputs: Tensors the operation consumed.
        :param callable backward: Maps the gradient of the output to a tuple with one
            gradient (or ``None``) per input.
        """
        self.output = output
        self.inputs = inputs
        self.backward = backward


class Tape:
    """
    Records primitive operations so gradients can be computed in reverse order.

    Operations are only recorded while the tape is active, i.e. inside a ``with`` block,
    and only when one of their inputs requires a gradient. Outside a tape, every operation
    is a plain forward evaluation, which is how inference runs.

    Nodes are appended as operations execute, so the recording is always in topological
    order: every node's inputs were produced before it.
    """

    __slots__ = ("_nodes", "_produced", "_previous")

    def __init__(self):
        self._nodes = []
        self._produced = set()
        self._previous = None

    def __enter__(self):
        self._previous = active_tape()
        _state.tape = self
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        _state.tape = self._previous
        self._previous = None

    @property
    def nodes(self):
        """
        Recorded nodes, in execution order.
        """
        return tuple(self._nodes)

    def __len__(self):
        return len(self._nodes)

    def record(self, output, inputs, backward):
        """
        Append an operation to the tape.

        :param Tensor output: Tensor produced by the operation.
        :param tuple inputs: Tensors consumed by the operation.
        :param callable backward: Gradient function of the operation.
        """
        self._nodes.append(_Node(output, inputs, backward))
        self._produced.add(id(output))

    def backward(self, loss, grad=None):
        """
        Propagate gradients from ``loss`` down to every leaf tensor requiring them.

        Each recorded node is visited at most once, from the last to the first. Leaf
        gradients are accumulated, so calling backward on two losses adds their gradients.

        :param Tensor loss: Tensor to differentiate, usually a scalar.
        :param numpy.ndarray grad: Gradient of the final objective with respect to
            ``loss``. Defaults to ones.
        """
        seed = np.ones_like(loss.data) if grad is None else np.asarray(grad, loss.dtype)
        if id(loss) not in self._produced:
            if loss.requires_grad:
                loss.accumulate_grad(seed)
            return

        pending = {id(loss): seed}
        for node in reversed(self._nodes):
            node_grad = pending.pop(id(node.output), None)
            if node_grad is None:
                continue
            for tensor, tensor_grad in zip(node.inputs, node.backward(node_grad)):
                if tensor_grad is None or not tensor.requires_grad:
                    continue
                key = id(tensor)
                if key in self._produced:
                    if key in pending:
                        pending[key] = pending[key] + tensor_grad
                    else:
                        pending[key] = tensor_grad
                else:
                    tensor.accumulate_grad(tensor_grad)


def record(data, inputs, backward):
    """
    Wrap the result of a primitive operation and record it on the active tape.

    :param numpy.ndarray data: Result of the forward evaluation.
    :param tuple inputs: Tensors consumed by the operation.
    :param callable backward: Gradient function of the operation.

    :returns: The output :class:`Tensor`.
    """
    output = Tensor.wrap(np.asarray(data))
    tape = active_tape()
    if tape is not None and any(tensor.requires_grad for tensor in inputs):
        output.requires_grad = True
        tape.record(output, inputs, backward)
    return output


def as_tensor(value):
    """
    :returns: ``value`` if it is already a :class:`Tensor`, a constant tensor otherwise.
    """
    return value if isinstance(value, Tensor) else Tensor(value)
