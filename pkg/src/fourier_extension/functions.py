"""The nine benchmark functions on [-1, 1] plus a few variants used with
the alternative data models. All accept and return numpy arrays."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import airy

from .errors import ParameterError

F1_OMEGA = 230 * math.sqrt(2)
RESOLUTION_OMEGA = 250 * math.sqrt(2)


def oscillation(omega):
    """x -> exp(i pi omega x)."""
    def f(x):
        return np.exp(1j * np.pi * omega * np.asarray(x, dtype=float))
    f.__name__ = f"exp(i pi {omega:g} x)"
    return f


def f1(x):
    return np.exp(1j * np.pi * F1_OMEGA * np.asarray(x, dtype=float))


def f2(x):
    x = np.asarray(x, dtype=float)
    return np.sin(400 * x**2)


def f3(x):
    x = np.asarray(x, dtype=float)
    return airy(-66 - 70 * x)[0]


def f4(x):
    x = np.asarray(x, dtype=float)
    return 1 / (1 + 1500 * x**2)


def f5(x):
    x = np.asarray(x, dtype=float)
    return 1 / (60 - 59 * x)


def f6(x):
    x = np.asarray(x, dtype=float)
    return 1 / (1 + 25 * np.sin(8 * x) ** 2)


def f7(x):
    x = np.asarray(x, dtype=float)
    return np.exp(np.sin(21.6 * np.pi * x - 10.8 * np.pi) - np.cos(8 * np.pi * x))


def f8(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0
    out[nz] = np.exp(-1 / (8 * x[nz]) ** 2)
    return out


def f9(x):
    s = np.sin(np.pi * np.asarray(x, dtype=float))
    f = s.copy()
    for _ in range(10):
        s = 0.75 * (1 - 2 * s**4)
        f = f + s
    return f


TEST_FUNCTIONS = {1: f1, 2: f2, 3: f3, 4: f4, 5: f5, 6: f6, 7: f7, 8: f8, 9: f9}


def test_function(i: int):
    """Benchmark function f_i, i = 1..9."""
    try:
        return TEST_FUNCTIONS[int(i)]
    except (KeyError, ValueError, TypeError):
        raise ParameterError(f"unknown test function id {i!r}; expected 1..9") from None


test_function.__test__ = False  # keep pytest from collecting it
