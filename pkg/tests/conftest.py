import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mpmm.matrix import DenseMatrix
from mpmm.scalar import Kind, PrecisionSpec, Scalar


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def dd():
    return PrecisionSpec.dd()


@pytest.fixture
def qd():
    return PrecisionSpec.qd()


@pytest.fixture
def ap128():
    return PrecisionSpec.ap(128)


def random_matrix(rng, m, n, prec, lo=-100.0, hi=100.0):
    """Random matrix with fully populated low-order components."""
    if prec.kind is Kind.AP:
        out = DenseMatrix.zeros(m, n, prec)
        for i in range(m):
            for j in range(n):
                s = Scalar.from_float(rng.uniform(lo, hi), prec)
                s = s + Scalar.from_float(rng.uniform(-1e-14, 1e-14), prec)
                out.data[i * n + j] = s.payload
        return out
    comps = 2 if prec.kind is Kind.DD else 4
    data = np.zeros((m, n, comps))
    for i in range(m):
        for j in range(n):
            s = Scalar.from_float(rng.uniform(lo, hi), prec)
            s = s + Scalar.from_float(rng.uniform(-1e-14, 1e-14), prec)
            if prec.kind is Kind.QD:
                s = s + Scalar.from_float(rng.uniform(-1e-30, 1e-30), prec)
                s = s + Scalar.from_float(rng.uniform(-1e-46, 1e-46), prec)
            data[i, j] = s.payload
    return DenseMatrix(m, n, prec, data)


def random_int_matrix(rng, m, n, prec, bound=8):
    return DenseMatrix.from_ints(
        [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)], prec)
