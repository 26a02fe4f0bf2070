"""Shared test setup: hypothesis profile and random kernel generators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from maxplus_martin import KernelMatrix, NEG_INF, max_cycle_mean

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def labels(n: int) -> tuple[str, ...]:
    return tuple(f"s{i}" for i in range(n))


@st.composite
def finite_kernels(draw, max_n: int = 5, low: int = -9, high: int = 0):
    """All-finite integer kernels; entries <= 0 keep every cycle mean <= 0."""
    n = draw(st.integers(2, max_n))
    rows = [
        [draw(st.integers(low, high)) for _ in range(n)] for _ in range(n)
    ]
    return KernelMatrix(states=labels(n), entries=rows)


@st.composite
def sparse_kernels(draw, max_n: int = 5, low: int = -6, high: int = 3):
    """Integer kernels with -inf gaps; cycle weights unconstrained."""
    n = draw(st.integers(2, max_n))
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if draw(st.booleans()):
                row.append(NEG_INF)
            else:
                row.append(draw(st.integers(low, high)))
        rows.append(row)
    return KernelMatrix(states=labels(n), entries=rows)


def normalized_corpus_kernel(rng: np.random.Generator, max_n: int = 6,
                             low: int = -9, high: int = 3) -> KernelMatrix:
    """Random all-finite integer kernel rescaled to max cycle mean zero.

    With lam = p/q the rescaled entries q*a - p are integers and every
    cycle mean shifts to q*(mean - lam), so the maximum lands exactly on
    zero and the Kleene star stays in integer arithmetic.
    """
    n = int(rng.integers(2, max_n + 1))
    raw = rng.integers(low, high + 1, size=(n, n))
    base = KernelMatrix(states=labels(n), entries=raw.tolist())
    lam = Fraction(max_cycle_mean(base))
    rows = [
        [int(v) * lam.denominator - lam.numerator for v in row]
        for row in raw.tolist()
    ]
    return KernelMatrix(states=labels(n), entries=rows)


def corpus(seed: int, count: int, **kw) -> list[KernelMatrix]:
    rng = np.random.default_rng(seed)
    return [normalized_corpus_kernel(rng, **kw) for _ in range(count)]
