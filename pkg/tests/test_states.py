from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkbench import gen
from qkbench.linalg import DensityMatrix, InvariantError, QVector
from qkbench.scalar import INV_SQRT2
from qkbench.states import (
    DensityPrefix,
    SystemB,
    classical_prefix,
    induced_bitstring,
    mixture_prefix,
    product_prefix,
    tracial_prefix,
)

PLUS = QVector([INV_SQRT2, INV_SQRT2])


def test_tracial_prefix():
    assert tracial_prefix(1).levels == (DensityMatrix.tracial(1),)
    assert tracial_prefix(2).levels == (DensityMatrix.tracial(1), DensityMatrix.tracial(2))
    assert tracial_prefix(2).level(2).matrix[3][3] == Fraction(1, 4)


def test_classical_prefix():
    assert classical_prefix("0").levels == (DensityMatrix.pure(QVector.basis(1, 0)),)
    assert classical_prefix("01").levels == (DensityMatrix.classical("0"), DensityMatrix.classical("01"))


def test_product_prefix():
    assert product_prefix(SystemB.hadamard(3), "0").level(1) == DensityMatrix.pure(PLUS)
    assert product_prefix(SystemB.standard(2), "01") == classical_prefix("01")


def test_induced_bitstring():
    assert induced_bitstring(SystemB.hadamard(1), DensityPrefix([DensityMatrix.pure(PLUS)])) == "0"
    assert induced_bitstring(SystemB.standard(2), classical_prefix("10")) == "10"
    assert induced_bitstring(SystemB.standard(1), tracial_prefix(1)) is None


def test_mixtures():
    rho = classical_prefix("011")
    assert mixture_prefix([1], [rho]) == rho
    half = mixture_prefix([Fraction(1, 2)] * 2, [classical_prefix("0"), classical_prefix("1")])
    assert half.level(1) == DensityMatrix.tracial(1)


def test_mixture_rejects_bad_weights():
    with pytest.raises(ValueError):
        mixture_prefix([Fraction(1, 3)], [tracial_prefix(1)])
    with pytest.raises(ValueError):
        mixture_prefix([Fraction(1, 2), Fraction(1, 2)], [tracial_prefix(1), tracial_prefix(2)])


def test_incoherent_prefix_rejected():
    with pytest.raises(InvariantError, match="trace down"):
        DensityPrefix([DensityMatrix.classical("0"), DensityMatrix.classical("10")])


def test_system_rejects_non_orthonormal_pair():
    with pytest.raises(InvariantError):
        SystemB([(QVector.basis(1, 0), PLUS)])


seeds = st.integers(0, 10**6)


@settings(max_examples=30)
@given(seeds, st.integers(1, 4))
def test_builders_are_coherent(seed, depth):
    rng = random.Random(seed)
    bits = "".join(rng.choice("01") for _ in range(depth))
    system = gen.random_system(rng, depth)
    for pre in (
        tracial_prefix(depth),
        classical_prefix(bits),
        product_prefix(system, bits),
        gen.random_prefix(rng, depth),
    ):
        assert pre.is_coherent()
        DensityPrefix([DensityMatrix(r.matrix) for r in pre.levels])  # full per-level validation


@settings(max_examples=30)
@given(seeds, st.integers(1, 5))
def test_induced_bitstring_inverts_product_prefix(seed, depth):
    rng = random.Random(seed)
    system = gen.random_system(rng, depth)
    bits = "".join(rng.choice("01") for _ in range(depth))
    assert induced_bitstring(system, product_prefix(system, bits)) == bits
