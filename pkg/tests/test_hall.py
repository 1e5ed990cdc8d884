import pytest

from mnpieri.hall import (Adjoint, Combination, Compose, DiagonalInfinity, KernelAction, MultiplyBy,
                          NablaConjugate, commutator_check, e_action, e_operator, infinity_eigenvalue,
                          kernel_coefficient, negative_e_operator, negative_p_operator, negative_scalar,
                          p_operator)
from mnpieri.kernels import ShuffleKernel
from mnpieri.qt import ONE, ZERO, q, s, t
from mnpieri.shapes import Partition, enumerate_partitions
from mnpieri.symfunc import (DegreeBoundExceeded, SymFunc, SymRing, convert, macdonald_inner,
                             macdonald_M, multiply, nabla, set_default_ring)


def upto(d):
    for size in range(d + 1):
        yield from enumerate_partitions(size)


@pytest.mark.parametrize("m", [-1, 0, 1, 2])
@pytest.mark.parametrize("k", [1, 2])
def test_kernel_route_equals_nabla_route(m, k):
    for mu in upto(4):
        assert p_operator(k, m, 1, "kernel").on_basis(mu) == p_operator(k, m, 1, "nabla").on_basis(mu)
        assert e_operator(k, m, 1, "kernel").on_basis(mu) == e_operator(k, m, 1, "nabla").on_basis(mu)


def test_slope_zero_is_multiplication():
    e2 = SymFunc.basis_element("e", [2])
    f = SymFunc.basis_element("s", [2, 1])
    assert e_action(2, 0, 1, f) == multiply(f, e2)


def test_nabla_route_definition():
    # nabla^m e_1 nabla^-m applied to an arbitrary function
    f = SymFunc.basis_element("s", [1, 1]) + SymFunc.basis_element("s", [2])
    lhs = e_action(1, 1, 1, f, route="nabla")
    rhs = nabla(multiply(nabla(f, -1), SymFunc.basis_element("e", [1])))
    assert lhs == rhs


def test_nabla_route_requires_integer_slope():
    with pytest.raises(ValueError):
        p_operator(1, 1, 2, "nabla")
    with pytest.raises(ValueError):
        p_operator(1, 1, 1, "bogus")


def test_kernel_coefficient_vanishes_outside_containment():
    K = ShuffleKernel("P", 1, 1, 2)
    img = KernelAction(K).on_basis(Partition([1]))
    assert set(img) <= {Partition([3]), Partition([2, 1]), Partition([1, 1, 1])}
    for lam, c in img.items():
        assert c == kernel_coefficient(K, lam, [1])


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 3)])
def test_same_slope_operators_commute(m, n):
    assert commutator_check(p_operator(1, m, n), e_operator(1, m, n), 1)


def test_different_slopes_do_not_commute():
    assert not commutator_check(p_operator(1, 1, 1), p_operator(1, 0, 1), 2)


def test_heisenberg_integer_slope():
    # (s - 1/s) / (s - 1/s) = 1 when n = 1
    assert commutator_check(p_operator(1, 1, 1), negative_p_operator(1, 1, 1), 3, ONE)
    assert commutator_check(p_operator(1, 2, 1), negative_p_operator(1, 2, 1), 3, ONE)


def test_heisenberg_with_printed_normalization_is_off():
    assert not commutator_check(p_operator(1, 1, 1), negative_p_operator(1, 1, 1, printed=True), 2, ONE)
    assert negative_scalar(1, 1, printed=True) / negative_scalar(1, 1) == s ** 2


def test_adjoint():
    A = KernelAction(ShuffleKernel("P", 1, 1, 2))
    Ad = Adjoint(A)
    assert Ad.shift == -2
    for mu in upto(2):
        f = macdonald_M(mu)
        for lam in enumerate_partitions(mu.size + 2):
            g = macdonald_M(lam)
            lhs = macdonald_inner(convert(A.apply(f), "p"), convert(g, "p"))
            rhs = macdonald_inner(convert(f, "p"), convert(Ad.apply(g), "p"))
            assert lhs == rhs, (mu, lam)


def test_negative_e_is_newton_combination_of_negative_p():
    e2 = negative_e_operator(2, 1, 1)
    p1, p2 = negative_p_operator(1, 1, 1), negative_p_operator(2, 1, 1)
    half = ONE / 2
    manual = Combination([(half, Compose([p1, p1])), (-half, p2)])
    for lam in enumerate_partitions(3):
        assert e2.on_basis(lam) == manual.on_basis(lam)


def test_infinity_eigenvalue_regularization():
    lam = Partition([2, 1])
    one = infinity_eigenvalue(lam, origin=1)
    zero = infinity_eigenvalue(lam, origin=0)
    assert one == q / t + 1 / t ** 2 + t ** -3 / (q * (1 - 1 / t))
    assert zero == one * t
    assert infinity_eigenvalue([], 1) == t ** -1 / (q * (1 - 1 / t))
    assert DiagonalInfinity(1).on_basis(lam) == {lam: one}


def test_operator_algebra():
    A = MultiplyBy(SymFunc.basis_element("p", [1]))
    B = NablaConjugate(A, 0)
    for mu in upto(3):
        assert (A - B).on_basis(mu) == {}
        assert A.scaled(2).on_basis(mu) == {k: 2 * v for k, v in A.on_basis(mu).items()}
    with pytest.raises(ValueError):
        A + MultiplyBy(SymFunc.basis_element("p", [2]))
    with pytest.raises(ValueError):
        MultiplyBy(SymFunc.basis_element("p", [1]) + SymFunc.basis_element("p", [2]))


def test_degree_bound_is_enforced():
    from mnpieri.symfunc import default_ring
    saved = default_ring()
    try:
        set_default_ring(SymRing(2))
        with pytest.raises(DegreeBoundExceeded):
            KernelAction(ShuffleKernel("P", 1, 1, 2)).on_basis(Partition([1]))
    finally:
        set_default_ring(saved)


def test_zero_is_dropped():
    A = KernelAction(ShuffleKernel("E", 2, 1, 1))
    assert all(not c.is_zero() for mu in upto(2) for c in A.on_basis(mu).values())
    assert ZERO.is_zero()
