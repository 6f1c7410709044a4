import numpy as np
import pytest

from rmoments import symgroup as sg
from rmoments.linalg import kron_all
from rmoments.paulis import PAULIS


def test_canonical_order_t3():
    names = [p.cycle_string() for p in sg.enumerate_group(3)]
    assert names == ["()", "(12)", "(13)", "(23)", "(123)", "(132)"]


def test_group_sizes():
    assert len(sg.enumerate_group(4)) == 24
    assert len(sg.enumerate_group(5)) == 120
    with pytest.raises(ValueError):
        sg.enumerate_group(7)


def test_composition_convention():
    # (12) o (13) maps 1 -> 3 -> 3, i.e. applying (13) first
    p12 = sg.from_cycles("(12)", 3)
    p13 = sg.from_cycles("(13)", 3)
    assert p12.compose(p13).cycle_string() == "(132)"
    # brute-force one-line composition oracle
    for p in sg.enumerate_group(3):
        for q in sg.enumerate_group(3):
            images = tuple(p.images[q.images[i]] for i in range(3))
            assert p.compose(q).images == images


def test_cycle_roundtrip():
    for t in (3, 4):
        for p in sg.enumerate_group(t):
            rebuilt = [None] * t
            for cyc in p.cycles():
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    rebuilt[a] = b
            assert tuple(rebuilt) == p.images
            assert sg.from_cycles(p.cycle_string(), t) == p


def test_reduced_support_is_canonical_filter():
    # the 14 permutations surviving the t=4 gauge appear in canonical order
    from rmoments.twirl import REDUCED_SUPPORT_T4

    names = [p.cycle_string() for p in sg.enumerate_group(4)]
    filtered = [n for n in names if n in REDUCED_SUPPORT_T4]
    assert filtered == list(REDUCED_SUPPORT_T4)


def test_v_matrix_identity_and_swap():
    ident = sg.v_matrix(sg.identity(3), 2)
    np.testing.assert_allclose(ident, np.eye(8))
    swap = sg.v_matrix(sg.from_cycles("(12)", 2), 2)
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = expected[1, 2] = expected[2, 1] = 1
    np.testing.assert_allclose(swap, expected)


def test_v_matrix_trace_is_cycle_power():
    for p in sg.enumerate_group(4):
        assert np.trace(sg.v_matrix(p, 2)).real == pytest.approx(2 ** p.num_cycles())


def test_v_matrix_size_cap():
    with pytest.raises(ValueError):
        sg.v_matrix(sg.identity(7), 4)


def test_v_product_matches_composition():
    # pins the operator convention V_p V_q = V_{q o p}
    for t in (2, 3, 4):
        perms = sg.enumerate_group(t)
        for p in perms:
            for q in perms:
                lhs = sg.v_matrix(p, 2) @ sg.v_matrix(q, 2)
                rhs = sg.v_matrix(q.compose(p), 2)
                assert np.array_equal(lhs, rhs)


def test_trace_with_v_examples(rng):
    ident3 = [np.eye(2)] * 3
    assert sg.trace_with_v(ident3, sg.from_cycles("(12)", 3)) == pytest.approx(4.0)
    mats = [PAULIS[1], PAULIS[1], PAULIS[3]]
    val = sg.trace_with_v(mats, sg.from_cycles("(12)", 3))
    assert val == pytest.approx(0.0)
    brute = np.trace(kron_all(mats) @ sg.v_matrix(sg.from_cycles("(12)", 3), 2))
    assert val == pytest.approx(brute)


def test_trace_with_v_brute_force(rng):
    for t in (2, 3, 4):
        mats = [
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            for _ in range(t)
        ]
        big = kron_all(mats)
        for p in sg.enumerate_group(t):
            brute = np.trace(big @ sg.v_matrix(p, 2))
            assert sg.trace_with_v(mats, p) == pytest.approx(brute, abs=1e-12)


def test_trace_with_v_dimension_mismatch():
    with pytest.raises(ValueError):
        sg.trace_with_v([np.eye(2), np.eye(3)], sg.from_cycles("(12)", 2))


EXPECTED_GRAM_T3_D2 = np.array([
    [8, 4, 4, 4, 2, 2],
    [4, 8, 2, 2, 4, 4],
    [4, 2, 8, 2, 4, 4],
    [4, 2, 2, 8, 4, 4],
    [2, 4, 4, 4, 2, 8],
    [2, 4, 4, 4, 8, 2],
])


def test_gram_matrix_t3_d2_exact():
    assert np.array_equal(sg.gram_matrix(3, 2).entries, EXPECTED_GRAM_T3_D2)


def test_gram_diagonal_involutions():
    g = sg.gram_matrix(3, 2).entries
    perms = sg.enumerate_group(3)
    for i, p in enumerate(perms):
        if p.compose(p) == sg.identity(3):
            assert g[i, i] == 8


def test_gram_d3_leading_entry():
    assert sg.gram_matrix(3, 3).entries[0, 0] == 27


def test_gram_matches_brute_force():
    for t in (2, 3, 4):
        perms = sg.enumerate_group(t)
        g = sg.gram_matrix(t, 2).entries
        for a, p in enumerate(perms):
            for b, q in enumerate(perms):
                brute = round(np.trace(sg.v_matrix(p, 2) @ sg.v_matrix(q, 2)).real)
                assert g[a, b] == brute


def test_kernel_dimensions_and_vectors():
    k3 = sg.kernel_basis(sg.gram_matrix(3, 2))
    assert k3.shape[1] == 1
    v = k3[:, 0] / k3[0, 0]
    np.testing.assert_allclose(v, [1, -1, -1, -1, 1, 1], atol=1e-9)
    assert sg.kernel_basis(sg.gram_matrix(4, 2)).shape[1] == 10
    assert sg.kernel_basis(sg.gram_matrix(3, 3)).shape[1] == 0


def test_kernel_vectors_are_operator_identities():
    for t in (3, 4):
        kernel = sg.kernel_basis(sg.gram_matrix(t, 2))
        perms = sg.enumerate_group(t)
        for col in range(kernel.shape[1]):
            op = sum(kernel[i, col] * sg.v_matrix(p, 2) for i, p in enumerate(perms))
            assert np.max(np.abs(op)) <= 1e-9
