import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsbisep.errors import EmptyKeepSet, NonUnitTrace, NotHermitian, NotPSD
from hsbisep.linalg import (
    Cut,
    embed_bipartite,
    hermitian_eig,
    kron,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    pauli,
    pauli_label,
    pauli_string_matrix,
    ppt_min_eigs,
    product_operator,
    qubit_index,
    validate_density,
)

from oracle import partial_transpose_loop, random_density, string_op

STRINGS = list(itertools.product(range(4), repeat=3))


def test_pauli_matrices():
    x, y, z = pauli(1), pauli(2), pauli(3)
    assert np.allclose(x @ y, 1j * z)
    assert np.allclose(y @ z, 1j * x)
    assert np.allclose(z @ x, 1j * y)
    for p in (x, y, z):
        assert np.allclose(p @ p, np.eye(2))
    with pytest.raises(ValueError):
        pauli(4)


def test_pauli_strings_match_oracle():
    for s in STRINGS:
        assert np.array_equal(pauli_string_matrix(s), string_op(s))


def test_pauli_string_orthogonality_all_pairs():
    mats = np.array([pauli_string_matrix(s) for s in STRINGS])
    gram = np.einsum("aij,bji->ab", mats, mats)
    assert np.allclose(gram, 8 * np.eye(64), atol=0)


def test_pauli_label():
    assert pauli_label((1, 3, 1)) == "XZX"
    assert pauli_label((0, 0, 0)) == "III"


def test_basis_order_a_is_slowest():
    a = np.diag([1, 0]).astype(complex)
    m = product_operator(np.diag([0, 1]).astype(complex), a, a)
    assert m[4, 4] == 1 and np.count_nonzero(m) == 1


def test_kron_shapes():
    assert kron(np.eye(2), np.eye(4)).shape == (8, 8)


def test_hermitian_eig_reconstructs_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(100):
        g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        h = g + g.conj().T
        vals, vecs = hermitian_eig(h)
        assert np.all(np.diff(vals) >= 0)
        assert np.linalg.norm(vecs @ np.diag(vals) @ vecs.conj().T - h) <= 1e-12 * np.linalg.norm(h)
        assert np.allclose(vecs.conj().T @ vecs, np.eye(8), atol=1e-12)


def test_hermitian_eig_rejects_non_hermitian():
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1
    with pytest.raises(NotHermitian):
        hermitian_eig(m)


def test_validate_density_errors():
    with pytest.raises(NonUnitTrace):
        validate_density(np.eye(8) / 4)
    with pytest.raises(NotPSD) as info:
        validate_density(np.diag([0.6, -0.1, 0.5, 0, 0, 0, 0, 0]))
    assert info.value.min_eig == pytest.approx(-0.1)
    assert "minimal eigenvalue" in str(info.value)
    with pytest.raises(ValueError):
        validate_density(np.eye(3) / 3)
    rho = validate_density(np.eye(8) / 8)
    assert not rho.flags.writeable


def test_min_eigenvalue():
    assert min_eigenvalue(np.diag([0.5, 0.25, 0.25, 0.0])) == 0.0


def test_partial_trace_product_state():
    rng = np.random.default_rng(2)
    a, b, c = (random_density(rng, 2) for _ in range(3))
    rho = product_operator(a, b, c)
    assert np.allclose(partial_trace(rho, [0]), a)
    assert np.allclose(partial_trace(rho, "B"), b)
    assert np.allclose(partial_trace(rho, [2]), c)
    assert np.allclose(partial_trace(rho, [0, 2]), np.kron(a, c))
    assert np.allclose(partial_trace(rho, [2, 0]), np.kron(a, c))
    assert np.allclose(partial_trace(rho, [0, 1, 2]), rho)


def test_partial_trace_empty_keep():
    with pytest.raises(EmptyKeepSet):
        partial_trace(np.eye(8) / 8, [])


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(5)
    rho = random_density(rng)
    for keep in ([0], [1], [2], [0, 1], [1, 2], [0, 2]):
        assert np.trace(partial_trace(rho, keep)).real == pytest.approx(1.0)


def test_partial_transpose_matches_loop():
    rng = np.random.default_rng(3)
    rho = random_density(rng)
    for q in range(3):
        assert np.allclose(partial_transpose(rho, q), partial_transpose_loop(rho, q))


def test_partial_transpose_involution_and_spectrum_trace():
    rng = np.random.default_rng(4)
    for _ in range(20):
        rho = random_density(rng)
        for q in "ABC":
            pt = partial_transpose(rho, q)
            assert np.array_equal(partial_transpose(pt, q), rho)
            assert np.trace(pt).real == pytest.approx(1.0)


def test_ppt_detects_ghz():
    ghz = np.zeros(8, dtype=complex)
    ghz[[0, 7]] = 1 / np.sqrt(2)
    rho = np.outer(ghz, ghz)
    margins = ppt_min_eigs(rho)
    assert set(margins) == set(Cut)
    assert all(v == pytest.approx(-0.5) for v in margins.values())


def test_cut_parse():
    assert Cut.parse("A|BC") is Cut.A_BC
    assert Cut.parse("b") is Cut.B_AC
    assert Cut.parse(Cut.C_AB) is Cut.C_AB
    assert str(Cut.C_AB) == "C|AB"
    assert Cut.B_AC.solo == 1 and Cut.B_AC.pair == (0, 2)
    with pytest.raises(ValueError):
        Cut.parse("AB|C")


def test_qubit_index():
    assert qubit_index("c") == 2
    with pytest.raises(ValueError):
        qubit_index(3)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(Cut)), st.integers(0, 2**32 - 1))
def test_embed_bipartite_places_factors(cut, seed):
    rng = np.random.default_rng(seed)
    solo = random_density(rng, 2)
    pair = random_density(rng, 4)
    m = embed_bipartite(solo, pair, cut)
    assert np.allclose(partial_trace(m, [cut.solo]), solo)
    assert np.allclose(partial_trace(m, list(cut.pair)), pair)


def test_spec_style_examples():
    assert np.array_equal(kron(pauli(3), pauli(3)), np.diag([1, -1, -1, 1]))
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(kron(pauli(1), np.eye(2)) @ ket00, np.array([0, 0, 1, 0]))
    assert np.array_equal(pauli_string_matrix((0, 0, 0)), np.eye(8))
    assert np.array_equal(pauli_string_matrix((3, 3, 3)), np.diag([1, -1, -1, 1, -1, 1, 1, -1]))
    assert np.allclose(hermitian_eig(np.eye(8) / 8)[0], 1 / 8)
    assert np.allclose(partial_trace(np.eye(8) / 8, "AB"), np.eye(4) / 4)
    assert np.array_equal(partial_transpose(np.eye(8) / 8, "A"), np.eye(8) / 8)


def test_w_marginal():
    w = np.zeros(8)
    w[[1, 2, 4]] = 1 / np.sqrt(3)
    assert np.allclose(partial_trace(np.outer(w, w), "A"), np.diag([2 / 3, 1 / 3]))


def test_psd_examples():
    from hsbisep.linalg import is_psd

    assert is_psd(np.eye(8) / 8)
    assert not is_psd(np.diag([1, -0.01]))
    rho = (np.eye(8) + 1.1 * pauli_string_matrix((1, 1, 1))) / 8
    assert not is_psd(rho)


def test_partial_transpose_flips_y_coefficients():
    from hsbisep.hs import hs_decompose, random_state

    rho = random_state(17)
    d, dt = hs_decompose(rho), hs_decompose(partial_transpose(rho, "A"))
    for s in itertools.product(range(4), repeat=3):
        sign = -1 if s[0] == 2 else 1
        assert dt[s] == pytest.approx(sign * d[s], abs=1e-14)
