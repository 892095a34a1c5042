import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starpi.staralg import (AlgebraError, Component, StarAlgebra, UTSpec, check_closed_in_ambient,
                            component_embedding_ok, direct_sum, from_spec, gamma_involution, load_spec, mk_exchange,
                            mk_symplectic, mk_transpose, mk_UT_star_full, tensor_nilpotent, zero_algebra)


def as_matrix(x, k):
    return np.asarray(x, dtype=np.int64).reshape(k, k)


def symplectic_oracle(x):
    m = x.shape[0] // 2
    a, b, c, d = x[:m, :m], x[:m, m:], x[m:, :m], x[m:, m:]
    return np.block([[d.T, -b.T], [-c.T, a.T]])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_transpose_against_numpy(k):
    a = mk_transpose(k)
    for i in range(a.dim):
        xi = as_matrix(a.basis_vector(i), k)
        assert np.array_equal(as_matrix(a.star(a.basis_vector(i)), k), xi.T)
        for j in range(a.dim):
            xj = as_matrix(a.basis_vector(j), k)
            assert np.array_equal(as_matrix(a.mul(a.basis_vector(i), a.basis_vector(j)), k), xi @ xj)


@pytest.mark.parametrize("m", [1, 2])
def test_symplectic_against_block_formula(m):
    a = mk_symplectic(m)
    k = 2 * m
    for i in range(a.dim):
        xi = as_matrix(a.basis_vector(i), k)
        assert np.array_equal(as_matrix(a.star(a.basis_vector(i)), k), symplectic_oracle(xi))


@pytest.mark.parametrize("h", [1, 2])
def test_exchange_against_pairs(h):
    a = mk_exchange(h)
    n = h * h

    def pair(v):
        return as_matrix(v[:n], h), as_matrix(v[n:], h)

    for i in range(a.dim):
        for j in range(a.dim):
            x1, y1 = pair(a.basis_vector(i))
            x2, y2 = pair(a.basis_vector(j))
            got = pair(a.mul(a.basis_vector(i), a.basis_vector(j)))
            # product in M_h + M_h^op
            assert np.array_equal(got[0], x1 @ x2) and np.array_equal(got[1], y2 @ y1)
        s = pair(a.star(a.basis_vector(i)))
        x, y = pair(a.basis_vector(i))
        assert np.array_equal(s[0], y) and np.array_equal(s[1], x)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_transpose_dims(k):
    a = mk_transpose(k)
    assert (a.dim_sym, a.dim_skew) == (k * (k + 1) // 2, k * (k - 1) // 2)


@pytest.mark.parametrize("m", [1, 2])
def test_symplectic_dims(m):
    a = mk_symplectic(m)
    assert (a.dim_sym, a.dim_skew) == (m * (2 * m - 1), m * (2 * m + 1))


@pytest.mark.parametrize("h", [1, 2, 3])
def test_exchange_dims(h):
    a = mk_exchange(h)
    assert (a.dim_sym, a.dim_skew) == (h * h, h * h)


def test_eigenbases_examples():
    t = mk_transpose(2)
    assert [t.format_element(v) for v in t.sym_basis] == ["e11", "e12 + e21", "e22"]
    s = mk_symplectic(1)
    assert [s.format_element(v) for v in s.skew_basis] == ["e11 - e22", "e12", "e21"]


def fixtures():
    f = mk_transpose(1)
    return [mk_transpose(2), mk_symplectic(1), mk_exchange(2), direct_sum(mk_transpose(2), mk_exchange(1)),
            tensor_nilpotent(f, 2, 3, "negate"), tensor_nilpotent(mk_exchange(1), 1, 3),
            mk_UT_star_full(UTSpec.of(("transpose", 1), ("exchange", 1))).algebra]


@pytest.mark.parametrize("a", fixtures(), ids=lambda a: a.name)
def test_axioms(a):
    assert a.check_associative()
    assert a.check_involution()
    assert np.array_equal(a.inv @ a.inv, np.eye(a.dim, dtype=np.int64))
    assert a.dim_sym + a.dim_skew == a.dim


@pytest.mark.parametrize("a", fixtures(), ids=lambda a: a.name)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_random_elements(a, data):
    vec = st.lists(st.integers(-3, 3), min_size=a.dim, max_size=a.dim).map(np.array)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    assert np.array_equal(a.star(a.mul(x, y)), a.mul(a.star(y), a.star(x)))
    assert np.array_equal(a.mul(a.mul(x, y), z), a.mul(x, a.mul(y, z)))
    assert np.array_equal(a.star(a.star(x)), x)
    if a.unit is not None:
        assert np.array_equal(a.mul(a.unit, x), x) and np.array_equal(a.mul(x, a.unit), x)


def test_right_mult():
    a = mk_transpose(2)
    x, y = np.array([1, 2, 3, 4]), np.array([0, 1, -1, 2])
    assert np.array_equal(x @ a.right_mult(y), a.mul(x, y))


def test_broken_involution_detected():
    # identity map on M_2 is not anti-multiplicative
    a = StarAlgebra(4, mk_transpose(2).products, np.eye(4, dtype=np.int64))
    assert not a.check_involution()
    with pytest.raises(AlgebraError):
        a.validate()


def test_gamma_involution():
    g = gamma_involution(3)
    assert np.array_equal(g @ g, np.eye(9, dtype=np.int64))
    # e12 -> e23 in M_3
    assert g[1 * 3 + 2, 0 * 3 + 1] == 1


UT_SPECS = [UTSpec.of(*c) for c in (
    [("transpose", 1)], [("exchange", 1)], [("symplectic", 1)], [("transpose", 2)],
    [("transpose", 1), ("transpose", 1)], [("transpose", 1), ("exchange", 1)], [("exchange", 1), ("symplectic", 1)],
    [("transpose", 2), ("transpose", 1)], [("transpose", 1), ("transpose", 1), ("exchange", 1)],
)]


@pytest.mark.parametrize("spec", UT_SPECS, ids=str)
def test_ut_star_closed_and_embedded(spec):
    ut = mk_UT_star_full(spec)
    assert check_closed_in_ambient(ut)
    for i in range(spec.n):
        assert component_embedding_ok(ut, i)
    a = ut.algebra
    assert a.check_associative() and a.check_involution()
    blocks = [c.block for c in spec.components]
    pairs = sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i + 1, len(blocks)))
    assert a.dim == spec.total_dim + 2 * pairs
    assert len(ut.radical_range) == 2 * pairs


@pytest.mark.parametrize("spec", UT_SPECS[:6], ids=str)
def test_ut_star_matches_matrices(spec):
    ut = mk_UT_star_full(spec)
    a, mats = ut.algebra, ut.matrices
    big = mats[0].shape[0]
    flat = np.array([m.reshape(-1) for m in mats], dtype=float).T

    def coords(m):
        c = np.linalg.lstsq(flat, m.reshape(-1).astype(float), rcond=None)[0]
        c = np.rint(c).astype(np.int64)
        assert np.array_equal(np.tensordot(c, np.array(mats), axes=1), m)
        return c

    for i, mi in enumerate(mats):
        g = mi[::-1, ::-1].T  # reflection along the secondary diagonal
        assert np.array_equal(a.inv[:, i], coords(g))
        for j, mj in enumerate(mats):
            assert np.array_equal(a.mul(a.basis_vector(i), a.basis_vector(j)), coords(mi @ mj))
    assert big == 2 * spec.size


def test_ut_two_transposes():
    a = mk_UT_star_full(UTSpec.of(("transpose", 1), ("transpose", 1))).algebra
    assert (a.dim, a.dim_sym, a.dim_skew) == (4, 3, 1)


def test_component_properties():
    c = Component("symplectic", 2)
    assert (c.block, c.dim, c.dim_sym, c.dim_skew) == (4, 16, 6, 10)
    spec = UTSpec.of(("transpose", 2), ("exchange", 1))
    assert (spec.n, spec.d_plus, spec.d_minus, spec.total_dim, spec.size) == (2, 4, 2, 6, 3)
    with pytest.raises(ValueError):
        UTSpec.of(("cyclic", 2))
    with pytest.raises(ValueError):
        UTSpec(())


def test_tensor_nilpotent_dims():
    f = mk_transpose(1)
    assert tensor_nilpotent(f, 1, 1) is f
    assert tensor_nilpotent(f, 1, 3).dim == 3
    assert tensor_nilpotent(f, 2, 3).dim == 6
    t = tensor_nilpotent(f, 2, 3, "negate")
    assert (t.dim_sym, t.dim_skew) == (4, 2)


def test_from_spec_roundtrip(tmp_path):
    spec = {"kind": "direct_sum", "parts": [{"kind": "transpose", "k": 2},
                                            {"kind": "ut_star", "components": [{"kind": "exchange", "h": 1},
                                                                               {"kind": "transpose", "k": 1}]},
                                            {"kind": "tensor_nilpotent", "base": {"kind": "symplectic", "m": 1},
                                             "nil_dim": 1, "nil_index": 2}]}
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(spec))
    a = load_spec(path)
    assert a.dim == 4 + 5 + 8
    assert a.check_associative() and a.check_involution()


def test_raw_spec():
    a = from_spec({"kind": "raw", "dim": 1, "mult": [[0, 0, 0, 1]], "inv": [[1]], "unit": [1]})
    assert a.dim == 1 and a.dim_sym == 1


@pytest.mark.parametrize("bad", [{"kind": "transpose"}, {"kind": "cyclic", "k": 2}, [1, 2],
                                 {"kind": "ut_star", "components": [{"kind": "transpose"}]},
                                 {"kind": "transpose", "k": 0}])
def test_bad_specs(bad):
    with pytest.raises((AlgebraError, ValueError)):
        from_spec(bad)


def test_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(AlgebraError):
        load_spec(p)


def test_zero_algebra():
    z = zero_algebra()
    assert z.dim == 0 and z.dim_sym == 0 and z.dim_skew == 0
    assert direct_sum(z, mk_transpose(1)).dim == 1


def test_closure_detects_missing_basis_element():
    import dataclasses

    ut = mk_UT_star_full(UTSpec.of(("transpose", 1), ("transpose", 1), ("transpose", 1)))
    # e13 = e12 e23 on top; drop it
    top = [i for i in ut.radical_range if ut.algebra.labels[i] == "U:e1,3"]
    assert top
    mats = [m for i, m in enumerate(ut.matrices) if i != top[0]]
    assert not check_closed_in_ambient(dataclasses.replace(ut, matrices=mats))
