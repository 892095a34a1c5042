import itertools
from math import comb, factorial

import pytest

from starpi.evaluate import CostGuardExceeded
from starpi.freealg import (GEN, SYM, MLPoly, block_vars, block_vector, capelli_star, monomial, parse_poly,
                            pn_star_dim, star, substitute, type_vectors)
from starpi.linalg import GF, Matrix, rank
from starpi.staralg import mk_exchange, mk_transpose
from starpi.tideal import (TStarGens, _compositions, compare_with_algebra, consequences, gamma_gens,
                           ideal_codimension, spanning_vanish)


def oracle_dim(gens, n, p=10007):
    """Spanning set built with substitute() and star() on named polynomials."""
    total = 0
    for eps in type_vectors(n):
        vs = block_vars(eps)
        rows = []
        for g in gens:
            d = g.degree
            for parts in _compositions(n, d):
                a, *sizes, b = parts
                for pi in itertools.permutations(vs):
                    words, pos = [], a
                    for s in sizes:
                        words.append(pi[pos:pos + s])
                        pos += s
                    images = {}
                    for var, w in zip(g.vars, words):
                        m = MLPoly(list(w), {tuple(range(len(w))): 1})
                        if var.kind is GEN:
                            images[var.name] = m
                        else:
                            images[var.name] = m + star(m) if var.kind is SYM else m - star(m)
                    # rename generator variables out of the way of the block variables
                    h = g.rename({v.name: f"g_{v.name}" for v in g.vars})
                    images = {f"g_{k}": v for k, v in images.items()}
                    if any(v.is_zero() for v in images.values()):
                        continue
                    left = MLPoly(list(pi[:a]), {tuple(range(a)): 1}) if a else None
                    right = MLPoly(list(pi[n - b:]), {tuple(range(b)): 1}) if b else None
                    f = substitute(h, images, left, right)
                    if not f.is_zero():
                        rows.append(block_vector(f, eps))
        if rows:
            total += rank(Matrix.from_rows(rows, GF(p), factorial(n)))
    return total


@pytest.mark.parametrize("n,d", [(3, 1), (4, 2), (5, 3), (2, 2)])
def test_compositions_count(n, d):
    parts = list(_compositions(n, d))
    assert len(parts) == comb(n + 1, d + 1)
    assert all(sum(p) == n and all(s >= 1 for s in p[1:-1]) for p in parts)


@pytest.mark.parametrize("gens,n", [
    (["z1"], 2), (["z1"], 3), (["y1*y2 - y2*y1"], 3), (["y1*x1*y2 - y2*x1*y1"], 3),
    (["z1*z2 + z2*z1"], 3), (["y1*z1 - z1*y1"], 3), (["x1*x2 - x2*x1"], 3),
])
def test_consequences_match_substitution_oracle(gens, n):
    polys = [parse_poly(g) for g in gens]
    assert consequences(polys, n, primes=(10007,)).dim == oracle_dim(polys, n)


def test_gamma_matches_oracle_small():
    g = gamma_gens(2, 1).generators
    for n in (1, 2, 3):
        assert consequences(g, n, primes=(10007,)).dim == oracle_dim(g, n)


def test_trivial_generators():
    assert ideal_codimension([], 3) == pn_star_dim(3)
    assert ideal_codimension([parse_poly("y1")], 1) == 1  # only z1 survives
    assert consequences([parse_poly("z1")], 1).dim == 1
    assert consequences([parse_poly("z1")], 2).dim == 7


def test_gamma_21_codim_small():
    assert [ideal_codimension(gamma_gens(2, 1), n) for n in range(1, 5)] == [1, 1, 1, 1]


def test_compare_with_m1():
    for n in (1, 2, 3):
        c = compare_with_algebra(gamma_gens(2, 1), mk_transpose(1), n)
        assert c.ideal_inside_Id and c.equal and c.codims == (1, 1)


def test_compare_gamma42_with_m2():
    expected = {1: 2, 2: 7, 3: 28}
    for n in (1, 2, 3):
        c = compare_with_algebra(gamma_gens(4, 2), mk_transpose(2), n)
        assert c.ideal_inside_Id and c.equal
        assert c.codims == (expected[n], expected[n])


def test_strict_containment_detected():
    # z1*z2 + z2*z1 vanishes on M_1 but its consequences miss y1*y2 - y2*y1 in degree 2
    c = compare_with_algebra([parse_poly("z1*z2 + z2*z1")], mk_transpose(1), 2)
    assert c.ideal_inside_Id and not c.equal


def test_not_inside():
    # symmetric matrices of M_2 do not commute
    c = compare_with_algebra([parse_poly("y1*y2 - y2*y1")], mk_transpose(2), 2)
    assert not c.ideal_inside_Id


def test_spanning_vanish():
    ok, count = spanning_vanish(gamma_gens(4, 2), mk_transpose(2), 3)
    assert ok and count > 0
    bad, _ = spanning_vanish([parse_poly("y1*y2 - y2*y1")], mk_transpose(2), 2)
    assert not bad
    good, _ = spanning_vanish([parse_poly("x1*x2 - x2*x1")], mk_exchange(1), 3)
    assert good


def test_two_primes_agree():
    c = consequences(gamma_gens(3, 2), 3)
    assert c.agree and len(set(c.per_prime_dims.values())) == 1


def test_subspace_embedding():
    c = consequences([parse_poly("z1")], 2)
    assert c.subspace().dim == c.dim
    assert c.subspace().ambient_dim == pn_star_dim(2)


def test_guards():
    with pytest.raises(CostGuardExceeded):
        consequences(gamma_gens(2, 1), 6)
    with pytest.raises(CostGuardExceeded):
        consequences(gamma_gens(2, 1), 4, budget=10)
    with pytest.raises(ValueError):
        consequences([], 0)


def test_tstar_gens():
    g = TStarGens([capelli_star(3, "y"), monomial("z1")])
    assert g.max_degree == 5
