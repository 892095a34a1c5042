"""Multilinear parts of finitely generated T-*-ideals.

In degree ``n`` the ideal generated by multilinear polynomials is spanned by
``u * f(p_1, ..., p_d) * v`` where the variables ``1..n`` are split into a
left word ``u``, a right word ``v`` and nonempty slot sets, symmetric slots
receive ``m + m^*``, skew slots ``m - m^*`` and general slots a plain
monomial ``m`` on their slot set.  The space is multihomogeneous, so it is
computed one type-vector block of ``P_n^*`` at a time.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterator, Sequence

import numpy as np

from .evaluate import DEFAULT_BUDGET, CostGuardExceeded, evaluation_matrix
from .freealg import GEN, SKEW, SYM, MLPoly, VarKind, block_monomials, pn_star_dim, type_vectors
from .linalg import (GF, default_primes, Matrix, RowAccumulator, Subspace, left_kernel,
                     subspace_contains, subspace_equal)
from .staralg import StarAlgebra

log = logging.getLogger(__name__)

MAX_DEGREE = 5


@dataclass
class TStarGens:
    generators: list[MLPoly]

    def __post_init__(self):
        self.generators = list(self.generators)

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)


def gamma_gens(M1: int, L1: int) -> TStarGens:
    """Generators of ``Gamma*_{M1,L1}``: the deleted Capelli sets ``Cap^+_{M1}``, ``Cap^-_{L1}``."""
    from .freealg import capelli_generators

    return TStarGens(capelli_generators(M1, L1))


def _as_gens(gens) -> TStarGens:
    return gens if isinstance(gens, TStarGens) else TStarGens(list(gens))


def _compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Part sizes ``(a, s_1, ..., s_d, b)`` with ``a, b >= 0``, ``s_j >= 1``, summing to ``n``."""
    for a in range(n - d + 1):
        for b in range(n - d - a + 1):
            rest = n - a - b
            for cuts in itertools.combinations(range(1, rest), d - 1):
                bounds = (0, *cuts, rest)
                yield (a, *(bounds[i + 1] - bounds[i] for i in range(d)), b)


def _shape_count(n: int, d: int) -> int:
    return factorial(n) * comb(n + 1, d + 1) if d <= n else 0


def spanning_cost(gens: TStarGens, n: int) -> int:
    total = 0
    for g in gens.generators:
        total += _shape_count(n, g.degree) * max(len(g.terms), 1) * 2**g.degree * n
    return total * 2**n


def block_spanning_rows(gens: TStarGens, eps: Sequence[VarKind]) -> Iterator[list[int]]:
    """Coordinate vectors (length ``n!``) of the spanning set inside ``P_eps``."""
    n = len(eps)
    index = {m: i for i, m in enumerate(block_monomials(n))}
    skew = [k is SKEW for k in eps]
    for g in gens.generators:
        d = g.degree
        if d > n or g.is_zero():
            continue
        kinds = [v.kind for v in g.vars]
        terms = list(g.terms.items())
        for parts in _compositions(n, d):
            a, *sizes, b = parts
            for pi in itertools.permutations(range(n)):
                u = pi[:a]
                v = pi[n - b:] if b else ()
                words = []
                pos = a
                for s in sizes:
                    words.append(pi[pos:pos + s])
                    pos += s
                variants = []
                ok = True
                for w, kind in zip(words, kinds):
                    if kind is GEN:
                        variants.append(((w, 1),))
                        continue
                    if len(w) > 1 and w[0] > w[-1]:
                        # m and m^* give the same slot polynomial up to sign
                        ok = False
                        break
                    rev_sign = -1 if sum(skew[i] for i in w) % 2 else 1
                    if kind is SKEW:
                        rev_sign = -rev_sign
                    if len(w) == 1:
                        if rev_sign == -1:
                            ok = False  # a variable of the wrong kind: m + s*m^* is zero
                            break
                        variants.append(((w, 2),))
                    else:
                        variants.append(((w, 1), (w[::-1], rev_sign)))
                if not ok:
                    continue
                vec = [0] * len(index)
                for mono, c in terms:
                    for choice in itertools.product(*(variants[j] for j in mono)):
                        word = list(u)
                        coeff = c
                        for piece, s in choice:
                            word.extend(piece)
                            coeff *= s
                        word.extend(v)
                        vec[index[tuple(word)]] += coeff
                if any(vec):
                    yield vec


@dataclass
class ConsequenceSpace:
    n: int
    blocks: dict[tuple[VarKind, ...], Subspace]
    primes: tuple[int, ...] = ()
    agree: bool = True
    per_prime_dims: dict[int, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.blocks.values())

    @property
    def ambient_dim(self) -> int:
        return pn_star_dim(self.n)

    def subspace(self) -> Subspace:
        """The whole space inside the ``2^n n!``-dimensional coordinates of ``P_n^*``
        (blocks in :func:`type_vectors` order)."""
        from .linalg import row_space

        bsize = factorial(self.n)
        field_ = next(iter(self.blocks.values())).field
        rows = []
        for bi, eps in enumerate(type_vectors(self.n)):
            for row in self.blocks[eps].basis:
                full = np.zeros(self.ambient_dim, dtype=np.int64)
                full[bi * bsize:(bi + 1) * bsize] = row
                rows.append(full)
        return row_space(Matrix.from_rows(rows, field_, self.ambient_dim))


def _check_degree(n: int, allow_large: bool) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_DEGREE and not allow_large:
        raise CostGuardExceeded(pn_star_dim(n), pn_star_dim(MAX_DEGREE),
                                f"degree {n} consequence space (pass allow_large=True)")


def consequences(gens, n: int, primes: Sequence[int] | None = None, budget: int = DEFAULT_BUDGET,
                 allow_large: bool = False) -> ConsequenceSpace:
    """Degree-``n`` multilinear part of the T-*-ideal generated by ``gens``.

    Ranks are taken modulo each prime in ``primes``; the first prime's
    subspace is returned and ``agree`` records whether all dimensions match.
    """
    gens = _as_gens(gens)
    _check_degree(n, allow_large)
    est = spanning_cost(gens, n)
    if est > budget:
        raise CostGuardExceeded(est, budget, f"degree {n} consequences")
    primes = tuple(primes) if primes is not None else default_primes()
    blocks = {}
    dims = {p: 0 for p in primes}
    for eps in type_vectors(n):
        accs = [RowAccumulator(factorial(n), GF(p)) for p in primes]
        for row in block_spanning_rows(gens, eps):
            for acc in accs:
                acc.add(row)
        for p, acc in zip(primes, accs):
            dims[p] += acc.rank
        blocks[eps] = accs[0].subspace()
    agree = len(set(dims.values())) == 1
    if not agree:
        log.warning("consequence dimension differs across primes: %s", dims)
    return ConsequenceSpace(n, blocks, primes, agree, dims)


def ideal_codimension(gens, n: int, **kw) -> int:
    """``2^n n! - dim`` of the degree-``n`` consequence space."""
    return pn_star_dim(n) - consequences(gens, n, **kw).dim


@dataclass
class Comparison:
    ideal_inside_Id: bool
    equal: bool
    dims: tuple[int, int]  # (dim consequences, dim Id*(A) in P_n^*)
    n: int = 0
    codims: tuple[int, int] = (0, 0)


def identity_space(a: StarAlgebra, n: int, prime: int | None = None) -> dict[tuple[VarKind, ...], Subspace]:
    """``Id*(A) cap P_eps`` for each block, as left kernels of evaluation matrices."""
    f = GF(prime)
    out = {}
    for eps in type_vectors(n):
        e = evaluation_matrix(a, eps)
        if e.shape[1] == 0:
            e = np.zeros((factorial(n), 1), dtype=np.int64)
        out[eps] = left_kernel(Matrix.from_rows(e, f, e.shape[1]))
    return out


def compare_with_algebra(gens, a: StarAlgebra, n: int, prime: int | None = None, **kw) -> Comparison:
    gens = _as_gens(gens)
    prime = GF(prime).p
    cons = consequences(gens, n, primes=(prime,), **kw)
    ids = identity_space(a, n, prime)
    inside = all(subspace_contains(ids[eps], cons.blocks[eps]) for eps in ids)
    equal = all(subspace_equal(ids[eps], cons.blocks[eps]) for eps in ids)
    d_id = sum(s.dim for s in ids.values())
    total = pn_star_dim(n)
    return Comparison(inside, equal, (cons.dim, d_id), n, (total - cons.dim, total - d_id))


def spanning_vanish(gens, a: StarAlgebra, n: int, chunk: int = 4096) -> tuple[bool, int]:
    """Exact check that every spanning consequence of degree ``n`` is a *-identity of ``a``.

    Returns the verdict and the number of spanning elements checked.
    """
    gens = _as_gens(gens)
    checked = 0
    for eps in type_vectors(n):
        e = evaluation_matrix(a, eps).astype(object)
        if e.shape[1] == 0:
            checked += sum(1 for _ in block_spanning_rows(gens, eps))
            continue
        buf = []
        for row in block_spanning_rows(gens, eps):
            buf.append(row)
            if len(buf) >= chunk:
                if np.any(np.array(buf, dtype=object) @ e):
                    return False, checked
                checked += len(buf)
                buf = []
        if buf:
            if np.any(np.array(buf, dtype=object) @ e):
                return False, checked
            checked += len(buf)
    return True, checked
