"""Evaluation of multilinear polynomials in algebras with involution.

By multilinearity a polynomial is a *-identity iff it vanishes on every
kind-respecting tuple of basis elements (symmetric basis for ``y`` slots,
skew basis for ``z`` slots, full basis for ``x`` slots), so identity tests
and codimensions are exhaustive and exact.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from math import comb, factorial, lcm, prod
from typing import Iterator, Mapping, Sequence

import numpy as np

from .freealg import GEN, SKEW, SYM, MLPoly, VarKind, perm_sign, type_vectors
from .linalg import QQ, GF, Matrix, default_primes, rank
from .staralg import StarAlgebra

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
_SAFE = 2**40


class CostGuardExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int, what: str = "computation"):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what} needs ~{estimate:.3g} scalar multiplications, budget is {budget:.3g}")


class KindViolation(ValueError):
    pass


def slot_basis(a: StarAlgebra, kind: VarKind) -> np.ndarray:
    if kind is SYM:
        return a.sym_basis
    if kind is SKEW:
        return a.skew_basis
    return np.eye(a.dim, dtype=np.int64)


# -- product engine ----------------------------------------------------------

def _times(a: StarAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise products ``x[t] * y[t]``."""
    t = a.table if x.dtype != object else a.table.astype(object)
    outer = x[:, :, None] * y[:, None, :]
    return outer.reshape(len(x), -1) @ t.reshape(a.dim * a.dim, a.dim)


def _prefix_products(a: StarAlgebra, elems: Sequence[np.ndarray],
                     words: Sequence[tuple[int, ...]]) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield ``(word, X)`` with ``X[t]`` the product ``elems[w_1][t] ... elems[w_n][t]``.

    Words sharing a prefix share its partial products.  Overflow of the
    int64 path is detected and the caller retries with Python integers.
    """
    tree: dict = {}
    for w in words:
        node = tree
        for v in w:
            node = node.setdefault(v, {})
        node[None] = w

    def walk(node, x, depth):
        for key in sorted(k for k in node if k is not None):
            y = elems[key] if x is None else _times(a, x, elems[key])
            if y.dtype != object and y.size and np.abs(y).max() > _SAFE:
                raise OverflowError
            child = node[key]
            if None in child:
                yield child[None], y
            yield from walk(child, y, depth + 1)

    yield from walk(tree, None, 0)


def _exact(fn):
    """Run ``fn(dtype)`` in int64, falling back to Python ints on overflow."""
    try:
        return fn(np.int64)
    except OverflowError:
        return fn(object)


# -- assignments and single evaluations ------------------------------------

@dataclass
class Assignment:
    values: dict[str, np.ndarray]
    labels: dict[str, str] = field(default_factory=dict)
    result: np.ndarray | None = None

    def describe(self, a: StarAlgebra) -> str:
        parts = [f"{name}={self.labels.get(name) or a.format_element(v)}" for name, v in self.values.items()]
        return ", ".join(parts)


def check_kinds(a: StarAlgebra, f: MLPoly, asg: Mapping[str, np.ndarray]) -> None:
    for v in f.vars:
        if v.name not in asg:
            raise KindViolation(f"no value for variable {v.name}")
        x = np.asarray(asg[v.name])
        if x.shape != (a.dim,):
            raise KindViolation(f"{v.name}: expected {a.dim} coordinates, got shape {x.shape}")
        if v.kind is SYM and not np.array_equal(a.inv @ x, x):
            raise KindViolation(f"{v.name} must be symmetric")
        if v.kind is SKEW and not np.array_equal(a.inv @ x, -x):
            raise KindViolation(f"{v.name} must be skew")


def eval_poly(a: StarAlgebra, f: MLPoly, asg: Mapping[str, Sequence[int]]) -> np.ndarray:
    """Value of ``f`` at the assignment, as exact integer coordinates."""
    asg = {k: np.asarray(v, dtype=object) for k, v in asg.items()}
    check_kinds(a, f, asg)
    elems = [asg[v.name].reshape(1, -1) for v in f.vars]
    total = np.zeros(a.dim, dtype=object)
    words = list(f.terms)
    for w, x in _prefix_products(a, elems, words):
        total = total + f.terms[w] * x[0]
    return total


# -- tuple enumeration ----------------------------------------------------------

def alternating_groups(f: MLPoly) -> list[list[int]]:
    """Maximal sets of same-kind variables in which ``f`` is alternating."""
    n = f.degree
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    terms = f.terms
    for i in range(n):
        for j in range(i + 1, n):
            if f.vars[i].kind is not f.vars[j].kind or find(i) == find(j):
                continue
            swap = list(range(n))
            swap[i], swap[j] = j, i
            if all(terms.get(tuple(swap[k] for k in m), 0) == -c for m, c in terms.items()):
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _slot_order(f: MLPoly) -> list[int]:
    rank_of = {SYM: 0, SKEW: 1, GEN: 2}
    return sorted(range(f.degree), key=lambda i: (rank_of[f.vars[i].kind], i))


def _tuple_space(a: StarAlgebra, f: MLPoly, use_alternation: bool = True):
    """Basis choices per slot and an iterator over index tuples (in slot order).

    Inside an alternating group only strictly increasing index choices are
    produced; the remaining tuples differ by a sign or vanish.
    """
    order = _slot_order(f)
    bases = [slot_basis(a, f.vars[i].kind) for i in range(f.degree)]
    groups = alternating_groups(f) if use_alternation else []
    group_of = {}
    for g in groups:
        for i in g:
            group_of[i] = tuple(sorted(g))

    def count() -> int:
        total = 1
        done = set()
        for i in order:
            if i in group_of:
                g = group_of[i]
                if g in done:
                    continue
                done.add(g)
                total *= comb(len(bases[i]), len(g))
            else:
                total *= len(bases[i])
        return total

    def gen() -> Iterator[tuple[int, ...]]:
        # lexicographic over slot order; alternating groups as increasing runs
        def rec(pos: int, chosen: dict[int, int]):
            if pos == len(order):
                yield tuple(chosen[i] for i in range(f.degree))
                return
            i = order[pos]
            lo = 0
            if i in group_of:
                g = group_of[i]
                prev = [chosen[j] for j in g if j in chosen and g.index(j) < g.index(i)]
                lo = (max(prev) + 1) if prev else 0
            for b in range(lo, len(bases[i])):
                chosen[i] = b
                yield from rec(pos + 1, chosen)
            chosen.pop(i, None)

        yield from rec(0, {})

    return bases, count(), gen


def _chunks(it, size):
    it = iter(it)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _eval_tuples(a: StarAlgebra, f: MLPoly, bases, tuples: list[tuple[int, ...]]) -> np.ndarray:
    if any(not isinstance(c, int) for c in f.terms.values()):
        # clear denominators; vanishing is unaffected
        den = lcm(*(getattr(c, "denominator", 1) for c in f.terms.values()))
        f = MLPoly(f.vars, {m: int(c * den) for m, c in f.terms.items()})
    idx = np.array(tuples, dtype=np.int64).reshape(len(tuples), f.degree)

    def run(dtype):
        elems = [bases[i][idx[:, i]].astype(dtype) for i in range(f.degree)]
        total = np.zeros((len(tuples), a.dim), dtype=dtype)
        for w, x in _prefix_products(a, elems, list(f.terms)):
            total = total + f.terms[w] * x
        return total

    return _exact(run)


# -- alternating fast path ---------------------------------------------------

@dataclass
class _Pattern:
    group: list[int]            # alternating variable indices, sorted
    layout: list[int | None]    # per position: fixed variable index, or None for an alternating slot
    scale: object               # coefficient of the filling g_1, ..., g_m in position order


def alternating_pattern(f: MLPoly) -> _Pattern | None:
    """Recognise ``f = c * sum_rho sgn(rho) w(g_rho(1), ..., g_rho(m))`` where the
    other variables sit at the same positions in every monomial (Capelli shape)."""
    groups = alternating_groups(f)
    if not groups:
        return None
    group = max(groups, key=len)
    m = len(group)
    if len(f.terms) != factorial(m):
        return None
    gset = set(group)
    ref = next(iter(f.terms))
    layout = [None if v in gset else v for v in ref]
    for mono in f.terms:
        if [None if v in gset else v for v in mono] != layout:
            return None
    # identity filling: alternating slots take g_1, ..., g_m left to right
    it = iter(group)
    ident = tuple(next(it) if x is None else x for x in layout)
    scale = f.terms.get(ident)
    if scale is None:
        return None
    return _Pattern(sorted(group), layout, scale)


class _Meter:
    """Running count of scalar multiplications against a budget."""

    def __init__(self, budget: int, what: str):
        self.budget, self.what, self.spent = budget, what, 0

    def charge(self, n: int) -> None:
        self.spent += n
        if self.spent > self.budget:
            raise CostGuardExceeded(self.spent, self.budget, self.what)


def _pattern_eval(a: StarAlgebra, f: MLPoly, pat: _Pattern, alt_elems: np.ndarray,
                  bases, meter: _Meter | None = None) -> tuple[np.ndarray, np.ndarray]:
    """All values for one choice of alternating elements.

    Returns ``(choices, values)`` restricted to nonzero rows; ``choices``
    holds basis indices of the fixed variables in position order.
    """
    m = len(pat.group)
    rights = [a.right_mult(x) for x in alt_elems]
    dtype = np.int64
    choices = np.zeros((1, 0), dtype=np.int64)
    state: dict[int, np.ndarray] | None = None
    for slot in pat.layout:
        if slot is None:
            new: dict[int, np.ndarray] = {}
            if state is None:
                for j in range(m):
                    new[1 << j] = alt_elems[j].astype(dtype).reshape(1, -1)
            else:
                for mask, x in state.items():
                    for j in range(m):
                        if mask >> j & 1:
                            continue
                        inversions = bin(mask >> (j + 1)).count("1")
                        y = x @ rights[j]
                        if inversions % 2:
                            y = -y
                        key = mask | 1 << j
                        new[key] = new[key] + y if key in new else y
        else:
            b = bases[slot]
            if len(b) == 0:
                return np.zeros((0, choices.shape[1] + 1), dtype=np.int64), np.zeros((0, a.dim), dtype=dtype)
            p = choices.shape[0]
            choices = np.hstack([np.repeat(choices, len(b), axis=0),
                                 np.tile(np.arange(len(b)), p).reshape(-1, 1)])
            if state is None:
                new = {0: np.tile(b, (p, 1)).astype(dtype)}
            else:
                rb = np.stack([a.right_mult(x) for x in b])  # b x dim x dim
                new = {mask: np.einsum("pd,bdk->pbk", x, rb).reshape(p * len(b), a.dim)
                       for mask, x in state.items()}
        state = new
        if meter is not None:
            meter.charge(sum(x.shape[0] for x in state.values()) * a.dim * a.dim)
        if any(np.abs(x).max(initial=0) > _SAFE for x in state.values()):
            raise OverflowError
        live = np.zeros(choices.shape[0], dtype=bool)
        for x in state.values():
            live |= x.any(axis=1)
        if not live.all():
            choices = choices[live]
            state = {k: x[live] for k, x in state.items()}
        if choices.shape[0] == 0:
            break
    full = (1 << m) - 1
    vals = state.get(full) if state else None
    if vals is None or choices.shape[0] == 0:
        return np.zeros((0, choices.shape[1]), dtype=np.int64), np.zeros((0, a.dim), dtype=dtype)
    vals = vals * pat.scale
    nz = vals.any(axis=1)
    return choices[nz], vals[nz]


def _pattern_search(a: StarAlgebra, f: MLPoly, pat: _Pattern, stop_at_first: bool, meter: _Meter | None = None):
    """Exhaustive pass of the fast path; yields ``(tuple, value)`` for nonzero points."""
    bases = [slot_basis(a, v.kind) for v in f.vars]
    alt_basis = bases[pat.group[0]]
    fixed = [x for x in pat.layout if x is not None]
    order = [i for i in _slot_order(f) if i in set(fixed)]
    col_of = {v: k for k, v in enumerate(fixed)}
    for combo in itertools.combinations(range(len(alt_basis)), len(pat.group)):
        choices, vals = _pattern_eval(a, f, pat, alt_basis[list(combo)], bases, meter)
        if not len(choices):
            continue
        keys = [choices[:, col_of[v]] for v in reversed(order)]
        first = int(np.lexsort(keys)[0]) if keys else 0
        tup = [0] * f.degree
        for g, c in zip(pat.group, combo):
            tup[g] = c
        for v in fixed:
            tup[v] = int(choices[first, col_of[v]])
        yield tuple(tup), vals[first]
        if stop_at_first:
            return


def _eval_cost(a: StarAlgebra, f: MLPoly, n_tuples: int) -> int:
    return n_tuples * max(len(f.terms), 1) * f.degree * max(a.dim, 1) ** 2


def is_star_identity(a: StarAlgebra, f: MLPoly, budget: int = DEFAULT_BUDGET, chunk: int = 4096,
                     use_pattern: bool = True) -> bool:
    """Exhaustive test over kind-respecting basis tuples."""
    if f.is_zero():
        return True
    bases, total, gen = _tuple_space(a, f)
    if total == 0:
        return True
    pat = alternating_pattern(f) if use_pattern else None
    if pat is not None:
        # the zero-prefix pruning makes static estimates useless; meter the real work
        try:
            return next(_pattern_search(a, f, pat, True, _Meter(budget, "identity check")), None) is None
        except OverflowError:
            pass
    est = _eval_cost(a, f, total)
    if est > budget:
        raise CostGuardExceeded(est, budget, "identity check")
    for block in _chunks(gen(), chunk):
        if _eval_tuples(a, f, bases, block).any():
            return False
    return True


def search_nonvanishing(a: StarAlgebra, f: MLPoly, budget: int = 10**6, seed: int = 0,
                        chunk: int = 4096, use_pattern: bool = True) -> tuple[Assignment | None, bool]:
    """First non-vanishing basis assignment and whether the search was exhaustive.

    ``budget`` bounds the number of tuples tried.  If the tuple space is
    larger, half the budget goes to the lexicographic prefix and half to
    seeded random tuples.
    """
    bases, total, gen = _tuple_space(a, f)

    def hit(tuples, values):
        nz = np.flatnonzero(values.any(axis=1))
        if nz.size == 0:
            return None
        t = tuples[int(nz[0])]
        vals = {f.vars[i].name: bases[i][t[i]] for i in _slot_order(f)}
        labels = {name: a.format_element(v) for name, v in vals.items()}
        return Assignment(vals, labels, values[int(nz[0])])

    if total == 0:
        return None, True
    pat = alternating_pattern(f) if use_pattern else None
    if pat is not None and total <= budget:
        try:
            for tup, value in _pattern_search(a, f, pat, True):
                vals = {f.vars[i].name: bases[i][tup[i]] for i in _slot_order(f)}
                return Assignment(vals, {k: a.format_element(v) for k, v in vals.items()}, value), False
            return None, True
        except OverflowError:
            pass
    ordered_budget = budget if total <= budget else budget // 2
    tried = 0
    for block in _chunks(gen(), chunk):
        block = block[: ordered_budget - tried]
        if not block:
            break
        found = hit(block, _eval_tuples(a, f, bases, block))
        if found:
            return found, False
        tried += len(block)
        if tried >= ordered_budget:
            break
    if total <= budget:
        return None, True
    rng = random.Random(seed)
    order = _slot_order(f)
    remaining = budget - tried
    while remaining > 0:
        n = min(chunk, remaining)
        block = [tuple(rng.randrange(len(bases[i])) if len(bases[i]) else 0 for i in range(f.degree))
                 for _ in range(n)]
        if any(len(bases[i]) == 0 for i in order):
            break
        found = hit(block, _eval_tuples(a, f, bases, block))
        if found:
            return found, False
        remaining -= n
    return None, False


def find_nonvanishing(a: StarAlgebra, f: MLPoly, budget: int = 10**6) -> Assignment | None:
    return search_nonvanishing(a, f, budget)[0]


# -- codimensions -----------------------------------------------------------------

def block_tuples(a: StarAlgebra, eps: Sequence[VarKind]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(len(slot_basis(a, k))) for k in eps)))


def block_cost(a: StarAlgebra, eps: Sequence[VarKind]) -> int:
    n = len(eps)
    t = prod(len(slot_basis(a, k)) for k in eps)
    return t * factorial(n) * n * max(a.dim, 1) ** 2


def evaluation_matrix(a: StarAlgebra, eps: Sequence[VarKind],
                      columns: Sequence[tuple[int, ...]] | None = None) -> np.ndarray:
    """Rows: the ``n!`` monomials of ``P_eps`` (lexicographic permutations);
    columns: (basis tuple, coordinate).  Entries are exact integers."""
    n = len(eps)
    bases = [slot_basis(a, k) for k in eps]
    tuples = list(columns) if columns is not None else block_tuples(a, eps)
    words = list(itertools.permutations(range(n)))
    if not tuples or a.dim == 0:
        return np.zeros((len(words), 0), dtype=np.int64)
    idx = np.array(tuples, dtype=np.int64).reshape(len(tuples), n)
    row_of = {w: r for r, w in enumerate(words)}

    def run(dtype):
        elems = [bases[i][idx[:, i]].astype(dtype) for i in range(n)]
        out = np.zeros((len(words), len(tuples) * a.dim), dtype=dtype)
        for w, x in _prefix_products(a, elems, words):
            out[row_of[w]] = x.reshape(-1)
        return out

    return _exact(run)


@dataclass
class CodimReport:
    n: int
    block_ranks: dict[tuple[VarKind, ...], int]
    total: int
    regime: str
    primes: tuple[int, ...] = ()
    agree: bool = True
    per_regime: dict[str, dict[tuple[VarKind, ...], int]] = field(default_factory=dict)
    lower_bound: bool = False

    def __post_init__(self):
        assert self.total == sum(self.block_ranks.values())
        assert self.total <= 2**self.n * factorial(self.n)


def _ranks(mat: np.ndarray, regimes: Sequence[str], primes: Sequence[int]) -> dict[str, int]:
    out = {}
    ncols = mat.shape[1]
    if ncols == 0:
        return {r: 0 for r in regimes}
    for r in regimes:
        if r == "rational":
            out[r] = rank(Matrix.from_rows(mat, QQ, ncols))
        else:
            p = int(r.split(":")[1])
            out[r] = rank(Matrix.from_rows(mat, GF(p), ncols))
    return out


def codimension(a: StarAlgebra, n: int, regime: str = "modp", primes: Sequence[int] | None = None,
                budget: int = DEFAULT_BUDGET, sample_columns: int | None = None, seed: int = 0,
                merged: bool = False) -> CodimReport:
    """``c_n^*(A)`` as the sum over type vectors of evaluation-matrix ranks.

    ``regime`` is ``"modp"`` (every prime in ``primes``, cross-checked),
    ``"rational"``, or ``"both"``.  ``sample_columns`` restricts each block
    to that many random tuples and turns the result into a lower bound.
    ``merged`` ranks one block-diagonal matrix instead of the blocks.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    primes = tuple(primes) if primes is not None else default_primes()
    regimes: list[str] = []
    if regime in ("modp", "both"):
        regimes += [f"p:{p}" for p in primes]
    if regime in ("rational", "both"):
        regimes.append("rational")
    if not regimes:
        raise ValueError(f"unknown regime {regime!r}")
    eps_list = type_vectors(n)
    est = sum(block_cost(a, e) for e in eps_list)
    if sample_columns is None and est > budget:
        raise CostGuardExceeded(est, budget, f"c_{n}^* of {a.name}")
    rng = random.Random(seed)
    mats = {}
    for eps in eps_list:
        cols = None
        if sample_columns is not None:
            full = block_tuples(a, eps)
            if len(full) > sample_columns:
                cols = sorted(rng.sample(full, sample_columns))
        mats[eps] = evaluation_matrix(a, eps, cols)

    per: dict[str, dict] = {r: {} for r in regimes}
    if merged:
        rows = sum(m.shape[0] for m in mats.values())
        cols = sum(m.shape[1] for m in mats.values())
        big = np.zeros((rows, cols), dtype=object)
        r0 = c0 = 0
        for m in mats.values():
            big[r0:r0 + m.shape[0], c0:c0 + m.shape[1]] = m
            r0 += m.shape[0]
            c0 += m.shape[1]
        for r, v in _ranks(big, regimes, primes).items():
            per[r] = {"merged": v}
    else:
        for eps, m in mats.items():
            for r, v in _ranks(m, regimes, primes).items():
                per[r][eps] = v
    primary = regimes[0]
    totals = {r: sum(d.values()) for r, d in per.items()}
    agree = len(set(totals.values())) == 1 and all(per[r] == per[primary] for r in regimes)
    if not agree:
        log.warning("rank disagreement for %s at n=%d: %s", a.name, n, totals)
    blocks = per[primary] if not merged else {tuple(): per[primary]["merged"]}
    return CodimReport(n=n, block_ranks=dict(blocks), total=totals[primary],
                       regime=regime if sample_columns is None else f"{regime}+sampled",
                       primes=primes if regime != "rational" else (), agree=agree,
                       per_regime=per, lower_bound=sample_columns is not None)


def codimension_sequence(a: StarAlgebra, n_max: int, **kw) -> list[int]:
    return [codimension(a, n, **kw).total for n in range(1, n_max + 1)]
