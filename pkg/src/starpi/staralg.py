"""Finite-dimensional algebras with involution given by structure constants.

Every built-in algebra has integer structure constants and an integer
involution matrix, and its symmetric/skew bases are primitive integer
vectors, so evaluations stay in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Mapping, Sequence

import numpy as np

from .linalg import QQ, Matrix, rank, rref


class AlgebraError(ValueError):
    pass


def _primitive(v: np.ndarray) -> np.ndarray:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g > 1:
        v = v // g
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v


class StarAlgebra:
    """Algebra with involution on the coordinate space ``F^dim``.

    ``products`` maps a basis pair ``(i, j)`` to the sparse expansion
    ``((k, c), ...)`` of ``e_i e_j``; ``inv`` is the involution matrix acting
    on coordinate column vectors.
    """

    def __init__(self, dim: int, products: Mapping[tuple[int, int], Sequence[tuple[int, int]]],
                 inv, labels: Sequence[str] | None = None, unit=None, name: str = ""):
        self.dim = dim
        self.products = {k: tuple((int(a), int(c)) for a, c in v if c != 0)
                         for k, v in products.items()}
        self.products = {k: v for k, v in self.products.items() if v}
        self.inv = np.array(inv, dtype=np.int64).reshape(dim, dim)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(dim)]
        self.unit = None if unit is None else np.asarray(unit, dtype=np.int64)
        self.name = name or f"algebra(dim={dim})"
        self.simple: "Component | None" = None  # set by the *-simple constructors

    def __repr__(self) -> str:
        return f"StarAlgebra({self.name}, dim={self.dim})"

    # -- dense views -----------------------------------------------------
    @cached_property
    def table(self) -> np.ndarray:
        """Dense structure constants ``C[i, j, k]``."""
        c = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for (i, j), terms in self.products.items():
            for k, v in terms:
                c[i, j, k] += v
        return c

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        x = np.asarray(x)
        y = np.asarray(y)
        return np.einsum("i,j,ijk->k", x, y, self.table.astype(x.dtype) if x.dtype == object else self.table)

    def star(self, x) -> np.ndarray:
        return self.inv @ np.asarray(x)

    def right_mult(self, y) -> np.ndarray:
        """Matrix ``R`` with ``x @ R == x * y`` for coordinate row vectors."""
        return np.einsum("b,ibk->ik", np.asarray(y, dtype=np.int64), self.table)

    def format_element(self, x) -> str:
        parts = []
        for i, c in enumerate(x):
            c = int(c)
            if c == 0:
                continue
            lab = self.labels[i]
            body = lab if abs(c) == 1 else f"{abs(c)}*{lab}"
            parts.append(("-" if c < 0 else "+") + body)
        if not parts:
            return "0"
        s = " ".join(p[0] + " " + p[1:] for p in parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    # -- symmetric / skew parts -----------------------------------------
    def _eigenbasis(self, sign: int) -> np.ndarray:
        if not np.array_equal(self.inv @ self.inv, np.eye(self.dim, dtype=np.int64)):
            raise AlgebraError("involution matrix is not involutive")
        target = rank(Matrix.from_rows(np.eye(self.dim, dtype=np.int64) + sign * self.inv, QQ, self.dim)) \
            if self.dim else 0
        chosen: list[np.ndarray] = []
        for j in range(self.dim):
            v = self.basis_vector(j) + sign * self.inv[:, j]
            if not v.any():
                continue
            v = _primitive(v)
            if rank(Matrix.from_rows(chosen + [v], QQ, self.dim)) > len(chosen):
                chosen.append(v)
            if len(chosen) == target:
                break
        if len(chosen) != target:
            raise AlgebraError("failed to find an integral eigenbasis")
        return np.array(chosen, dtype=np.int64).reshape(len(chosen), self.dim)

    @cached_property
    def sym_basis(self) -> np.ndarray:
        return self._eigenbasis(+1)

    @cached_property
    def skew_basis(self) -> np.ndarray:
        return self._eigenbasis(-1)

    @property
    def dim_sym(self) -> int:
        return len(self.sym_basis)

    @property
    def dim_skew(self) -> int:
        return len(self.skew_basis)

    # -- validation ------------------------------------------------------
    def check_associative(self) -> bool:
        """Sparse check of ``(e_i e_j) e_l == e_i (e_j e_l)`` on all triples."""
        by_left: dict[int, list[tuple[int, int, tuple]]] = {}
        for (i, j), terms in self.products.items():
            by_left.setdefault(i, []).append((i, j, terms))
        lhs: dict[tuple[int, int, int, int], int] = {}
        for (i, j), terms in self.products.items():
            for k, c in terms:
                for (_, l, terms2) in by_left.get(k, ()):
                    for m, c2 in terms2:
                        key = (i, j, l, m)
                        lhs[key] = lhs.get(key, 0) + c * c2
        rhs: dict[tuple[int, int, int, int], int] = {}
        for (j, l), terms in self.products.items():
            for k, c in terms:
                for i in range(self.dim):
                    for m, c2 in self.products.get((i, k), ()):
                        key = (i, j, l, m)
                        rhs[key] = rhs.get(key, 0) + c * c2
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        return lhs == rhs

    def check_involution(self) -> bool:
        """``inv`` squares to the identity and reverses products on basis pairs."""
        if not np.array_equal(self.inv @ self.inv, np.eye(self.dim, dtype=np.int64)):
            return False
        t = self.table
        # (e_i e_j)^* = e_j^* e_i^*, all pairs at once
        left = np.einsum("ijk,lk->ijl", t, self.inv)
        right = np.einsum("aj,bi,abk->ijk", self.inv, self.inv, t, optimize=True)
        return bool(np.array_equal(left, right))

    def validate(self) -> "StarAlgebra":
        if not self.check_associative():
            raise AlgebraError(f"{self.name}: multiplication is not associative")
        if not self.check_involution():
            raise AlgebraError(f"{self.name}: involution is not an involutive anti-automorphism")
        return self


# -- constructors ------------------------------------------------------------

def _unit_index(k: int, p: int, q: int) -> int:
    return p * k + q


def _matrix_unit_products(k: int, offset: int = 0, opposite: bool = False) -> dict:
    prods = {}
    for p in range(k):
        for q in range(k):
            for s in range(k):
                a = offset + _unit_index(k, p, q)
                b = offset + _unit_index(k, q, s)
                prods[(a, b)] = ((offset + _unit_index(k, p, s), 1),)
    if opposite:
        # x o y = y x
        prods = {(b, a): v for (a, b), v in prods.items()}
    return prods


def _unit_labels(k: int) -> list[str]:
    sep = "," if k > 9 else ""
    return [f"e{p + 1}{sep}{q + 1}" for p in range(k) for q in range(k)]


def _inv_from_unit_map(k: int, image: Callable[[int, int], tuple[int, int, int]]) -> np.ndarray:
    """Involution matrix on M_k from ``(p, q) -> (sign, p', q')``."""
    inv = np.zeros((k * k, k * k), dtype=np.int64)
    for p in range(k):
        for q in range(k):
            s, p2, q2 = image(p, q)
            inv[_unit_index(k, p2, q2), _unit_index(k, p, q)] = s
    return inv


def _identity_unit(k: int) -> np.ndarray:
    u = np.zeros(k * k, dtype=np.int64)
    for p in range(k):
        u[_unit_index(k, p, p)] = 1
    return u


def transpose_map(k: int):
    return lambda p, q: (1, q, p)


def symplectic_map(k: int):
    """``(A B; C D) -> (D^t -B^t; -C^t A^t)`` on units of M_{2m}."""
    m = k // 2

    def image(p, q):
        bp, ip = divmod(p, m)
        bq, iq = divmod(q, m)
        # block (bp, bq) goes to block (1-bq, 1-bp), transposed inside the block
        sign = -1 if bp != bq else 1
        return sign, (1 - bq) * m + iq, (1 - bp) * m + ip

    return image


def gamma_map(d: int):
    return lambda p, q: (1, d - 1 - q, d - 1 - p)


def gamma_involution(d: int) -> np.ndarray:
    """Involution matrix of the reflection along the secondary diagonal of M_d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return _inv_from_unit_map(d, gamma_map(d))


def mk_transpose(k: int) -> StarAlgebra:
    if k < 1:
        raise ValueError("k must be at least 1")
    a = StarAlgebra(k * k, _matrix_unit_products(k), _inv_from_unit_map(k, transpose_map(k)),
                    _unit_labels(k), _identity_unit(k), name=f"(M_{k}, t)")
    a.simple = Component("transpose", k)
    return a


def mk_symplectic(m: int) -> StarAlgebra:
    if m < 1:
        raise ValueError("m must be at least 1")
    k = 2 * m
    a = StarAlgebra(k * k, _matrix_unit_products(k), _inv_from_unit_map(k, symplectic_map(k)),
                    _unit_labels(k), _identity_unit(k), name=f"(M_{k}, s)")
    a.simple = Component("symplectic", m)
    return a


def mk_exchange(h: int) -> StarAlgebra:
    """``M_h + M_h^op`` with ``(a, b)^* = (b, a)``; first factor first in the basis."""
    if h < 1:
        raise ValueError("h must be at least 1")
    n = h * h
    prods = dict(_matrix_unit_products(h))
    prods.update(_matrix_unit_products(h, offset=n, opposite=True))
    inv = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        inv[n + i, i] = 1
        inv[i, n + i] = 1
    labels = [f"({u},0)" for u in _unit_labels(h)] + [f"(0,{u})" for u in _unit_labels(h)]
    unit = np.concatenate([_identity_unit(h), _identity_unit(h)])
    a = StarAlgebra(2 * n, prods, inv, labels, unit, name=f"(M_{h} + M_{h}^op, exc)")
    a.simple = Component("exchange", h)
    return a


def zero_algebra() -> StarAlgebra:
    return StarAlgebra(0, {}, np.zeros((0, 0), dtype=np.int64), [], name="0")


def direct_sum(a: StarAlgebra, b: StarAlgebra) -> StarAlgebra:
    n = a.dim
    prods = dict(a.products)
    for (i, j), terms in b.products.items():
        prods[(n + i, n + j)] = tuple((k + n, c) for k, c in terms)
    inv = np.zeros((n + b.dim, n + b.dim), dtype=np.int64)
    inv[:n, :n] = a.inv
    inv[n:, n:] = b.inv
    unit = None
    if a.unit is not None and b.unit is not None:
        unit = np.concatenate([a.unit, b.unit])
    labels = [f"{l}|1" for l in a.labels] + [f"{l}|2" for l in b.labels]
    return StarAlgebra(n + b.dim, prods, inv, labels, unit, name=f"{a.name} + {b.name}")


def tensor_nilpotent(a: StarAlgebra, nil_dim: int = 1, nil_index: int = 2,
                     nil_involution: str = "identity") -> StarAlgebra:
    """``A (x) N^#`` with ``N`` the commutative algebra spanned by the monomials
    of degree ``1..nil_index-1`` in ``nil_dim`` commuting generators.

    ``nil_involution`` is ``"identity"`` or ``"negate"`` (each generator goes
    to its negative).  ``nil_index == 1`` means ``N = 0`` and returns ``A``.
    """
    if nil_index < 1 or nil_dim < 0:
        raise ValueError("nil_index must be >= 1 and nil_dim >= 0")
    if nil_index == 1 or nil_dim == 0:
        return a

    monos = [()]
    for deg in range(1, nil_index):
        monos.extend(itertools.combinations_with_replacement(range(nil_dim), deg))
    idx = {m: i for i, m in enumerate(monos)}
    nprod = {}
    for m1 in monos:
        for m2 in monos:
            m = tuple(sorted(m1 + m2))
            if m in idx:
                nprod[(idx[m1], idx[m2])] = idx[m]
    sign = {"identity": lambda m: 1, "negate": lambda m: (-1) ** len(m)}[nil_involution]
    nd = len(monos)
    prods = {}
    for (i, j), terms in a.products.items():
        for (s, t), u in nprod.items():
            prods[(i * nd + s, j * nd + t)] = tuple((k * nd + u, c) for k, c in terms)
    dim = a.dim * nd
    inv = np.zeros((dim, dim), dtype=np.int64)
    for j in range(a.dim):
        for i in range(a.dim):
            if a.inv[i, j]:
                for s, m in enumerate(monos):
                    inv[i * nd + s, j * nd + s] = a.inv[i, j] * sign(m)
    mono_label = lambda m: "1" if not m else "*".join(f"t{g + 1}" for g in m)
    labels = [f"{la}(x){mono_label(m)}" for la in a.labels for m in monos]
    unit = None
    if a.unit is not None:
        unit = np.zeros(dim, dtype=np.int64)
        unit[::nd] = a.unit
    return StarAlgebra(dim, prods, inv, labels, unit,
                       name=f"{a.name} (x) N#(gens={nil_dim}, index={nil_index}"
                            + (", negate)" if nil_involution == "negate" else ")"))


# -- UT*(A_1, ..., A_n) -----------------------------------------------------

@dataclass(frozen=True)
class Component:
    kind: str  # "transpose" | "symplectic" | "exchange"
    param: int

    @property
    def block(self) -> int:
        return 2 * self.param if self.kind == "symplectic" else self.param

    @property
    def dim(self) -> int:
        return 2 * self.param**2 if self.kind == "exchange" else self.block**2

    @property
    def dim_sym(self) -> int:
        k = self.param
        return {"transpose": k * (k + 1) // 2, "symplectic": k * (2 * k - 1), "exchange": k * k}[self.kind]

    @property
    def dim_skew(self) -> int:
        return self.dim - self.dim_sym

    def algebra(self) -> StarAlgebra:
        return {"transpose": mk_transpose, "symplectic": mk_symplectic, "exchange": mk_exchange}[self.kind](self.param)

    def to_dict(self) -> dict:
        key = {"transpose": "k", "symplectic": "m", "exchange": "h"}[self.kind]
        return {"kind": self.kind, key: self.param}

    def __str__(self) -> str:
        return f"{self.kind} {self.param}"


def component(kind: str, param: int) -> Component:
    if kind not in ("transpose", "symplectic", "exchange"):
        raise ValueError(f"unknown *-simple kind {kind!r}")
    if param < 1:
        raise ValueError("component parameter must be at least 1")
    return Component(kind, int(param))


@dataclass(frozen=True)
class UTSpec:
    components: tuple[Component, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("UT* needs at least one component")

    @classmethod
    def of(cls, *items) -> "UTSpec":
        """``UTSpec.of(("transpose", 1), ("exchange", 1))``."""
        return cls(tuple(c if isinstance(c, Component) else component(*c) for c in items))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def d_plus(self) -> int:
        return sum(c.dim_sym for c in self.components)

    @property
    def d_minus(self) -> int:
        return sum(c.dim_skew for c in self.components)

    @property
    def total_dim(self) -> int:
        return sum(c.dim for c in self.components)

    @property
    def size(self) -> int:
        """Side length ``d`` of each half; the ambient matrix algebra is ``M_{2d}``."""
        return sum(c.block for c in self.components)

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"


@dataclass
class UTStar:
    """A UT* algebra together with its natural decomposition."""

    spec: UTSpec
    algebra: StarAlgebra
    matrices: list[np.ndarray]          # basis as 2d x 2d integer matrices
    component_ranges: list[range]       # basis indices of Delta(A_i)
    radical_range: range                # basis indices of U


def _embed_block(big: np.ndarray, small: np.ndarray, offset: int) -> None:
    k = small.shape[0]
    big[offset:offset + k, offset:offset + k] += small


def _unit_matrix(k: int, p: int, q: int) -> np.ndarray:
    e = np.zeros((k, k), dtype=np.int64)
    e[p, q] = 1
    return e


def _apply_unit_map(x: np.ndarray, image) -> np.ndarray:
    out = np.zeros_like(x)
    for p, q in zip(*np.nonzero(x)):
        s, p2, q2 = image(p, q)
        out[p2, q2] += s * x[p, q]
    return out


def _structure_from_matrices(mats: list[np.ndarray], ambient_inv) -> tuple[dict, np.ndarray]:
    """Structure constants and involution of the span of ``mats`` (closed, independent)."""
    size = mats[0].shape[0]
    flat = np.array([m.reshape(-1) for m in mats], dtype=np.int64)
    # every basis matrix is determined by one coordinate it alone has among its support
    rows = flat.shape[0]

    def coords(target: np.ndarray) -> np.ndarray:
        aug = np.hstack([flat.T, target.reshape(-1, 1)])
        red, piv = rref(Matrix.from_rows(aug.tolist(), QQ, rows + 1))
        if rows in piv:
            raise AlgebraError("subspace is not closed")
        out = np.zeros(rows, dtype=np.int64)
        for r, c in enumerate(piv):
            val = red[r, rows]
            if val.denominator != 1:
                raise AlgebraError("non-integral structure constant")
            out[c] = int(val)
        return out

    # fast path: every ambient coordinate is touched by at most one basis matrix,
    # so one representative coordinate per basis matrix reads off all coefficients
    nz = flat != 0
    if nz.sum(axis=0).max(initial=0) <= 1:
        rep = nz.argmax(axis=1)
        scale = flat[np.arange(rows), rep]

        def batch_coords(targets: np.ndarray) -> np.ndarray:
            t = targets.reshape(len(targets), -1)
            out = t[:, rep] // scale
            if not np.array_equal(out @ flat, t):
                raise AlgebraError("subspace is not closed")
            return out
    else:
        def batch_coords(targets: np.ndarray) -> np.ndarray:
            return np.array([coords(t) for t in targets], dtype=np.int64).reshape(len(targets), rows)

    stack = np.array(mats, dtype=np.int64)
    allp = np.einsum("aij,bjk->abik", stack, stack).reshape(rows * rows, -1)
    live = np.flatnonzero(allp.any(axis=1))
    prods = {}
    for idx, v in zip(live, batch_coords(allp[live])):
        i, j = divmod(int(idx), rows)
        prods[(i, j)] = tuple((k, int(c)) for k, c in enumerate(v) if c)
    images = np.array([ambient_inv(a) for a in mats], dtype=np.int64)
    inv = batch_coords(images).T.copy()
    return prods, inv


def mk_UT_star_full(spec: UTSpec) -> UTStar:
    d = spec.size
    big = 2 * d
    gamma_big = lambda x: _apply_unit_map(x, gamma_map(big))
    mats: list[np.ndarray] = []
    labels: list[str] = []
    ranges: list[range] = []
    offsets = []
    o = 0
    for comp in spec.components:
        offsets.append(o)
        o += comp.block
    for ci, (comp, off) in enumerate(zip(spec.components, offsets)):
        k = comp.block
        bottom = big - off - k
        start = len(mats)
        g = gamma_map(k)
        if comp.kind == "exchange":
            for first in (True, False):
                for p in range(k):
                    for q in range(k):
                        m = np.zeros((big, big), dtype=np.int64)
                        u = _unit_matrix(k, p, q)
                        if first:
                            _embed_block(m, u, off)
                        else:
                            # opposite factor enters through gamma so products match
                            _embed_block(m, _apply_unit_map(u, g), bottom)
                        mats.append(m)
                        unit_name = f"e{p + 1}{q + 1}"
                        labels.append(f"D{ci + 1}:({unit_name},0)" if first else f"D{ci + 1}:(0,{unit_name})")
        else:
            mu = transpose_map(k) if comp.kind == "transpose" else symplectic_map(k)
            for p in range(k):
                for q in range(k):
                    m = np.zeros((big, big), dtype=np.int64)
                    u = _unit_matrix(k, p, q)
                    _embed_block(m, u, off)
                    _embed_block(m, _apply_unit_map(_apply_unit_map(u, mu), g), bottom)
                    mats.append(m)
                    labels.append(f"D{ci + 1}:e{p + 1}{q + 1}")
        ranges.append(range(start, len(mats)))
    rad_start = len(mats)
    top_units = []
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            for p in range(spec.components[i].block):
                for q in range(spec.components[j].block):
                    top_units.append((offsets[i] + p, offsets[j] + q))
    for p, q in sorted(top_units):
        mats.append(_unit_matrix(big, p, q))
        labels.append(f"U:e{p + 1},{q + 1}")
    mirrored = sorted((big - 1 - q, big - 1 - p) for p, q in top_units)
    for p, q in mirrored:
        mats.append(_unit_matrix(big, p, q))
        labels.append(f"U:e{p + 1},{q + 1}")
    prods, inv = _structure_from_matrices(mats, gamma_big)
    unit = np.zeros(len(mats), dtype=np.int64)
    # identity of M_{2d} lies in D: identities of the components
    for comp, rng in zip(spec.components, ranges):
        alg_unit = comp.algebra().unit
        unit[rng.start:rng.stop] = alg_unit
    alg = StarAlgebra(len(mats), prods, inv, labels, unit, name=f"UT*{spec}")
    return UTStar(spec, alg, mats, ranges, range(rad_start, len(mats)))


def mk_UT_star(spec: UTSpec) -> StarAlgebra:
    """``UT*(A_1, ..., A_n) = D + U`` inside ``(M_{2d}, gamma_{2d})``."""
    return mk_UT_star_full(spec).algebra


def component_embedding_ok(ut: UTStar, i: int) -> bool:
    """Delta restricted to ``A_i`` respects products and involutions."""
    comp_alg = ut.spec.components[i].algebra()
    rng = ut.component_ranges[i]
    off = rng.start
    for (a, b), terms in comp_alg.products.items():
        got = ut.algebra.products.get((a + off, b + off), ())
        if sorted(got) != sorted((k + off, c) for k, c in terms):
            return False
    for (a, b) in ut.algebra.products:
        if a in rng and b in rng and (a - off, b - off) not in comp_alg.products:
            return False
    block = ut.algebra.inv[rng.start:rng.stop, rng.start:rng.stop]
    outside = [r for r in range(ut.algebra.dim) if r not in rng]
    return bool(np.array_equal(block, comp_alg.inv)) and not ut.algebra.inv[np.ix_(outside, rng)].any()


def _span_members(flat: np.ndarray, cands: np.ndarray) -> np.ndarray:
    """Exact membership of each candidate row in the row span of ``flat`` (full row rank).

    Coordinates come from a float least-squares solve and are accepted only if
    the integer reconstruction is exact; anything else gets an exact rank test.
    """
    if len(cands) == 0:
        return np.zeros(0, dtype=bool)
    coef = np.linalg.lstsq(flat.T.astype(float), cands.T.astype(float), rcond=None)[0].T
    coef = np.rint(coef).astype(np.int64)
    ok = np.all(coef @ flat == cands, axis=1)
    base = flat.shape[0]
    for i in np.flatnonzero(~ok):
        stacked = np.vstack([flat, cands[i:i + 1]])
        ok[i] = rank(Matrix.from_rows(stacked, QQ, flat.shape[1])) == base
    return ok


def check_closed_in_ambient(ut: UTStar) -> bool:
    """Exhaustive check that the basis span is closed under product and gamma_{2d}."""
    from .linalg import GF

    big = 2 * ut.spec.size
    mats = np.array(ut.matrices, dtype=np.int64)
    flat = mats.reshape(len(mats), -1)
    # full rank mod p implies full rank over Q
    if rank(Matrix.from_rows(flat, GF(), big * big)) != len(mats):
        return False
    g = gamma_map(big)
    images = np.array([_apply_unit_map(m, g).reshape(-1) for m in ut.matrices])
    if not _span_members(flat, images).all():
        return False
    prods = np.einsum("aij,bjk->abik", mats, mats).reshape(-1, big * big)
    prods = prods[prods.any(axis=1)]
    return bool(_span_members(flat, prods).all())


# -- spec files --------------------------------------------------------------

def _component_from_dict(d: Mapping) -> Component:
    kind = d.get("kind")
    key = {"transpose": "k", "symplectic": "m", "exchange": "h"}.get(kind)
    if key is None or key not in d:
        raise AlgebraError(f"bad *-simple component {dict(d)!r}")
    return component(kind, int(d[key]))


def from_spec(d: Mapping) -> StarAlgebra:
    """Build an algebra from its structured description (see README)."""
    if not isinstance(d, Mapping) or "kind" not in d:
        raise AlgebraError("algebra spec must be an object with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "transpose":
            return mk_transpose(int(d["k"]))
        if kind == "symplectic":
            return mk_symplectic(int(d["m"]))
        if kind == "exchange":
            return mk_exchange(int(d["h"]))
        if kind == "direct_sum":
            parts = [from_spec(p) for p in d["parts"]]
            if not parts:
                return zero_algebra()
            out = parts[0]
            for p in parts[1:]:
                out = direct_sum(out, p)
            return out
        if kind == "ut_star":
            return mk_UT_star(UTSpec(tuple(_component_from_dict(c) for c in d["components"])))
        if kind == "tensor_nilpotent":
            return tensor_nilpotent(from_spec(d["base"]), int(d.get("nil_dim", 1)), int(d.get("nil_index", 2)),
                                    d.get("nil_involution", "identity"))
        if kind == "zero":
            return zero_algebra()
        if kind == "raw":
            dim = int(d["dim"])
            prods = {}
            for i, j, k, c in d["mult"]:
                prods.setdefault((int(i), int(j)), []).append((int(k), int(c)))
            return StarAlgebra(dim, prods, d["inv"], d.get("labels"), d.get("unit"), name=d.get("name", "raw"))
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"invalid {kind} spec: {exc}") from exc
    raise AlgebraError(f"unknown algebra kind {kind!r}")


def load_spec(path) -> StarAlgebra:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}: not valid JSON ({exc})") from exc
    return from_spec(data)
