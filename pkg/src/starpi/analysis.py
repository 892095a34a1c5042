"""Exponents, Capelli thresholds, codimension tables and direct-sum bounds."""

from __future__ import annotations

import csv
import io
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import evaluate as ev
from .freealg import GEN, capelli, capelli_star, pn_star_dim
from .linalg import QQ, Matrix, rank, row_space
from .staralg import (AlgebraError, Component, StarAlgebra, UTSpec, _component_from_dict, direct_sum, from_spec,
                      mk_exchange, mk_transpose, mk_UT_star_full, tensor_nilpotent, zero_algebra)
from .tideal import TStarGens, ideal_codimension


# -- exponents -----------------------------------------------------------------

def star_exponent_simple(a: StarAlgebra) -> int:
    if a.simple is None:
        raise AlgebraError(f"{a.name} is not one of the *-simple constructors")
    return a.dim


# UT* specs small enough to check structurally in well under a second
DESK_UT_SPECS = [UTSpec.of(*c) for c in (
    [("transpose", 1)], [("exchange", 1)], [("symplectic", 1)], [("transpose", 2)],
    [("transpose", 1), ("transpose", 1)], [("transpose", 1), ("exchange", 1)], [("exchange", 1), ("transpose", 1)],
    [("transpose", 1), ("symplectic", 1)], [("transpose", 2), ("transpose", 1)],
    [("transpose", 1), ("transpose", 1), ("transpose", 1)], [("transpose", 1), ("exchange", 1), ("transpose", 1)],
)]


def star_exponent_ut(spec: UTSpec) -> int:
    return spec.total_dim


@dataclass
class WedderburnData:
    """Simple components (basis rows in algebra coordinates) and radical."""

    components: list[np.ndarray]
    radical: np.ndarray
    tags: list[str] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [len(c) for c in self.components]


def _span_rank(rows: Sequence[np.ndarray], dim: int) -> int:
    rows = [r for r in rows if np.any(r)]
    if not rows:
        return 0
    return rank(Matrix.from_rows(np.array(rows), QQ, dim))


def subspace_product(a: StarAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Reduced basis (integer rows) of ``span{u v : u in X, v in Y}``."""
    if len(x) == 0 or len(y) == 0:
        return np.zeros((0, a.dim), dtype=np.int64)
    prods = np.einsum("ui,vj,ijk->uvk", x, y, a.table).reshape(-1, a.dim)
    prods = prods[prods.any(axis=1)]
    if len(prods) == 0:
        return np.zeros((0, a.dim), dtype=np.int64)
    basis = row_space(Matrix.from_rows(prods, QQ, a.dim)).basis
    # clear denominators row by row, keeping integer coordinates
    out = []
    for row in basis:
        den = 1
        for v in row:
            den = den * v.denominator // np.gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return np.array(out, dtype=np.int64).reshape(len(out), a.dim)


def _contained(a: StarAlgebra, small: np.ndarray, big: np.ndarray) -> bool:
    if len(small) == 0:
        return True
    return _span_rank(list(big) + list(small), a.dim) == _span_rank(list(big), a.dim)


def validate_wedderburn(a: StarAlgebra, w: WedderburnData) -> None:
    """Raise unless components are *-stable and pairwise orthogonal and ``J`` is a
    nilpotent *-stable ideal complementing them."""
    allrows = [r for c in w.components for r in c] + list(w.radical)
    if len(allrows) != a.dim or _span_rank(allrows, a.dim) != a.dim:
        raise AlgebraError("components and radical do not form a basis")
    for i, ci in enumerate(w.components):
        if not _contained(a, (a.inv @ ci.T).T, ci):
            raise AlgebraError(f"component {i} is not *-stable")
        for j, cj in enumerate(w.components):
            if i != j and len(subspace_product(a, ci, cj)):
                raise AlgebraError(f"components {i} and {j} are not orthogonal")
    j = w.radical
    if len(j):
        if not _contained(a, (a.inv @ j.T).T, j):
            raise AlgebraError("radical is not *-stable")
        full = np.eye(a.dim, dtype=np.int64)
        if not (_contained(a, subspace_product(a, full, j), j) and _contained(a, subspace_product(a, j, full), j)):
            raise AlgebraError("radical is not an ideal")
        power = j
        for _ in range(a.dim + 1):
            power = subspace_product(a, power, j)
            if len(power) == 0:
                break
        else:
            raise AlgebraError("radical is not nilpotent")


def wedderburn_simple(a: StarAlgebra) -> WedderburnData:
    return WedderburnData([np.eye(a.dim, dtype=np.int64)], np.zeros((0, a.dim), dtype=np.int64), [a.name])


def wedderburn_ut(spec: UTSpec) -> tuple[StarAlgebra, WedderburnData]:
    ut = mk_UT_star_full(spec)
    eye = np.eye(ut.algebra.dim, dtype=np.int64)
    comps = [eye[list(r)] for r in ut.component_ranges]
    return ut.algebra, WedderburnData(comps, eye[list(ut.radical_range)], [str(c) for c in spec.components])


def wedderburn_direct_sum(a: StarAlgebra, wa: WedderburnData, b: StarAlgebra,
                          wb: WedderburnData) -> tuple[StarAlgebra, WedderburnData]:
    s = direct_sum(a, b)

    def pad(rows, left):
        out = np.zeros((len(rows), s.dim), dtype=np.int64)
        if left:
            out[:, :a.dim] = rows
        else:
            out[:, a.dim:] = rows
        return out

    comps = [pad(c, True) for c in wa.components] + [pad(c, False) for c in wb.components]
    rad = np.vstack([pad(wa.radical, True), pad(wb.radical, False)])
    return s, WedderburnData(comps, rad, wa.tags + wb.tags)


def wedderburn_tensor_nilpotent(a: StarAlgebra, wa: WedderburnData, nil_dim: int = 1, nil_index: int = 2,
                                nil_involution: str = "identity") -> tuple[StarAlgebra, WedderburnData]:
    t = tensor_nilpotent(a, nil_dim, nil_index, nil_involution)
    if t is a:
        return a, wa
    nd = t.dim // a.dim

    def lift(rows, slot):
        out = np.zeros((len(rows), t.dim), dtype=np.int64)
        out[:, slot::nd] = rows
        return out

    comps = [lift(c, 0) for c in wa.components]
    rad = [lift(wa.radical, s) for s in range(nd)]
    eye = np.eye(a.dim, dtype=np.int64)
    rad += [lift(eye, s) for s in range(1, nd)]
    rad = np.vstack(rad)
    # radical (x) N appears twice above; keep an independent subset
    keep = []
    for row in rad:
        if _span_rank(keep + [row], t.dim) > len(keep):
            keep.append(row)
    return t, WedderburnData(comps, np.array(keep, dtype=np.int64).reshape(len(keep), t.dim), wa.tags)


def wedderburn_from_spec(d) -> tuple[StarAlgebra, WedderburnData]:
    """Algebra and its natural decomposition for a structured spec (no ``raw`` kind)."""
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind in ("transpose", "symplectic", "exchange"):
        a = from_spec(d)
        return a, wedderburn_simple(a)
    if kind == "ut_star":
        a = from_spec(d)
        _, w = wedderburn_ut(UTSpec(tuple(_component_from_dict(c) for c in d["components"])))
        return a, w
    if kind == "zero":
        a = zero_algebra()
        return a, WedderburnData([], np.zeros((0, 0), dtype=np.int64))
    if kind == "direct_sum":
        parts = [wedderburn_from_spec(p) for p in d["parts"]]
        if not parts:
            return wedderburn_from_spec({"kind": "zero"})
        a, w = parts[0]
        for b, wb in parts[1:]:
            a, w = wedderburn_direct_sum(a, w, b, wb)
        return a, w
    if kind == "tensor_nilpotent":
        a, w = wedderburn_from_spec(d["base"])
        return wedderburn_tensor_nilpotent(a, w, int(d.get("nil_dim", 1)), int(d.get("nil_index", 2)),
                                           d.get("nil_involution", "identity"))
    raise AlgebraError(f"no natural decomposition known for kind {kind!r}")


def star_exponent_structural(a: StarAlgebra, w: WedderburnData, validate: bool = True) -> int:
    """Largest total dimension of an admissible set of simple components.

    Subsets are tried from the largest total dimension down; a running
    product ``S_l1 J S_l2 J ...`` that becomes zero prunes the branch.
    """
    if validate:
        validate_wedderburn(a, w)
    s = len(w.components)
    if s == 0:
        return 0
    best = max(w.dims)

    def admissible(order: list[int]) -> bool:
        def rec(current: np.ndarray, rest: list[int]) -> bool:
            if not rest:
                return True
            through = subspace_product(a, current, w.radical)
            if len(through) == 0:
                return False
            for k in rest:
                nxt = subspace_product(a, through, w.components[k])
                if len(nxt) and rec(nxt, [r for r in rest if r != k]):
                    return True
            return False

        return any(rec(w.components[first], [r for r in order if r != first]) for first in order)

    subsets = [c for r in range(2, s + 1) for c in itertools.combinations(range(s), r)]
    subsets.sort(key=lambda c: -sum(w.dims[i] for i in c))
    for c in subsets:
        total = sum(w.dims[i] for i in c)
        if total <= best:
            break
        if admissible(list(c)):
            best = total
    return best


# -- Capelli thresholds ------------------------------------------------------------

@dataclass
class ThresholdReport:
    spec: UTSpec
    d_plus: int
    d_minus: int
    n: int
    sym_observed: dict[int, bool]
    skew_observed: dict[int, bool]
    grid: dict[tuple[int, int], tuple[bool, bool]]  # (M, L) -> (predicted, observed)

    @property
    def violations(self) -> list[tuple[int, int]]:
        return [cell for cell, (p, o) in self.grid.items() if p != o]

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        lines = [f"UT*{self.spec}: d+={self.d_plus} d-={self.d_minus} n={self.n}",
                 f"  Cap*_M[Y,X] identity iff M >= {self.d_plus + self.n}; "
                 f"Cap*_L[Z,X] identity iff L >= {self.d_minus + self.n}"]
        for M, v in sorted(self.sym_observed.items()):
            lines.append(f"  M={M}: predicted={M >= self.d_plus + self.n} observed={v}")
        for L, v in sorted(self.skew_observed.items()):
            lines.append(f"  L={L}: predicted={L >= self.d_minus + self.n} observed={v}")
        lines.append(f"  grid cells: {len(self.grid)}, violations: {self.violations or 'none'}")
        return "\n".join(lines)


def verify_capelli_thresholds(spec: UTSpec, M_range: Iterable[int] = range(1, 7),
                              L_range: Iterable[int] = range(1, 7),
                              budget: int = ev.DEFAULT_BUDGET) -> ThresholdReport:
    ut = mk_UT_star_full(spec).algebra
    sym = {M: ev.is_star_identity(ut, capelli_star(M, "y"), budget) for M in M_range}
    skew = {L: ev.is_star_identity(ut, capelli_star(L, "z"), budget) for L in L_range}
    n, dp, dm = spec.n, spec.d_plus, spec.d_minus
    grid = {(M, L): ((M >= dp + n and L >= dm + n), sym[M] and skew[L]) for M in sym for L in skew}
    return ThresholdReport(spec, dp, dm, n, sym, skew, grid)


@dataclass
class WitnessPair:
    algebra: str
    M: int
    L: int
    sym: ev.Assignment | None
    skew: ev.Assignment | None
    skew_skipped: bool

    @property
    def ok(self) -> bool:
        return self.sym is not None and (self.skew_skipped or self.skew is not None)


def verify_simple_nonidentity(a: StarAlgebra, budget: int = 10**6) -> WitnessPair:
    """Witnesses that ``a`` violates ``Cap*_{dim A+}[Y,X]`` and ``Cap*_{dim A-}[Z,X]``."""
    if a.simple is None:
        raise AlgebraError(f"{a.name} is not one of the *-simple constructors")
    M, L = a.dim_sym, a.dim_skew
    sym = ev.find_nonvanishing(a, capelli_star(M, "y"), budget)
    skew = ev.find_nonvanishing(a, capelli_star(L, "z"), budget) if L > 0 else None
    return WitnessPair(a.name, M, L, sym, skew, L == 0)


def exponent_identities(limit: int = 6) -> dict[str, bool]:
    """``M + L`` equals the exponent for the three *-simple families."""
    out = {}
    for k in range(1, limit + 1):
        c = Component("transpose", k)
        out[f"transpose k={k}: M+L=k^2"] = c.dim_sym + c.dim_skew == k * k
    for m in range(1, limit + 1):
        c = Component("symplectic", m)
        out[f"symplectic m={m}: M+L=4m^2"] = c.dim_sym + c.dim_skew == 4 * m * m
    for h in range(1, limit + 1):
        c = Component("exchange", h)
        out[f"exchange h={h}: M+L=2h^2"] = c.dim_sym + c.dim_skew == 2 * h * h
    return out


# -- codimension tables -------------------------------------------------------------

@dataclass
class Target:
    label: str
    algebra: StarAlgebra | None = None
    gens: TStarGens | None = None


@dataclass
class CodimTable:
    targets: list[str]
    n_max: int
    values: dict[tuple[str, int], int | None]
    notes: dict[tuple[str, int], str] = field(default_factory=dict)

    def column(self, label: str) -> list[int | None]:
        return [self.values[(label, n)] for n in range(1, self.n_max + 1)]

    def ratio(self, a: str, b: str, n: int) -> Fraction | None:
        x, y = self.values[(a, n)], self.values[(b, n)]
        if x is None or y in (None, 0):
            return None
        return Fraction(x, y)

    def nth_roots(self, label: str) -> list[float | None]:
        # reporting only
        return [None if v is None else v ** (1 / n) for n, v in zip(range(1, self.n_max + 1), self.column(label))]

    def render(self) -> str:
        head = ["n"] + self.targets
        pairs = list(itertools.combinations(self.targets, 2))
        head += [f"{a}/{b}" for a, b in pairs]
        rows = []
        for n in range(1, self.n_max + 1):
            row = [str(n)] + ["refused" if self.values[(t, n)] is None else str(self.values[(t, n)])
                              for t in self.targets]
            for a, b in pairs:
                r = self.ratio(a, b, n)
                row.append("-" if r is None else str(r))
            rows.append(row)
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
        fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths))
        return "\n".join([fmt(head)] + [fmt(r) for r in rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["target", "n", "codim", "note"])
        for t in self.targets:
            for n in range(1, self.n_max + 1):
                v = self.values[(t, n)]
                w.writerow([t, n, "" if v is None else v, self.notes.get((t, n), "")])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> dict[tuple[str, int], int | None]:
        out = {}
        for row in csv.DictReader(io.StringIO(text)):
            out[(row["target"], int(row["n"]))] = int(row["codim"]) if row["codim"] else None
        return out


def codim_table(targets: Sequence[Target], n_max: int, budget: int = ev.DEFAULT_BUDGET,
                primes: Sequence[int] | None = None) -> CodimTable:
    """``c_n^*`` for ``n = 1..n_max``; a cost refusal is recorded per cell."""
    values: dict = {}
    notes: dict = {}
    for t in targets:
        for n in range(1, n_max + 1):
            try:
                if t.algebra is not None:
                    values[(t.label, n)] = ev.codimension(t.algebra, n, budget=budget, primes=primes).total
                else:
                    values[(t.label, n)] = ideal_codimension(t.gens, n, budget=budget, primes=primes)
            except ev.CostGuardExceeded as exc:
                values[(t.label, n)] = None
                notes[(t.label, n)] = str(exc)
    return CodimTable([t.label for t in targets], n_max, values, notes)


# -- direct sums and Capelli combinations ---------------------------------------------

@dataclass
class DirectSumReport:
    a: str
    b: str
    rows: list[tuple[int, int, int, int]]  # (n, c(A), c(B), c(A+B))

    @property
    def ok(self) -> bool:
        return all(max(x, y) <= s <= x + y for _, x, y, s in self.rows)


def verify_direct_sum_bounds(a: StarAlgebra, b: StarAlgebra, n_max: int, **kw) -> DirectSumReport:
    s = direct_sum(a, b)
    rows = []
    for n in range(1, n_max + 1):
        rows.append((n, ev.codimension(a, n, **kw).total, ev.codimension(b, n, **kw).total,
                     ev.codimension(s, n, **kw).total))
    return DirectSumReport(a.name, b.name, rows)


def capelli_fixtures() -> list[StarAlgebra]:
    """Small algebras used to exercise the Capelli combination check."""
    f = mk_transpose(1)
    return [
        f,
        tensor_nilpotent(f, 1, 2),
        tensor_nilpotent(f, 1, 3),
        tensor_nilpotent(f, 2, 2),
        tensor_nilpotent(f, 1, 3, "negate"),
        tensor_nilpotent(f, 2, 3, "negate"),
        direct_sum(f, f),
        mk_exchange(1),
        tensor_nilpotent(mk_exchange(1), 1, 2),
        direct_sum(mk_exchange(1), f),
        mk_UT_star_full(UTSpec.of(("transpose", 1), ("transpose", 1))).algebra,
        mk_transpose(2),
        zero_algebra(),
    ]


@dataclass
class CapelliCheck:
    M: int
    L: int
    checked: list[str]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return bool(self.checked) and not self.failures


def capelli_combination_check(M: int, L: int, n_samples: int | None = None, seed: int = 0,
                              fixtures: Sequence[StarAlgebra] | None = None) -> CapelliCheck:
    """On fixtures satisfying ``Cap*_M[Y,X]`` and ``Cap*_L[Z,X]``, verify that the
    ordinary ``Cap_{M+L}`` vanishes (exhaustively over basis tuples)."""
    pool = list(fixtures) if fixtures is not None else capelli_fixtures()
    if n_samples is not None and n_samples < len(pool):
        pool = random.Random(seed).sample(pool, n_samples)
    ys, zs, full = capelli_star(M, "y"), capelli_star(L, "z"), capelli(M + L)
    checked, failures = [], []
    for a in pool:
        if not (ev.is_star_identity(a, ys) and ev.is_star_identity(a, zs)):
            continue
        checked.append(a.name)
        if not ev.is_star_identity(a, full):
            failures.append(a.name)
    return CapelliCheck(M, L, checked, failures)


def gamma_growth_report(M: int, L: int, n_max: int, **kw) -> list[tuple[int, int, bool]]:
    """``(n, c_n, c_n <= (M+L)^n)`` for ``Gamma*_{M+1,L+1}`` (reported, not a limit)."""
    from .tideal import gamma_gens

    g = gamma_gens(M + 1, L + 1)
    out = []
    for n in range(1, n_max + 1):
        c = ideal_codimension(g, n, **kw)
        out.append((n, c, c <= (M + L) ** n))
    return out
