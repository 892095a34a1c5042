"""Multilinear polynomials in symmetric, skew and general variables.

A polynomial of degree ``n`` lives over an ordered tuple of ``n`` typed
variables; each monomial is a permutation of the variable indices, so the
polynomial is a vector in an ``n!``-dimensional space.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence


class VarKind(Enum):
    SYMMETRIC = "y"
    SKEW = "z"
    GENERAL = "x"

    @classmethod
    def parse(cls, s) -> "VarKind":
        if isinstance(s, VarKind):
            return s
        aliases = {"y": cls.SYMMETRIC, "symmetric": cls.SYMMETRIC, "sym": cls.SYMMETRIC, "+": cls.SYMMETRIC,
                   "z": cls.SKEW, "skew": cls.SKEW, "-": cls.SKEW,
                   "x": cls.GENERAL, "general": cls.GENERAL}
        try:
            return aliases[str(s).lower()]
        except KeyError:
            raise ValueError(f"unknown variable kind {s!r}") from None


SYM, SKEW, GEN = VarKind.SYMMETRIC, VarKind.SKEW, VarKind.GENERAL


def kind_of_name(name: str) -> VarKind:
    if name.startswith("y"):
        return SYM
    if name.startswith("z"):
        return SKEW
    return GEN


@dataclass(frozen=True, order=True)
class Var:
    name: str
    kind: VarKind

    def __str__(self) -> str:
        return self.name


def var(name: str, kind: VarKind | None = None) -> Var:
    return Var(name, kind if kind is not None else kind_of_name(name))


def perm_sign(p: Sequence[int]) -> int:
    """Sign of a permutation given in one-line notation over ``0..n-1``."""
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class MLPoly:
    """Multilinear polynomial: ``terms`` maps a monomial (tuple of variable
    indices in product order) to a nonzero exact coefficient."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[Var], terms: Mapping[tuple[int, ...], object] | None = None):
        self.vars = tuple(vars)
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        n = len(self.vars)
        clean: dict[tuple[int, ...], object] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n or sorted(mono) != list(range(n)):
                raise ValueError(f"monomial {mono} is not multilinear over {n} variables")
            if isinstance(c, float):
                raise TypeError("floating point coefficients are not allowed")
            c = _norm(clean.get(mono, 0) + c)
            if c == 0:
                clean.pop(mono, None)
            else:
                clean[mono] = c
        self.terms = clean

    # -- basic structure -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.vars)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def kind_of(self, name: str) -> VarKind:
        for v in self.vars:
            if v.name == name:
                return v.kind
        raise KeyError(name)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> dict[tuple[str, ...], object]:
        """Name-keyed view; independent of the variable order."""
        return {tuple(self.vars[i].name for i in mono): c for mono, c in self.terms.items()}

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        return iter(sorted(self.terms.items()))

    # -- arithmetic ------------------------------------------------------
    def _aligned(self, other: "MLPoly") -> dict[tuple[int, ...], object]:
        if set(self.vars) != set(other.vars):
            if self.is_zero() and not self.vars:
                return {}
            raise ValueError("polynomials are over different variable sets")
        pos = {v: i for i, v in enumerate(self.vars)}
        remap = [pos[v] for v in other.vars]
        return {tuple(remap[i] for i in mono): c for mono, c in other.terms.items()}

    def __add__(self, other: "MLPoly") -> "MLPoly":
        if other.is_zero() and not other.vars:
            return self
        if self.is_zero() and not self.vars:
            return other
        terms = dict(self.terms)
        for mono, c in self._aligned(other).items():
            terms[mono] = terms.get(mono, 0) + c
        return MLPoly(self.vars, terms)

    def __neg__(self) -> "MLPoly":
        return MLPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MLPoly") -> "MLPoly":
        return self + (-other)

    def scale(self, c) -> "MLPoly":
        return MLPoly(self.vars, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c) -> "MLPoly":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other) -> "MLPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MLPoly):
            return NotImplemented
        clash = set(self.names) & set(other.names)
        if clash:
            raise ValueError(f"product is not multilinear, shared variables {sorted(clash)}")
        shift = self.degree
        terms: dict[tuple[int, ...], object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 + tuple(i + shift for i in m2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return MLPoly(self.vars + other.vars, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MLPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return set(self.vars) == set(other.vars) and self.monomials() == other.monomials()

    def __hash__(self) -> int:
        return hash(frozenset(self.monomials().items()))

    # -- variable handling ----------------------------------------------
    def reorder(self, vars: Sequence[Var]) -> "MLPoly":
        """Same polynomial expressed over a permuted variable tuple."""
        vars = tuple(vars)
        if set(vars) != set(self.vars):
            raise ValueError("reorder needs the same variable set")
        pos = {v: i for i, v in enumerate(vars)}
        remap = [pos[v] for v in self.vars]
        return MLPoly(vars, {tuple(remap[i] for i in m): c for m, c in self.terms.items()})

    def canonical(self) -> "MLPoly":
        return self.reorder(sorted(self.vars, key=_var_sort_key))

    def rename(self, mapping: Mapping[str, str]) -> "MLPoly":
        vars = [Var(mapping.get(v.name, v.name), v.kind) for v in self.vars]
        return MLPoly(vars, self.terms)

    def coefficient(self, word: Sequence[str]):
        return self.monomials().get(tuple(word), 0)

    # -- printing --------------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"MLPoly({render(self)!r})"


def _var_sort_key(v: Var):
    order = {SYM: 0, SKEW: 1, GEN: 2}
    m = re.match(r"([A-Za-z_]+)(\d*)$", v.name)
    if m:
        return (order[v.kind], m.group(1), int(m.group(2) or 0))
    return (order[v.kind], v.name, 0)


def monomial(*names: str, kinds: Mapping[str, VarKind] | None = None) -> MLPoly:
    kinds = kinds or {}
    vs = [Var(n, kinds.get(n, kind_of_name(n))) for n in names]
    return MLPoly(vs, {tuple(range(len(vs))): 1})


# -- rendering and parsing ----------------------------------------------

def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def render(f: MLPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for mono, c in sorted(f.terms.items()):
        word = "*".join(f.vars[i].name for i in mono)
        mag = abs(c)
        body = word if mag == 1 else f"{_coeff_str(mag)}*{word}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|([+\-*]))")


def parse_poly(text: str, kinds: Mapping[str, VarKind] | None = None) -> MLPoly:
    """Parse ``"y1*x1*y2 - y2*x1*y1"``-style text into an :class:`MLPoly`.

    Variable kinds follow the name prefix (``y`` symmetric, ``z`` skew,
    anything else general) unless ``kinds`` overrides them.
    """
    kinds = kinds or {}
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        tokens.append(("num", num) if num else ("name", name) if name else ("op", op))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial")

    words: list[tuple[object, list[str]]] = []
    i, sign = 0, 1
    expect_term = True
    coeff: Fraction = Fraction(1)
    word: list[str] = []
    while i < len(tokens):
        kind, val = tokens[i]
        if expect_term:
            if kind == "op" and val in "+-":
                sign = -sign if val == "-" else sign
                i += 1
                continue
            coeff, word = Fraction(1), []
            if kind == "num":
                coeff = Fraction(val)
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "*"):
                    i += 1
            while i < len(tokens) and tokens[i][0] == "name":
                word.append(tokens[i][1])
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "*"):
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "name":
                        raise ParseError("dangling '*'")
            if not word and coeff != 0:
                raise ParseError("constant terms are not multilinear")
            words.append((sign * coeff, word))
            sign, expect_term = 1, False
        else:
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected '+' or '-', got {val!r}")
            expect_term = True
    if expect_term:
        raise ParseError("trailing operator")

    words = [(c, w) for c, w in words if w]
    if not words:
        raise ParseError("zero polynomial has no variables")
    names = list(dict.fromkeys(words[0][1]))
    for c, w in words:
        if len(set(w)) != len(w):
            raise ParseError(f"monomial {'*'.join(w)} repeats a variable")
        if set(w) != set(names):
            raise ParseError("monomials use different variable sets")
    vs = [Var(n, kinds.get(n, kind_of_name(n))) for n in sorted(names, key=lambda n: _var_sort_key(var(n)))]
    index = {v.name: i for i, v in enumerate(vs)}
    terms: dict[tuple[int, ...], object] = {}
    for c, w in words:
        key = tuple(index[n] for n in w)
        terms[key] = terms.get(key, 0) + c
    return MLPoly(vs, terms)


# -- Capelli polynomials --------------------------------------------------

def _capelli_from(alt: Sequence[Var], weave: Sequence[Var], keep: Sequence[bool]) -> MLPoly:
    m = len(alt)
    kept = [w for w, k in zip(weave, keep) if k]
    vars = tuple(alt) + tuple(kept)
    weave_idx = []
    j = m
    for k in keep:
        weave_idx.append(j if k else None)
        if k:
            j += 1
    terms = {}
    for sigma in itertools.permutations(range(m)):
        mono = [sigma[0]]
        for t in range(1, m):
            if weave_idx[t - 1] is not None:
                mono.append(weave_idx[t - 1])
            mono.append(sigma[t])
        terms[tuple(mono)] = perm_sign(sigma)
    return MLPoly(vars, terms)


def capelli(m: int, weave: Sequence[str] | None = None, alt: Sequence[str] | None = None,
            alt_kind: VarKind = GEN) -> MLPoly:
    """``sum_sigma sgn(sigma) t_s(1) x_1 t_s(2) ... x_{m-1} t_s(m)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    alt = list(alt) if alt is not None else [f"t{i}" for i in range(1, m + 1)]
    weave = list(weave) if weave is not None else [f"x{i}" for i in range(1, m)]
    if len(alt) != m or len(weave) != m - 1:
        raise ValueError("need m alternating names and m-1 weave names")
    if len(set(alt) | set(weave)) != 2 * m - 1:
        raise ValueError("variable names must be distinct")
    return _capelli_from([Var(a, alt_kind) for a in alt], [Var(w, GEN) for w in weave],
                         [True] * (m - 1))


def _alt_names(m: int, kind: VarKind) -> list[str]:
    if kind is GEN:
        raise ValueError("star-Capelli polynomials alternate symmetric or skew variables")
    return [f"{kind.value}{i}" for i in range(1, m + 1)]


def capelli_star(m: int, kind) -> MLPoly:
    kind = VarKind.parse(kind)
    return capelli(m, alt=_alt_names(m, kind), alt_kind=kind)


def capelli_deleted_set(m: int, kind) -> list[MLPoly]:
    """All ``2**(m-1)`` polynomials obtained by setting subsets of the
    ``x`` variables to 1, ordered by number of deleted variables."""
    kind = VarKind.parse(kind)
    if m < 1:
        raise ValueError("m must be at least 1")
    alt = [Var(n, kind) for n in _alt_names(m, kind)]
    weave = [Var(f"x{i}", GEN) for i in range(1, m)]
    out = []
    for r in range(m):
        for deleted in itertools.combinations(range(m - 1), r):
            keep = [i not in deleted for i in range(m - 1)]
            out.append(_capelli_from(alt, weave, keep))
    return out


def capelli_generators(M1: int, L1: int) -> list[MLPoly]:
    """Generators ``Cap^+_{M1} u Cap^-_{L1}`` of the ideal Gamma*_{M1,L1}."""
    return capelli_deleted_set(M1, SYM) + capelli_deleted_set(L1, SKEW)


# -- involution, alternation, substitution -------------------------------

def star(f: MLPoly) -> MLPoly:
    """Free-algebra involution: reverse each monomial, sign ``(-1)^#skew``."""
    if any(v.kind is GEN for v in f.vars):
        raise ValueError("star of a general variable is not a variable of this algebra")
    sign = -1 if sum(v.kind is SKEW for v in f.vars) % 2 else 1
    return MLPoly(f.vars, {m[::-1]: sign * c for m, c in f.terms.items()})


def star_parity(f: MLPoly) -> int | None:
    """+1 if ``f`` is symmetric, -1 if skew, ``None`` otherwise (0 is both; +1)."""
    if f.is_zero():
        return 1
    if any(v.kind is GEN for v in f.vars):
        return None
    s = star(f)
    if s == f:
        return 1
    if s == -f:
        return -1
    return None


def alternate(f: MLPoly, slots: Sequence[str]) -> MLPoly:
    """``sum_pi sgn(pi) f(...)`` with the slot variables permuted among themselves."""
    idx = [f.index_of(s) for s in slots]
    if len({f.vars[i].kind for i in idx}) > 1:
        raise ValueError("alternated slots must share one variable kind")
    result = MLPoly(f.vars, {})
    for pi in itertools.permutations(range(len(idx))):
        relabel = list(range(f.degree))
        for a, b in zip(idx, pi):
            relabel[a] = idx[b]
        terms = {tuple(relabel[i] for i in m): perm_sign(pi) * c for m, c in f.terms.items()}
        result = result + MLPoly(f.vars, terms)
    return result


def substitute(f: MLPoly, assignment: Mapping[str, MLPoly], left: MLPoly | None = None,
               right: MLPoly | None = None) -> MLPoly:
    """Expand ``left * f(p_1, ..., p_d) * right``.

    Unassigned variables stay as themselves.  Symmetric slots require
    ``star(p) == p``, skew slots ``star(p) == -p``.
    """
    images: list[MLPoly] = []
    for v in f.vars:
        p = assignment.get(v.name)
        if p is None:
            p = MLPoly([v], {(0,): 1})
        elif v.kind is not GEN:
            want = 1 if v.kind is SYM else -1
            if star_parity(p) not in (want,) and not p.is_zero():
                raise ValueError(f"slot {v.name} needs a {'symmetric' if want == 1 else 'skew'} polynomial")
        images.append(p)
    unknown = set(assignment) - set(f.names)
    if unknown:
        raise KeyError(f"assignment names unknown variables {sorted(unknown)}")
    pieces = ([left] if left is not None else []) + images + ([right] if right is not None else [])
    seen: set[str] = set()
    for p in pieces:
        clash = seen & set(p.names)
        if clash:
            raise ValueError(f"variable collision on {sorted(clash)}")
        seen |= set(p.names)

    offsets, vars_out = [], []
    for p in images:
        offsets.append(len(vars_out))
        vars_out.extend(p.vars)
    terms: dict[tuple[int, ...], object] = {}
    image_terms = [list(p.terms.items()) for p in images]
    for mono, c in f.terms.items():
        for combo in itertools.product(*(image_terms[i] for i in mono)):
            key: list[int] = []
            coeff = c
            for slot, (m, cm) in zip(mono, combo):
                key.extend(offsets[slot] + j for j in m)
                coeff = coeff * cm
            k = tuple(key)
            terms[k] = terms.get(k, 0) + coeff
    out = MLPoly(vars_out, terms)
    if left is not None:
        out = left * out
    if right is not None:
        out = out * right
    return out


class FreshNames:
    """Monotone counter handing out unused variable names per kind."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)
        self.counter = 0

    def __call__(self, kind: VarKind) -> Var:
        while True:
            self.counter += 1
            name = f"{kind.value}{self.counter}"
            if name not in self.taken:
                self.taken.add(name)
                return Var(name, kind)


# -- the spaces P_n* --------------------------------------------------------

def type_vectors(n: int) -> list[tuple[VarKind, ...]]:
    """All symmetric/skew kind assignments of ``n`` variables, symmetric first."""
    return list(itertools.product((SYM, SKEW), repeat=n))


def block_vars(eps: Sequence[VarKind]) -> tuple[Var, ...]:
    """Canonical variables ``w_1..w_n`` of the block ``P_eps``: ``y_i`` or ``z_i``."""
    return tuple(Var(f"{k.value}{i + 1}", k) for i, k in enumerate(eps))


def block_monomials(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def pn_star_dim(n: int) -> int:
    return 2**n * factorial(n)


def block_vector(f: MLPoly, eps: Sequence[VarKind]) -> list:
    """Coordinates of ``f`` in the block ``P_eps`` (monomials in lexicographic order)."""
    vs = block_vars(eps)
    g = f.reorder(vs)
    index = {m: i for i, m in enumerate(block_monomials(len(vs)))}
    vec = [0] * len(index)
    for m, c in g.terms.items():
        vec[index[m]] = c
    return vec


def type_vector_of(f: MLPoly) -> tuple[VarKind, ...]:
    """Type vector of a polynomial already written in canonical block variables."""
    by_index = sorted(f.vars, key=lambda v: int(v.name[1:]))
    return tuple(v.kind for v in by_index)
