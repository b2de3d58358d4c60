"""Even-graded commutative presentations over Q and their Hilbert functions.

Polynomials are sparse dictionaries keyed by monomials, a monomial being a
name-sorted tuple of ``(symbol, exponent)`` pairs.  The text grammar is

    poly   := ["-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := atom ["^" int]
    atom   := int ["/" int] | symbol | "(" poly ")"

Degrees in the public API are cohomological (even); internally the
algebraic degree (half of it) is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import InhomogeneousError

Monomial = tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    """Polynomial with rational coefficients in named commuting symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> Poly:
        return cls({((name, power),) if power else (): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> Poly:
        return cls({tuple(sorted((s, e) for s, e in exps.items() if e)): Fraction(coeff)})

    @classmethod
    def lift(cls, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, str):
            return parse_poly(x)
        return cls.const(x)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str)):
            other = Poly.lift(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = Poly.lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.lift(other))

    def __rsub__(self, other):
        return Poly.lift(other) - self

    def __mul__(self, other):
        other = Poly.lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m}

    def degrees(self, weights: Mapping[str, int]) -> set[int]:
        return {sum(weights[s] * e for s, e in m) for m in self.terms}

    def subs(self, values: Mapping[str, Poly]) -> Poly:
        out = Poly()
        for m, c in self.terms.items():
            t = Poly.const(c)
            for s, e in m:
                t = t * (Poly.lift(values[s]) ** e if s in values else Poly.var(s, e))
            out = out + t
        return out

    def sort_key(self, order: Sequence[str], weights: Mapping[str, int] | None = None):
        pos = {s: i for i, s in enumerate(order)}

        def key(m):
            v = [0] * len(order)
            for s, e in m:
                v[pos[s]] = e
            deg = sum(weights.get(s, 1) * e for s, e in m) if weights else sum(v)
            return (-deg, [-x for x in v])
        return key

    def to_string(self, order: Sequence[str] | None = None,
                  weights: Mapping[str, int] | None = None) -> str:
        if not self.terms:
            return "0"
        order = list(order) if order is not None else sorted(self.symbols())
        extra = sorted(self.symbols() - set(order))
        order = order + extra
        parts = []
        for m in sorted(self.terms, key=self.sort_key(order, weights)):
            c = self.terms[m]
            pos = {s: i for i, s in enumerate(order)}
            factors = [s if e == 1 else f"{s}^{e}" for s, e in sorted(m, key=lambda t: pos[t[0]])]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self.to_string()!r})"

    def __str__(self):
        return self.to_string()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokens(text: str):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("sym", name))
        elif op in "+-*^()/":
            out.append(("op", op))
        elif op.strip():
            raise ValueError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return out


def parse_poly(text: str) -> Poly:
    """Parse the ASCII grammar in the module docstring."""
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take(kind=None, val=None):
        nonlocal i
        t = peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise ValueError(f"parse error near token {i} in {text!r}")
        i += 1
        return t

    def poly():
        neg = False
        if peek() == ("op", "-"):
            take()
            neg = True
        out = term()
        if neg:
            out = -out
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            out = out + t if op == "+" else out - t
        return out

    def term():
        out = factor()
        while peek() == ("op", "*"):
            take()
            out = out * factor()
        return out

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            base = base ** take("num")[1]
        return base

    def atom():
        kind, val = peek()
        if kind == "num":
            take()
            if peek() == ("op", "/"):
                take()
                den = take("num")[1]
                if den == 0:
                    raise ValueError("zero denominator")
                return Poly.const(Fraction(val, den))
            return Poly.const(val)
        if kind == "sym":
            take()
            return Poly.var(val)
        if (kind, val) == ("op", "("):
            take()
            out = poly()
            take("op", ")")
            return out
        if (kind, val) == ("op", "-"):
            take()
            return -atom()
        raise ValueError(f"parse error near token {i} in {text!r}")

    if not toks:
        raise ValueError("empty polynomial")
    result = poly()
    if i != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return result


def _check_degree(name: str, deg: int, what: str):
    if deg <= 0 or deg % 2:
        raise ValueError(f"{what} {name!r} must have even positive degree, got {deg}")


@dataclass(frozen=True)
class HilbertFunction:
    dims: dict  # cohomological degree -> dimension
    cutoff: int

    def __getitem__(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def as_list(self) -> list[int]:
        """Dimensions in degrees ``0, 2, 4, ...`` up to the cutoff."""
        return [self.dims.get(d, 0) for d in range(0, self.cutoff + 1, 2)]

    def trimmed(self) -> list[int]:
        out = self.as_list()
        while out and out[-1] == 0:
            out.pop()
        return out

    def total(self) -> int:
        return sum(self.dims.values())


@dataclass(frozen=True)
class _DegreeData:
    monomials: list  # exponent tuples over all generators, in grlex-descending order
    index: dict
    pivots: dict  # column -> row dict (leading column == key)


@dataclass(frozen=True, eq=False)
class GradedPresentation:
    """``Q[variables, base_symbols] / (relations + base monomials above truncation)``.

    ``integral`` records that the presentation is also valid over Z (the
    class group was torsion-free); it is informational only.
    """

    variables: tuple
    base_symbols: tuple = ()
    truncation_degree: int = 0
    relations: tuple = ()
    integral: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple((str(n), int(d)) for n, d in self.variables))
        object.__setattr__(self, "base_symbols",
                           tuple((str(n), int(d)) for n, d in self.base_symbols))
        object.__setattr__(self, "relations", tuple(Poly.lift(r) for r in self.relations))
        names = [n for n, _ in self.variables + self.base_symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for n, d in self.variables:
            _check_degree(n, d, "variable")
        for n, d in self.base_symbols:
            _check_degree(n, d, "base symbol")
        if self.truncation_degree < 0 or self.truncation_degree % 2:
            raise ValueError("truncation degree must be even and nonnegative")
        known = set(names)
        for r in self.relations:
            unknown = r.symbols() - known
            if unknown:
                raise ValueError(f"relation {r} uses unknown symbols {sorted(unknown)}")
            self.half_degree(r)

    @property
    def generator_names(self) -> list[str]:
        return [n for n, _ in self.variables + self.base_symbols]

    @cached_property
    def weights(self) -> dict:
        return {n: d // 2 for n, d in self.variables + self.base_symbols}

    @cached_property
    def _base_names(self) -> frozenset:
        return frozenset(n for n, _ in self.base_symbols)

    def half_degree(self, q: Poly) -> int | None:
        """Algebraic degree of a homogeneous polynomial (None for zero)."""
        degs = q.degrees(self.weights)
        if len(degs) > 1:
            raise InhomogeneousError(f"{q} is not homogeneous (degrees {sorted(2 * d for d in degs)})")
        return next(iter(degs)) if degs else None

    def truncate(self, q: Poly) -> Poly:
        t = self.truncation_degree // 2
        w = self.weights
        base = self._base_names
        return Poly({m: c for m, c in q.terms.items()
                     if sum(w[s] * e for s, e in m if s in base) <= t})

    def with_relations(self, extra: Iterable) -> GradedPresentation:
        return GradedPresentation(self.variables, self.base_symbols, self.truncation_degree,
                                  self.relations + tuple(Poly.lift(r) for r in extra),
                                  self.integral)

    def relation_strings(self) -> list[str]:
        return [r.to_string(self.generator_names, self.weights) for r in self.relations]

    def to_json(self) -> dict:
        return {
            "variables": [[n, d] for n, d in self.variables],
            "base_symbols": [[n, d] for n, d in self.base_symbols],
            "truncation": self.truncation_degree,
            "relations": self.relation_strings(),
            "integral": self.integral,
        }

    # degreewise linear algebra

    def _monomials(self, k: int) -> list[tuple[int, ...]]:
        gens = self.generator_names
        w = [self.weights[g] for g in gens]
        nb = len(self.variables)
        t = self.truncation_degree // 2
        out = []

        def rec(i, remaining, acc, base_deg):
            if i == len(gens):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            top = remaining // w[i]
            for e in range(top, -1, -1):
                bd = base_deg + (e * w[i] if i >= nb else 0)
                if bd > t:
                    continue
                acc.append(e)
                rec(i + 1, remaining - e * w[i], acc, bd)
                acc.pop()

        rec(0, k, [], 0)
        out.sort(key=lambda v: [-x for x in v])
        return out

    def _to_row(self, q: Poly, index: dict) -> dict:
        gens = self.generator_names
        pos = {g: i for i, g in enumerate(gens)}
        row = {}
        for m, c in self.truncate(q).terms.items():
            v = [0] * len(gens)
            for s, e in m:
                v[pos[s]] = e
            row[index[tuple(v)]] = c
        return row

    @staticmethod
    def _reduce(row: dict, pivots: dict) -> dict:
        row = dict(row)
        while True:
            cols = [c for c in row if c in pivots]
            if not cols:
                return row
            c = min(cols)
            f = row[c]
            for j, v in pivots[c].items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)

    @cached_property
    def _cache(self) -> dict:
        return {}

    def _degree_data(self, k: int) -> _DegreeData:
        cache = self._cache
        if k in cache:
            return cache[k]
        mons = self._monomials(k)
        index = {m: i for i, m in enumerate(mons)}
        gens = self.generator_names
        pivots: dict = {}
        for r in self.relations:
            e = self.half_degree(r)
            if e is None or e > k:
                continue
            for mu in self._monomials(k - e):
                prod = r * Poly.monomial(dict(zip(gens, mu)))
                row = self._reduce(self._to_row(prod, index), pivots)
                if row:
                    c = min(row)
                    inv = 1 / row[c]
                    pivots[c] = {j: v * inv for j, v in row.items()}
        data = _DegreeData(mons, index, pivots)
        cache[k] = data
        return data

    def dimension(self, degree: int) -> int:
        if degree % 2:
            return 0
        data = self._degree_data(degree // 2)
        return len(data.monomials) - len(data.pivots)

    def normal_form(self, q) -> Poly:
        q = Poly.lift(q)
        k = self.half_degree(q)
        if k is None:
            return Poly()
        data = self._degree_data(k)
        row = self._reduce(self._to_row(q, data.index), data.pivots)
        gens = self.generator_names
        return Poly({tuple((g, e) for g, e in zip(gens, data.monomials[c]) if e): v
                     for c, v in row.items()})

    def standard_monomials(self, degree: int) -> list[Poly]:
        """Basis of the quotient in ``degree``: monomials that are not pivots."""
        data = self._degree_data(degree // 2)
        gens = self.generator_names
        return [Poly.monomial(dict(zip(gens, m))) for c, m in enumerate(data.monomials)
                if c not in data.pivots]


def hilbert_function(p: GradedPresentation, cutoff: int) -> HilbertFunction:
    """Quotient dimension in every even degree ``<= cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return HilbertFunction({d: p.dimension(d) for d in range(0, cutoff + 1, 2)}, cutoff)


def ideal_reduce(p: GradedPresentation, q) -> Poly:
    """Normal form of a homogeneous ``q``: zero iff ``q`` is in the ideal."""
    return p.normal_form(q)


def convolve(a: Sequence[int], b: Sequence[int], length: int | None = None) -> list[int]:
    n = length if length is not None else len(a) + len(b) - 1
    out = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] += x * y
    return out
