"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from monomials to nonzero ``Fraction`` coefficients.
A monomial is a sorted tuple of ``(VarId, exponent)`` pairs with positive
exponents; the empty tuple is the constant monomial.  Values are immutable.

Variables live in three namespaces, ordered undirected < directed < auxiliary:

* ``x{i,j}`` undirected edge variables, stored with ``i < j``;
* ``xd{i,j}`` directed edge variables, order kept;
* bare identifiers for auxiliary variables (``y``, ``w``, ...).
"""

from __future__ import annotations

import json
import random
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

UNDIRECTED, DIRECTED, AUXILIARY = 0, 1, 2

_AUX_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolynomialError(ValueError):
    pass


class MissingAssignment(PolynomialError):
    def __init__(self, var):
        super().__init__(f"no value assigned to variable {var}")
        self.var = var


class VarId(NamedTuple):
    ns: int
    i: int
    j: int
    name: str

    def __str__(self):
        if self.ns == UNDIRECTED:
            return f"x{{{self.i},{self.j}}}"
        if self.ns == DIRECTED:
            return f"xd{{{self.i},{self.j}}}"
        return self.name

    def __repr__(self):
        return f"VarId({self})"


def ue(i: int, j: int) -> VarId:
    """Undirected edge variable x{i,j}."""
    if i == j or min(i, j) < 1:
        raise PolynomialError(f"bad undirected edge ({i},{j})")
    return VarId(UNDIRECTED, min(i, j), max(i, j), "")


def de(i: int, j: int) -> VarId:
    """Directed edge variable xd{i,j}."""
    if i == j or min(i, j) < 1:
        raise PolynomialError(f"bad directed edge ({i},{j})")
    return VarId(DIRECTED, i, j, "")


def aux(name: str) -> VarId:
    if not _AUX_NAME.match(name) or re.match(r"xd?\{", name):
        raise PolynomialError(f"bad auxiliary variable name {name!r}")
    return VarId(AUXILIARY, 0, 0, name)


_VAR_TOKEN = re.compile(r"(xd?)\{(\d+),(\d+)\}\Z")


def parse_var(text: str) -> VarId:
    m = _VAR_TOKEN.match(text)
    if m:
        i, j = int(m.group(2)), int(m.group(3))
        return ue(i, j) if m.group(1) == "x" else de(i, j)
    return aux(text)


Monomial = tuple
Scalar = Union[int, Fraction]
Value = Union[int, Fraction, VarId, "SparsePolynomial"]

ONE_MONOMIAL: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial, vars: frozenset | None = None) -> int:
    if vars is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if v in vars)


def make_monomial(powers: Mapping[VarId, int] | Iterable[VarId]) -> Monomial:
    if isinstance(powers, Mapping):
        items = [(v, int(e)) for v, e in powers.items() if e]
    else:
        d: dict[VarId, int] = {}
        for v in powers:
            d[v] = d.get(v, 0) + 1
        items = list(d.items())
    if any(e < 0 for _, e in items):
        raise PolynomialError("negative exponent")
    return tuple(sorted(items))


def _canon_key(item):
    mono = item[0]
    return (mono_degree(mono), mono)


class SparsePolynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                mono = tuple(sorted((v, e) for v, e in mono if e))
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "SparsePolynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "SparsePolynomial":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: VarId) -> "SparsePolynomial":
        return cls._raw({((v, 1),): Fraction(1)})

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial], coeff: Scalar = 1) -> "SparsePolynomial":
        terms: dict[Monomial, Fraction] = {}
        c = Fraction(coeff)
        for m in monomials:
            terms[m] = terms.get(m, Fraction(0)) + c
        return cls._raw({m: v for m, v in terms.items() if v})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order: total degree, then monomial."""
        return sorted(self._terms.items(), key=_canon_key)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, vars: Iterable[VarId] | None = None) -> int:
        vs = None if vars is None else frozenset(vars)
        return max((mono_degree(m, vs) for m in self._terms), default=0)

    def is_multilinear(self) -> bool:
        return all(e == 1 for m in self._terms for _, e in m)

    # ring operations

    def _coerce(self, other) -> "SparsePolynomial | None":
        if isinstance(other, SparsePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePolynomial.constant(other)
        if isinstance(other, VarId):
            return SparsePolynomial.var(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SparsePolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return SparsePolynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("exponent must be a nonnegative integer")
        result = SparsePolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> "SparsePolynomial":
        c = Fraction(c)
        if not c:
            return SparsePolynomial()
        return SparsePolynomial._raw({m: v * c for m, v in self._terms.items()})

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # algebraic transformations

    def substitute(self, sigma: Mapping[VarId, Value]) -> "SparsePolynomial":
        """Simultaneous substitution; unmapped variables are left alone."""
        if not sigma:
            return self
        simple = all(isinstance(t, (int, Fraction, VarId)) for t in sigma.values())
        if not simple:
            return self._substitute_general(sigma)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            coeff = c
            powers: dict[VarId, int] = {}
            for v, e in mono:
                t = sigma.get(v, v)
                if isinstance(t, VarId):
                    powers[t] = powers.get(t, 0) + e
                else:
                    if t == 0:
                        coeff = 0
                        break
                    if t != 1:
                        coeff = coeff * Fraction(t) ** e
            if not coeff:
                continue
            m = tuple(sorted(powers.items()))
            s = out.get(m, 0) + coeff
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SparsePolynomial._raw(out)

    def _substitute_general(self, sigma):
        images = {v: self._coerce(t) for v, t in sigma.items()}
        result = SparsePolynomial()
        for mono, c in self._terms.items():
            term = SparsePolynomial.constant(c)
            for v, e in mono:
                img = images.get(v)
                term = term * (img ** e if img is not None else SparsePolynomial.var(v) ** e)
            result = result + term
        return result

    def homogeneous_component(self, k: int, vars: Iterable[VarId] | None = None) -> "SparsePolynomial":
        """Terms whose degree in ``vars`` (all variables if None) equals ``k``."""
        if k < 0:
            raise PolynomialError("degree must be nonnegative")
        vs = None if vars is None else frozenset(vars)
        return SparsePolynomial._raw({m: c for m, c in self._terms.items() if mono_degree(m, vs) == k})

    def evaluate(self, point: Mapping[VarId, Scalar]) -> Fraction:
        total = 0
        for mono, c in self._terms.items():
            # integer coefficients keep the inner loop in int arithmetic
            t = c.numerator if c.denominator == 1 else c
            for v, e in mono:
                try:
                    x = point[v]
                except KeyError:
                    raise MissingAssignment(v) from None
                if not x:
                    t = 0
                    break
                t = t * (x if e == 1 else x**e)
            total += t
        return Fraction(total)

    # text and JSON forms

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"SparsePolynomial({format_polynomial(self)!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coef": _fmt_rational(c), "powers": [[str(v), e] for v, e in m]}
                for m, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, data) -> "SparsePolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            terms = {}
            for t in data["terms"]:
                mono = make_monomial({parse_var(v): int(e) for v, e in t["powers"]})
                terms[mono] = terms.get(mono, 0) + Fraction(t["coef"])
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialError(f"malformed polynomial JSON: {exc}") from exc
        return cls(terms)

    @classmethod
    def parse(cls, text: str) -> "SparsePolynomial":
        return parse_polynomial(text)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: SparsePolynomial) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (mono, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in mono]
        if not factors:
            body = _fmt_rational(a)
        elif a == 1:
            body = " * ".join(factors)
        else:
            body = " * ".join([_fmt_rational(a)] + factors)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_NUMBER = re.compile(r"\d+(/\d+)?\Z")
_FACTOR = re.compile(r"(xd?\{\d+,\d+\}|[A-Za-z_][A-Za-z0-9_]*)(\^(\d+))?\Z")


def parse_polynomial(text: str) -> SparsePolynomial:
    s = "".join(text.split())
    if not s:
        raise PolynomialError("empty polynomial text")
    if s == "0":
        return SparsePolynomial()
    # split on term signs; '{' '}' never contain signs, exponents are unsigned
    pieces = re.split(r"([+-])", s)
    terms: dict[Monomial, Fraction] = {}
    sign = 1
    for piece in pieces:
        if piece in ("+", "-"):
            sign *= -1 if piece == "-" else 1
            continue
        if not piece:
            continue
        coeff = Fraction(sign)
        powers: dict[VarId, int] = {}
        for k, factor in enumerate(piece.split("*")):
            if k == 0 and _NUMBER.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise PolynomialError(f"cannot parse factor {factor!r}")
            v = parse_var(m.group(1))
            powers[v] = powers.get(v, 0) + int(m.group(3) or 1)
        mono = make_monomial(powers)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
        sign = 1
    return SparsePolynomial(terms)


# functional aliases


def add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p + q


def multiply(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p * q


def scalar_multiply(c: Scalar, p: SparsePolynomial) -> SparsePolynomial:
    return p.scale(c)


def substitute(p: SparsePolynomial, sigma: Mapping[VarId, Value]) -> SparsePolynomial:
    return p.substitute(sigma)


def homogeneous_component(p: SparsePolynomial, k: int, vars=None) -> SparsePolynomial:
    return p.homogeneous_component(k, vars)


def evaluate(p: SparsePolynomial, point: Mapping[VarId, Scalar]) -> Fraction:
    return p.evaluate(point)


def equals_exact(p: SparsePolynomial, q: SparsePolynomial) -> bool:
    return p == q


def random_point(variables: Iterable[VarId], rng: random.Random, bound: int = 2**31) -> dict[VarId, int]:
    return {v: rng.randrange(bound) for v in sorted(variables)}


def equals_probabilistic(p: SparsePolynomial, q: SparsePolynomial, trials: int = 20, seed: int = 0) -> bool:
    """Agreement at ``trials`` seeded integer points drawn uniformly from [0, 2**31)."""
    rng = random.Random(seed)
    variables = p.variables() | q.variables()
    for _ in range(trials):
        pt = random_point(variables, rng)
        if p.evaluate(pt) != q.evaluate(pt):
            return False
    return True


def difference_witness(p: SparsePolynomial, q: SparsePolynomial):
    """First monomial (canonical order) whose coefficients differ, or None."""
    diff = p - q
    if diff.is_zero():
        return None
    mono, _ = diff.sorted_terms()[0]
    return mono, p.coefficient(mono), q.coefficient(mono)


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    return " * ".join(str(v) if e == 1 else f"{v}^{e}" for v, e in mono)


# multilinear 0/1 view

MonomialSet = frozenset


def monomial_set(p: SparsePolynomial) -> MonomialSet:
    """The set of variable subsets of a multilinear polynomial with 0/1 coefficients."""
    out = set()
    for mono, c in p.terms.items():
        if c != 1 or any(e != 1 for _, e in mono):
            raise PolynomialError("monomial-set view requires a multilinear 0/1 polynomial")
        out.add(frozenset(v for v, _ in mono))
    return frozenset(out)


def from_monomial_set(g: Iterable[frozenset]) -> SparsePolynomial:
    return SparsePolynomial.from_monomials(tuple(sorted((v, 1) for v in s)) for s in g)


def _as_set(g) -> MonomialSet:
    return monomial_set(g) if isinstance(g, SparsePolynomial) else frozenset(frozenset(s) for s in g)


def hereditary_closure(g) -> MonomialSet:
    """Smallest downward-closed set containing every monomial of ``g``."""
    g = _as_set(g)
    seen = set(g)
    frontier = list(g)
    while frontier:
        nxt = []
        for s in frontier:
            for v in s:
                t = s - {v}
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(seen)


def is_hereditary(g) -> bool:
    g = _as_set(g)
    return all(s - {v} in g for s in g for v in s)


def generators(g) -> MonomialSet:
    """Maximal monomials under inclusion."""
    g = _as_set(g)
    if is_hereditary(g):
        universe = frozenset().union(*g) if g else frozenset()
        return frozenset(s for s in g if not any(s | {v} in g for v in universe - s))
    ordered = sorted(g, key=len, reverse=True)
    return frozenset(s for s in ordered if not any(s < t for t in ordered if len(t) > len(s)))


def comparable_pair(g, exclude_constant: bool = True):
    """A pair ``(smaller, larger)`` of comparable monomials, or None."""
    g = _as_set(g)
    items = sorted((s for s in g if s or not exclude_constant), key=lambda s: (len(s), sorted(s)))
    for a_idx, a in enumerate(items):
        for b in items[a_idx + 1 :]:
            if len(b) > len(a) and a < b:
                return a, b
    return None


def is_pure(g, exclude_constant: bool = True) -> bool:
    """No two comparable monomials; the constant monomial is ignored by default."""
    return comparable_pair(g, exclude_constant) is None
