"""Oracle reductions: homogeneous-component extraction by interpolation,
substitution projections, and call accounting.

An :class:`Oracle` is a black-box evaluator with a stated degree bound.
Extraction evaluates it at ``d+1`` scaled copies of a point and solves the
Vandermonde system exactly, so every answer is an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .polynomials import SparsePolynomial, VarId


class ReductionError(ValueError):
    pass


class InconsistentSystem(ReductionError):
    """The oracle's values do not fit a polynomial of the stated degree."""


class DegreeBoundViolation(ReductionError):
    pass


@dataclass
class OracleTranscript:
    """Accounting for one reduction run.

    ``call_count`` counts invocations of the oracle handed to the operation;
    ``base_calls`` counts invocations of the underlying source oracle, which
    for nested extractions is the product of the per-level counts.
    """

    call_count: int = 0
    base_calls: int = 0
    substitutions: tuple[str, ...] = ()
    scales: tuple[int, ...] = ()
    derived_constant_count: int = 0

    def __add__(self, other: "OracleTranscript") -> "OracleTranscript":
        subs = self.substitutions + tuple(s for s in other.substitutions if s not in self.substitutions)
        scales = self.scales or other.scales
        return OracleTranscript(self.call_count + other.call_count, self.base_calls + other.base_calls,
                                subs, scales, self.derived_constant_count + other.derived_constant_count)

    def to_json(self) -> dict:
        return {
            "oracle_calls": self.call_count,
            "base_calls": self.base_calls,
            "scales": list(self.scales),
            "substitutions": list(self.substitutions),
            "derived_constants": self.derived_constant_count,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OracleTranscript":
        return cls(data["oracle_calls"], data["base_calls"], tuple(data["substitutions"]),
                   tuple(data["scales"]), data["derived_constants"])


class Oracle:
    """Callable evaluator ``point -> Fraction`` over ``universe``.

    ``degree`` is the caller-supplied total degree bound.  When the underlying
    polynomial is known it is kept in ``polynomial`` and the bound is checked.
    Derived oracles share ``root``; ``root.calls`` is the base-call counter.
    """

    def __init__(self, evaluate: Callable[[Mapping[VarId, object]], object], universe: Iterable[VarId],
                 degree: int, name: str = "oracle", polynomial: SparsePolynomial | None = None,
                 root: "Oracle | None" = None, substitutions: tuple[str, ...] = ()):
        if degree < 0:
            raise ReductionError("degree bound must be nonnegative")
        self._evaluate = evaluate
        self.universe = frozenset(universe)
        self.degree = degree
        self.name = name
        self.polynomial = polynomial
        self.root = root if root is not None else self
        self.substitutions = substitutions
        self.calls = 0
        if polynomial is not None and polynomial.degree() > degree:
            raise DegreeBoundViolation(f"{name}: degree bound {degree} below true degree {polynomial.degree()}")

    @classmethod
    def from_polynomial(cls, p: SparsePolynomial, degree: int | None = None, name: str = "oracle",
                        universe: Iterable[VarId] | None = None) -> "Oracle":
        d = p.degree() if degree is None else degree
        return cls(p.evaluate, p.variables() if universe is None else universe, d, name, p)

    def __call__(self, point: Mapping[VarId, object]) -> Fraction:
        self.calls += 1
        return Fraction(self._evaluate(point))

    def __repr__(self):
        return f"Oracle({self.name!r}, degree={self.degree}, |universe|={len(self.universe)})"


@lru_cache(maxsize=128)
def _vandermonde_inverse(scales: tuple[int, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse of V[i][k] = scales[i]**k by Gauss-Jordan elimination over Q."""
    m = len(scales)
    rows = [[Fraction(s) ** k for k in range(m)] + [Fraction(int(i == r)) for i in range(m)]
            for r, s in enumerate(scales)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if rows[r][col] != 0), None)
        if pivot is None:
            raise InconsistentSystem("scales are not distinct")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(tuple(row[m:]) for row in rows)


def _scaled(point: Mapping[VarId, object], vars: frozenset | None, s: int) -> dict:
    if vars is None:
        return {v: x * s for v, x in point.items()}
    return {v: (x * s if v in vars else x) for v, x in point.items()}


def extract_homogeneous(oracle: Oracle, k: int, point: Mapping[VarId, object], vars: Iterable[VarId] | None = None,
                        degree: int | None = None, scale_base: int = 2,
                        check: bool = False) -> tuple[Fraction, OracleTranscript]:
    """Value at ``point`` of the degree-``k`` component (in ``vars``, or in all
    variables) of the oracle's polynomial.

    ``degree`` is the bound in ``vars`` (defaults to the oracle's bound).  The
    oracle is called at scales ``scale_base**0 .. scale_base**d``.  With
    ``check`` one extra scale is evaluated and must agree with the
    interpolant, otherwise :class:`InconsistentSystem` is raised.
    """
    if k < 0:
        raise ReductionError("k must be nonnegative")
    missing = oracle.universe - set(point)
    if missing:
        raise ReductionError(f"point does not cover {sorted(map(str, missing))[:3]}")
    if scale_base < 2:
        raise ReductionError("scale base must be at least 2")
    d = oracle.degree if degree is None else degree
    vset = None if vars is None else frozenset(vars)
    base_before = oracle.root.calls
    scales = tuple(scale_base**i for i in range(d + 1))
    values = [oracle(_scaled(point, vset, s)) for s in scales]
    calls = d + 1
    inv = _vandermonde_inverse(scales)
    if check:
        extra = scale_base ** (d + 1)
        got = oracle(_scaled(point, vset, extra))
        calls += 1
        coeffs = [sum((a * v for a, v in zip(row, values)), Fraction(0)) for row in inv]
        if sum((c * Fraction(extra) ** i for i, c in enumerate(coeffs)), Fraction(0)) != got:
            raise InconsistentSystem(f"{oracle.name}: values exceed degree bound {d}")
    subs = oracle.substitutions
    if k > d:
        value = Fraction(0)
        derived = 0
    else:
        value = sum((a * v for a, v in zip(inv[k], values)), Fraction(0))
        derived = d + 1
    t = OracleTranscript(calls, oracle.root.calls - base_before, subs, scales, derived)
    return value, t


def extract_homogeneous_symbolic(p: SparsePolynomial, k: int, vars: Iterable[VarId] | None = None) -> SparsePolynomial:
    """Reference route: read the component off the term list."""
    return p.homogeneous_component(k, vars)


class _ExtractingOracle(Oracle):
    """Oracle for ``CH^k`` of another oracle; every call runs one extraction."""

    def __init__(self, inner: Oracle, k: int, vars, degree_in_vars: int, scale_base: int, name: str):
        self.inner = inner
        self.k = k
        self.vars = None if vars is None else frozenset(vars)
        self.degree_in_vars = degree_in_vars
        self.scale_base = scale_base
        self.transcript = OracleTranscript(substitutions=inner.substitutions)
        super().__init__(self._run, inner.universe, inner.degree, name, None, inner.root, inner.substitutions)

    def _run(self, point):
        value, t = extract_homogeneous(self.inner, self.k, point, self.vars, self.degree_in_vars, self.scale_base)
        self.transcript = self.transcript + t
        return value


def homogeneous_oracle(oracle: Oracle, k: int, vars: Iterable[VarId] | None = None, degree: int | None = None,
                       scale_base: int = 2, name: str | None = None) -> Oracle:
    """Oracle whose value is the degree-``k`` component of ``oracle``; used to
    nest extractions.  Each call costs ``degree+1`` calls of ``oracle``."""
    d = oracle.degree if degree is None else degree
    label = name or f"CH^{k}({oracle.name})"
    return _ExtractingOracle(oracle, k, vars, d, scale_base, label)


def _describe(sigma: Mapping[VarId, object]) -> str:
    parts = [f"{v}->{sigma[v]}" for v in sorted(sigma)]
    return ", ".join(parts)


def project(oracle: Oracle, sigma: Mapping[VarId, object], universe: Iterable[VarId] | None = None,
            degree: int | None = None, name: str | None = None, label: str | None = None,
            precompose: bool = False) -> Oracle:
    """Compose ``oracle`` with the substitution ``sigma``.

    ``sigma`` maps source variables to constants, target variables, or
    polynomials over the target universe; unmapped source variables pass
    through.  Each call of the result makes exactly one call of ``oracle``.
    With ``precompose`` and a known source polynomial, the substitution is
    carried out once symbolically and calls evaluate the composed
    polynomial, still charging one call to the source.
    """
    sigma = dict(sigma)
    if universe is None:
        universe = set(oracle.universe - set(sigma))
        for t in sigma.values():
            if isinstance(t, VarId):
                universe.add(t)
            elif isinstance(t, SparsePolynomial):
                universe |= t.variables()
    d = oracle.degree if degree is None else degree
    subs = oracle.substitutions + ((label or _describe(sigma)),)
    composed = None
    if oracle.polynomial is not None:
        composed = oracle.polynomial.substitute(sigma) if precompose else None

    if composed is not None:
        def run(point, _p=composed, _src=oracle):
            _src.calls += 1
            if _src.root is not _src:
                _src.root.calls += 1
            return _p.evaluate(point)
    else:
        def run(point, _src=oracle, _sigma=sigma):
            source = {}
            for v in _src.universe:
                t = _sigma.get(v, v)
                if isinstance(t, VarId):
                    source[v] = point[t]
                elif isinstance(t, SparsePolynomial):
                    source[v] = t.evaluate(point)
                else:
                    source[v] = t
            return _src(source)

    out = Oracle(run, universe, d, name or f"proj({oracle.name})", composed, oracle.root, subs)
    return out
