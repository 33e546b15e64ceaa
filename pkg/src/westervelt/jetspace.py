"""Exact arithmetic over jet coordinates.

Polynomials are sparse dictionaries mapping a packed monomial (one 16-bit
exponent slot per registered indeterminate) to an exact rational
coefficient. A :class:`JetExpr` is a quotient of such polynomials whose
denominator is kept as a product of primitive factors, so that sums of
expressions sharing a factor such as ``1 - 2*beta*p`` do not square it.

Equality of rational expressions is decided by cross-multiplication: the
numerator of ``a - b`` is expanded and compared with the zero polynomial.

Debug syntax::

    p[2,0]        p_tt
    v[1,1]        v_tx
    alpha, beta   parameters
    3/2*beta*x^2  rational coefficients and powers
"""

from __future__ import annotations

import ast
import contextlib
import heapq
import math
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

WIDTH = 16
MASK = (1 << WIDTH) - 1
MAX_EXPONENT = (1 << (WIDTH - 1)) - 1

DEPENDENTS = ("p", "v", "u", "vs", "V", "f")
KNOWN_SYMBOLS = ("t", "x", "ts", "xs", "zeta", "z", "alpha", "beta")

_cap_lock = threading.Lock()
_order_cap = 10


class OrderCapError(ValueError):
    """A derivative would exceed the configured jet order cap."""


class JetDivisionByZero(ZeroDivisionError):
    """A denominator vanished identically."""


def get_order_cap() -> int:
    return _order_cap


def set_order_cap(cap: int) -> None:
    global _order_cap
    if cap < 1:
        raise ValueError("order cap must be positive")
    with _cap_lock:
        _order_cap = int(cap)


@contextlib.contextmanager
def order_cap(cap: int):
    """Temporarily change the jet order cap."""
    old = get_order_cap()
    set_order_cap(cap)
    try:
        yield
    finally:
        set_order_cap(old)


# ---------------------------------------------------------------------------
# indeterminates


@dataclass(frozen=True)
class Symbol:
    """An independent variable or a parameter."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class JetVar:
    """Jet coordinate ``dependent`` differentiated ``t_order`` times in the
    first coordinate and ``x_order`` times in the second."""

    dependent: str
    t_order: int = 0
    x_order: int = 0

    def __post_init__(self):
        if self.dependent not in DEPENDENTS:
            raise ValueError(f"unregistered dependent variable {self.dependent!r}")
        if self.t_order < 0 or self.x_order < 0:
            raise ValueError("derivative orders must be non-negative")
        if self.t_order + self.x_order > _order_cap:
            raise OrderCapError(
                f"{self} exceeds jet order cap {_order_cap}")

    @property
    def order(self) -> int:
        return self.t_order + self.x_order

    def shifted(self, dt: int = 0, dx: int = 0) -> "JetVar":
        return JetVar(self.dependent, self.t_order + dt, self.x_order + dx)

    def __str__(self) -> str:
        return f"{self.dependent}[{self.t_order},{self.x_order}]"


Indeterminate = Union[Symbol, JetVar]

_SYMBOL_RANK = {name: i for i, name in enumerate(KNOWN_SYMBOLS)}
_DEP_RANK = {name: i for i, name in enumerate(DEPENDENTS)}


def _canonical_key(ind: Indeterminate) -> tuple:
    # fixed global enumeration, independent of registration order
    if isinstance(ind, Symbol):
        return (0, _SYMBOL_RANK.get(ind.name, len(KNOWN_SYMBOLS)), ind.name)
    return (1, _DEP_RANK[ind.dependent], ind.order, -ind.t_order, "")


class _Registry:
    def __init__(self):
        self._index: Dict[Indeterminate, int] = {}
        self.items: List[Indeterminate] = []
        self.keys: List[tuple] = []
        self.high = 0
        self._lock = threading.Lock()

    def index(self, ind: Indeterminate) -> int:
        i = self._index.get(ind)
        if i is not None:
            return i
        with self._lock:
            i = self._index.get(ind)
            if i is None:
                i = len(self.items)
                self.items.append(ind)
                self.keys.append(_canonical_key(ind))
                self.high |= 1 << (i * WIDTH + WIDTH - 1)
                self._index[ind] = i
        return i

    def lookup(self, ind: Indeterminate) -> Optional[int]:
        return self._index.get(ind)


REGISTRY = _Registry()


def unit(ind: Indeterminate) -> int:
    """Packed monomial of a single indeterminate to the first power."""
    return 1 << (REGISTRY.index(ind) * WIDTH)


_decode_cache: Dict[int, Tuple[Tuple[int, int], ...]] = {}


def decode(m: int) -> Tuple[Tuple[int, int], ...]:
    """(index, exponent) pairs of a packed monomial."""
    r = _decode_cache.get(m)
    if r is not None:
        return r
    out = []
    i = 0
    mm = m
    while mm:
        e = mm & MASK
        if e:
            out.append((i, e))
        mm >>= WIDTH
        i += 1
    r = tuple(out)
    if len(_decode_cache) > 2_000_000:
        _decode_cache.clear()
    _decode_cache[m] = r
    return r


def _check_overflow(monos: Iterable[int]) -> None:
    high = REGISTRY.high
    for m in monos:
        if m & high:
            raise OverflowError("monomial exponent exceeds packing width")


# ---------------------------------------------------------------------------
# polynomials

Coeff = Union[int, Fraction]


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class Monomial:
    """A single term: exact coefficient times a power product."""

    coefficient: Fraction
    exponents: Tuple[Tuple[Indeterminate, int], ...]


class Poly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("_t", "_hash", "_vars")

    def __init__(self, terms: Optional[Mapping[int, Coeff]] = None):
        t: Dict[int, Coeff] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    t[m] = _norm(c)
        self._t = t
        self._hash = None
        self._vars = None

    @classmethod
    def _raw(cls, t: Dict[int, Coeff]) -> "Poly":
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        p._vars = None
        return p

    @classmethod
    def constant(cls, c: Coeff) -> "Poly":
        return cls({0: c}) if c else cls()

    @classmethod
    def var(cls, ind: Indeterminate) -> "Poly":
        return cls._raw({unit(ind): 1})

    # -- inspection
    def items(self):
        return self._t.items()

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> Coeff:
        return self._t.get(0, 0)

    def var_indices(self) -> frozenset:
        if self._vars is None:
            acc = 0
            for m in self._t:
                acc |= m
            s = set()
            for m in self._t:
                for i, _ in decode(m):
                    s.add(i)
            self._vars = frozenset(s)
        return self._vars

    def variables(self) -> List[Indeterminate]:
        return sorted((REGISTRY.items[i] for i in self.var_indices()),
                      key=_canonical_key)

    def degree_in(self, idx: int) -> int:
        shift = idx * WIDTH
        return max(((m >> shift) & MASK for m in self._t), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in decode(m)) for m in self._t), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: _norm(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- arithmetic
    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        if len(self._t) < len(other._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        r = dict(a)
        for m, c in b.items():
            v = r.get(m, 0) + c
            if v:
                r[m] = v
            else:
                r.pop(m, None)
        return Poly._raw(r)

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def scale(self, c: Coeff) -> "Poly":
        c = _norm(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly._raw({m: _norm(v * c) for m, v in self._t.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return self.scale(other)
        a, b = self._t, other._t
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            r = {ma + mb: ca * cb for ma, ca in a.items()}
            if mb:
                _check_overflow(r)
            return Poly._raw(r)
        r: Dict[int, Coeff] = {}
        get = r.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                r[m] = get(m, 0) + ca * cb
        r = {m: c for m, c in r.items() if c}
        _check_overflow(r)
        return Poly._raw(r)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff(self, ind: Union[Indeterminate, int]) -> "Poly":
        idx = ind if isinstance(ind, int) else REGISTRY.lookup(ind)
        if idx is None:
            return Poly()
        shift = idx * WIDTH
        u = 1 << shift
        r: Dict[int, Coeff] = {}
        for m, c in self._t.items():
            e = (m >> shift) & MASK
            if e:
                r[m - u] = c * e
        return Poly._raw(r)

    def coefficients_in(self, ind: Union[Indeterminate, int]) -> Dict[int, "Poly"]:
        """Split into {power: coefficient polynomial} with respect to one variable."""
        idx = ind if isinstance(ind, int) else REGISTRY.index(ind)
        shift = idx * WIDTH
        out: Dict[int, Dict[int, Coeff]] = {}
        for m, c in self._t.items():
            e = (m >> shift) & MASK
            out.setdefault(e, {})[m - (e << shift)] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    # -- normal forms
    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators over lcm of denominators)."""
        if not self._t:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._t.values():
            if isinstance(c, Fraction):
                num = math.gcd(num, c.numerator)
                den = den * c.denominator // math.gcd(den, c.denominator)
            else:
                num = math.gcd(num, c)
        return Fraction(num, den)

    def primitive(self) -> Tuple[Fraction, "Poly"]:
        """Return (content, integer primitive part)."""
        c = self.content()
        if not c:
            return Fraction(0), Poly()
        if c == 1 and all(type(v) is int for v in self._t.values()):
            return c, self
        if c.denominator == 1:
            k = c.numerator
            return c, Poly._raw({m: (v // k if type(v) is int else int(v / k))
                                 for m, v in self._t.items()})
        return c, Poly._raw({m: int(Fraction(v) / c) for m, v in self._t.items()})

    def leading(self) -> Tuple[int, Coeff]:
        """Leading term under graded-lex order of the global enumeration."""
        m = max(self._t, key=_grlex_key)
        return m, self._t[m]

    def canonical(self) -> "Poly":
        return Poly(self._t)

    def monomials(self) -> List[Monomial]:
        out = []
        for m in sorted(self._t, key=_grlex_key, reverse=True):
            exps = tuple(sorted(((REGISTRY.items[i], e) for i, e in decode(m)),
                                key=lambda ie: _canonical_key(ie[0])))
            out.append(Monomial(Fraction(self._t[m]), exps))
        return out

    @property
    def terms(self) -> List[Monomial]:
        return self.monomials()

    def exact_div(self, f: "Poly") -> Optional["Poly"]:
        """Quotient if ``f`` divides exactly, else None."""
        if not f._t:
            raise JetDivisionByZero("division by the zero polynomial")
        if not self._t:
            return Poly()
        if f.is_constant():
            return self.scale(Fraction(1) / Fraction(f.constant_value()))
        fv = f.var_indices()
        for i in fv:
            if self.degree_in(i) < f.degree_in(i):
                return None
        if not _modular_divisible(self, f):
            return None
        high = REGISTRY.high
        lm_f = max(f._t)
        lc_f = f._t[lm_f]
        rest = [(m, c) for m, c in f._t.items() if m != lm_f]
        rem = dict(self._t)
        heap = [-m for m in rem]
        heapq.heapify(heap)
        q: Dict[int, Coeff] = {}
        while rem:
            while True:
                m = -heapq.heappop(heap)
                if m in rem:
                    break
            c = rem.pop(m)
            d = (m | high) - lm_f
            if (d & high) != high:
                return None
            d -= high
            qc = Fraction(c, lc_f) if isinstance(c, int) and isinstance(lc_f, int) \
                else Fraction(c) / lc_f
            qc = _norm(qc)
            q[d] = qc
            for mf, cf in rest:
                k = mf + d
                v = rem.get(k)
                if v is None:
                    rem[k] = -qc * cf
                    heapq.heappush(heap, -k)
                else:
                    v -= qc * cf
                    if v:
                        rem[k] = v
                    else:
                        del rem[k]
        return Poly._raw(q)

    # -- numeric helpers
    def evaluate(self, values: Mapping[Indeterminate, object]):
        """Evaluate at exact or numeric values; every variable must be bound."""
        by_idx = {}
        for ind, val in values.items():
            i = REGISTRY.lookup(ind)
            if i is not None:
                by_idx[i] = val
        total = 0
        for m, c in self._t.items():
            term = c
            for i, e in decode(m):
                term = term * by_idx[i] ** e
            total = total + term
        return total

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"

    def __str__(self) -> str:
        return format_poly(self)


def _grlex_key(m: int) -> tuple:
    pairs = decode(m)
    deg = sum(e for _, e in pairs)
    keys = REGISTRY.keys
    # earlier variables in the enumeration are more significant
    vec = sorted(((keys[i], e) for i, e in pairs))
    return (deg, tuple((_Neg(k), e) for k, e in vec))


class _Neg:
    """Reverses comparison of canonical keys so that earlier names win."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __gt__(self, other):
        return self.k < other.k

    def __eq__(self, other):
        return self.k == other.k


_PRIME = (1 << 61) - 1
_rng = random.Random(20240611)


def _modular_divisible(n: Poly, f: Poly) -> bool:
    """Necessary condition for f | n: univariate remainder after random
    specialisation of all but one variable, modulo a prime."""
    fv = f.var_indices()
    if not fv:
        return True
    var = max(fv, key=f.degree_in)
    others = (n.var_indices() | fv) - {var}
    point = {i: _rng.randrange(2, _PRIME - 1) for i in others}

    def univariate(p: Poly) -> List[int]:
        shift = var * WIDTH
        coeffs: Dict[int, int] = {}
        for m, c in p.items():
            e = (m >> shift) & MASK
            val = c.numerator * pow(c.denominator, -1, _PRIME) if isinstance(c, Fraction) else c
            for i, k in decode(m):
                if i != var:
                    val = val * pow(point[i], k, _PRIME) % _PRIME
            coeffs[e] = (coeffs.get(e, 0) + val) % _PRIME
        deg = max((k for k, v in coeffs.items() if v), default=-1)
        return [coeffs.get(k, 0) for k in range(deg + 1)]

    a = univariate(n)
    b = univariate(f)
    if not b:
        return True
    if not a:
        return True
    db = len(b) - 1
    inv = pow(b[-1], -1, _PRIME)
    a = a[:]
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % _PRIME
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % _PRIME
    return not any(a[:db])


# ---------------------------------------------------------------------------
# rational expressions

_factor_lock = threading.Lock()
_factor_ids: Dict[Poly, int] = {}
_known_factors: List[Poly] = []
_pow_cache: Dict[Tuple[int, int], Poly] = {}


def _factor_id(f: Poly) -> int:
    i = _factor_ids.get(f)
    if i is None:
        with _factor_lock:
            i = _factor_ids.get(f)
            if i is None:
                i = len(_known_factors)
                _known_factors.append(f)
                _factor_ids[f] = i
    return i


def _factor_pow(f: Poly, k: int) -> Poly:
    if k == 0:
        return Poly.constant(1)
    if k == 1:
        return f
    key = (_factor_id(f), k)
    r = _pow_cache.get(key)
    if r is None:
        r = f ** k
        if len(_pow_cache) > 4096:
            _pow_cache.clear()
        _pow_cache[key] = r
    return r


def _normalize_factor(f: Poly) -> Tuple[Fraction, Poly]:
    """Split into (constant, primitive factor with positive leading coefficient)."""
    c, g = f.primitive()
    _, lc = g.leading()
    if lc < 0:
        c, g = -c, -g
    return c, g


def _split_denominator(d: Poly) -> Tuple[Fraction, Dict[Poly, int]]:
    """Factor a denominator polynomial into known primitive factors."""
    if d.is_zero():
        raise JetDivisionByZero("division by the zero polynomial")
    if d.is_constant():
        return Fraction(d.constant_value()), {}
    if len(d) == 1:
        (m, c), = d.items()
        return Fraction(c), {Poly._raw({1 << (i * WIDTH): 1}): e for i, e in decode(m)}
    const, g = _normalize_factor(d)
    out: Dict[Poly, int] = {}
    # peel monomial content (e.g. p_t^4 * (...))
    common = None
    for m in g._t:
        pairs = dict(decode(m))
        common = pairs if common is None else {i: min(e, pairs.get(i, 0))
                                                for i, e in common.items() if i in pairs}
    if common:
        mono = sum(e << (i * WIDTH) for i, e in common.items())
        g = Poly._raw({m - mono: c for m, c in g._t.items()})
        for i, e in common.items():
            out[Poly._raw({1 << (i * WIDTH): 1})] = e
        if g.is_constant():
            return const * Fraction(g.constant_value()), out
        c2, g = _normalize_factor(g)
        const *= c2
    if len(g) <= 400:
        for f in list(_known_factors):
            if len(f) < 2 or len(f) > len(g):
                continue
            while True:
                q = g.exact_div(f)
                if q is None:
                    break
                out[f] = out.get(f, 0) + 1
                g = q
                if g.is_constant():
                    break
            if g.is_constant():
                break
    if g.is_constant():
        return const * Fraction(g.constant_value()), out
    c3, g = _normalize_factor(g)
    const *= c3
    root, k = _perfect_power(g)
    if k > 1:
        c4, root = _normalize_factor(root)
        # g = root^k exactly, with g primitive and positively led
        const *= c4 ** k
        g = root
    out[g] = out.get(g, 0) + k
    _factor_id(g)
    return const, out


def _integer_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _integer_root(-n, k)
        return None if r is None else -r
    r = round(n ** (1.0 / k)) if n < (1 << 1000) else None
    if r is None:
        return None
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def _kth_root(g: Poly, k: int) -> Optional[Poly]:
    """Exact k-th root of a polynomial with integer coefficients, or None.

    Uses the packed-integer (lexicographic) order: the leading term of the
    root is the k-th root of the leading term, and each further term is
    read off the leading term of ``g - r**k``.
    """
    terms = sorted(g._t.items(), reverse=True)
    lm, lc = terms[0]
    pairs = decode(lm)
    if any(e % k for _, e in pairs):
        return None
    c0 = _integer_root(int(lc), k) if isinstance(lc, int) else None
    if c0 is None:
        return None
    rm = sum((e // k) << (i * WIDTH) for i, e in pairs)
    r: Dict[int, Coeff] = {rm: c0}
    high = REGISTRY.high
    lead_pow = (k - 1) * rm
    denom = k * c0 ** (k - 1)
    last = rm
    for _ in range(len(g) + 2):
        rem = g - Poly._raw(dict(r)) ** k
        if rem.is_zero():
            return Poly._raw(r)
        m = max(rem._t)
        d = (m | high) - lead_pow
        if (d & high) != high:
            return None
        d -= high
        if d >= last:
            return None
        c = Fraction(rem._t[m]) / denom
        if c.denominator != 1:
            return None
        r[d] = c.numerator
        last = d
    return None


def _perfect_power(g: Poly) -> Tuple[Poly, int]:
    if len(g) < 3 or len(g) > 600:
        return g, 1
    deg = g.total_degree()
    for k in (5, 4, 3, 2):
        if deg % k:
            continue
        r = _kth_root(g, k)
        if r is not None:
            r2, k2 = _perfect_power(r)
            return r2, k * k2
    return g, 1


Scalar = Union[int, Fraction]


class JetExpr:
    """Exact rational function of jet coordinates and parameters.

    Stored as ``scale * num / prod(f**k)`` with ``num`` an integer primitive
    polynomial and each ``f`` a primitive polynomial with positive leading
    coefficient. Instances are immutable.
    """

    __slots__ = ("_num", "_scale", "_den")

    def __init__(self, value: Union[Scalar, Poly, "JetExpr", None] = 0):
        if isinstance(value, JetExpr):
            self._num, self._scale, self._den = value._num, value._scale, value._den
            return
        if isinstance(value, Poly):
            poly = value
        else:
            poly = Poly.constant(value)
        c, g = poly.primitive()
        if not c:
            self._num, self._scale, self._den = Poly(), Fraction(0), ()
        else:
            self._num, self._scale, self._den = g, c, ()

    @classmethod
    def _build(cls, num: Poly, scale: Fraction, den: Dict[Poly, int]) -> "JetExpr":
        e = cls.__new__(cls)
        c, g = num.primitive()
        if not c or not scale:
            e._num, e._scale, e._den = Poly(), Fraction(0), ()
            return e
        e._num = g
        e._scale = Fraction(scale) * c
        e._den = tuple(sorted(((f, k) for f, k in den.items() if k),
                              key=lambda fk: _factor_id(fk[0])))
        return e

    @classmethod
    def quotient(cls, num: Poly, den: Poly) -> "JetExpr":
        const, factors = _split_denominator(den)
        return cls._build(num, Fraction(1) / const, factors)

    # -- accessors
    @property
    def numerator(self) -> Poly:
        return self._num.scale(self._scale) if self._scale != 1 else self._num

    @property
    def denominator(self) -> Poly:
        d = Poly.constant(1)
        for f, k in self._den:
            d = d * _factor_pow(f, k)
        return d

    @property
    def denominator_factors(self) -> Tuple[Tuple[Poly, int], ...]:
        return self._den

    @property
    def scale_factor(self) -> Fraction:
        return self._scale

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return not self._den

    def is_constant(self) -> bool:
        return not self._den and self._num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return self._scale * self._num.constant_value()

    def term_count(self) -> int:
        return len(self._num)

    def var_indices(self) -> frozenset:
        s = set(self._num.var_indices())
        for f, _ in self._den:
            s |= f.var_indices()
        return frozenset(s)

    def variables(self) -> List[Indeterminate]:
        return sorted((REGISTRY.items[i] for i in self.var_indices()), key=_canonical_key)

    def jet_vars(self, dependent: Optional[str] = None) -> List[JetVar]:
        return [v for v in self.variables() if isinstance(v, JetVar)
                and (dependent is None or v.dependent == dependent)]

    def has(self, ind: Indeterminate) -> bool:
        i = REGISTRY.lookup(ind)
        return i is not None and i in self.var_indices()

    # -- arithmetic
    @staticmethod
    def _coerce(x) -> "JetExpr":
        if isinstance(x, JetExpr):
            return x
        if isinstance(x, (int, Fraction, Poly)):
            return JetExpr(x)
        if isinstance(x, float):
            raise TypeError("floating-point values are not allowed in exact expressions")
        return NotImplemented

    def __add__(self, other) -> "JetExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num.is_zero():
            return self
        if self._num.is_zero():
            return other
        da = dict(self._den)
        db = dict(other._den)
        lcm = dict(da)
        for f, k in db.items():
            if k > lcm.get(f, 0):
                lcm[f] = k
        a = self._num
        for f, k in lcm.items():
            extra = k - da.get(f, 0)
            if extra:
                a = a * _factor_pow(f, extra)
        b = other._num
        for f, k in lcm.items():
            extra = k - db.get(f, 0)
            if extra:
                b = b * _factor_pow(f, extra)
        sa, sb = self._scale, other._scale
        la = sa.denominator * sb.denominator
        ia = sa.numerator * sb.denominator
        ib = sb.numerator * sa.denominator
        g = math.gcd(ia, ib)
        num = a.scale(ia // g) + b.scale(ib // g)
        return JetExpr._build(num, Fraction(g, la), lcm)

    __radd__ = __add__

    def __neg__(self) -> "JetExpr":
        e = JetExpr.__new__(JetExpr)
        e._num, e._scale, e._den = self._num, -self._scale, self._den
        return e

    def __sub__(self, other) -> "JetExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "JetExpr":
        return self._coerce(other) - self

    def __mul__(self, other) -> "JetExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._num.is_zero() or other._num.is_zero():
            return JetExpr(0)
        den = dict(self._den)
        for f, k in other._den:
            den[f] = den.get(f, 0) + k
        e = JetExpr.__new__(JetExpr)
        e._num = self._num * other._num
        e._scale = self._scale * other._scale
        e._den = tuple(sorted(den.items(), key=lambda fk: _factor_id(fk[0])))
        return e

    __rmul__ = __mul__

    def inverse(self) -> "JetExpr":
        if self._num.is_zero():
            raise JetDivisionByZero("inverse of zero")
        const, factors = _split_denominator(self._num)
        num = Poly.constant(1)
        for f, k in self._den:
            num = num * _factor_pow(f, k)
        return JetExpr._build(num, Fraction(1) / (self._scale * const), factors)

    def __truediv__(self, other) -> "JetExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num.is_zero():
            raise JetDivisionByZero("division by an identically zero expression")
        if other.is_constant():
            e = JetExpr.__new__(JetExpr)
            e._num, e._den = self._num, self._den
            e._scale = self._scale / other.constant_value()
            return e if self._num else JetExpr(0)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "JetExpr":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "JetExpr":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        e = JetExpr.__new__(JetExpr)
        if n == 0:
            return JetExpr(1)
        if self._num.is_zero():
            return JetExpr(0)
        e._num = self._num ** n
        e._scale = self._scale ** n
        e._den = tuple((f, k * n) for f, k in self._den)
        return e

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def cancel(self) -> "JetExpr":
        """Divide out denominator factors that divide the numerator exactly."""
        if not self._den or self._num.is_zero():
            return self
        num = self._num
        den = dict(self._den)
        for f in list(den):
            while den[f]:
                q = num.exact_div(f)
                if q is None:
                    break
                num = q
                den[f] -= 1
        return JetExpr._build(num, self._scale, den)

    def __repr__(self) -> str:
        return f"JetExpr({format_expr(self)})"

    def __str__(self) -> str:
        return format_expr(self)


def is_zero(a: JetExpr) -> bool:
    """True iff the numerator of ``a`` is the zero polynomial."""
    return JetExpr._coerce(a).is_zero()


def add(a: JetExpr, b: JetExpr) -> JetExpr:
    return JetExpr._coerce(a) + b


def mul(a: JetExpr, b: JetExpr) -> JetExpr:
    return JetExpr._coerce(a) * b


# ---------------------------------------------------------------------------
# constructors


def jet(dependent: str, t_order: int = 0, x_order: int = 0) -> JetExpr:
    return JetExpr(Poly.var(JetVar(dependent, t_order, x_order)))


def sym(name: str) -> JetExpr:
    return JetExpr(Poly.var(Symbol(name)))


def const(value: Scalar) -> JetExpr:
    return JetExpr(Fraction(value))


def as_expr(value) -> JetExpr:
    if isinstance(value, JetExpr):
        return value
    if isinstance(value, str):
        return parse(value)
    return JetExpr._coerce(value)


# ---------------------------------------------------------------------------
# substitution


def _as_indeterminate(key) -> Indeterminate:
    if isinstance(key, (Symbol, JetVar)):
        return key
    if isinstance(key, str):
        e = parse(key)
        vs = e.variables()
        if len(vs) != 1 or not (e - JetExpr(Poly.var(vs[0]))).is_zero():
            raise ValueError(f"binding key {key!r} is not a single indeterminate")
        return vs[0]
    if isinstance(key, JetExpr):
        vs = key.variables()
        if len(vs) == 1 and (key - JetExpr(Poly.var(vs[0]))).is_zero():
            return vs[0]
    raise TypeError(f"cannot bind {key!r}")


def _single_var(e: JetExpr) -> Optional[int]:
    if e._den or e._scale != 1 or len(e._num) != 1:
        return None
    (m, c), = e._num.items()
    if c != 1:
        return None
    d = decode(m)
    if len(d) == 1 and d[0][1] == 1:
        return d[0][0]
    return None


def _rename_poly(p: Poly, mapping: Dict[int, int]) -> Poly:
    r: Dict[int, Coeff] = {}
    for m, c in p.items():
        nm = 0
        for i, e in decode(m):
            nm += e << (mapping.get(i, i) * WIDTH)
        v = r.get(nm, 0) + c
        if v:
            r[nm] = v
        else:
            r.pop(nm, None)
    _check_overflow(r)
    return Poly._raw(r)


def _subst_poly(p: Poly, binds: Dict[int, JetExpr]) -> JetExpr:
    present = [i for i in binds if i in p.var_indices()]
    if not present:
        return JetExpr(p)
    shifts = {i: i * WIDTH for i in present}
    K = {i: p.degree_in(i) for i in present}
    groups: Dict[Tuple[int, ...], Dict[int, Coeff]] = {}
    for m, c in p.items():
        exps = tuple((m >> shifts[i]) & MASK for i in present)
        rest = m
        for i, e in zip(present, exps):
            rest -= e << shifts[i]
        groups.setdefault(exps, {})[rest] = c
    den: Dict[Poly, int] = {}
    for i in present:
        for f, k in binds[i]._den:
            den[f] = den.get(f, 0) + k * K[i]
    num_pow: Dict[Tuple[int, int], Poly] = {}
    den_pow: Dict[Tuple[int, int], Poly] = {}

    def npow(i, e):
        key = (i, e)
        if key not in num_pow:
            num_pow[key] = binds[i]._num ** e
        return num_pow[key]

    def dpow(i, e):
        key = (i, e)
        if key not in den_pow:
            d = Poly.constant(1)
            for f, k in binds[i]._den:
                d = d * _factor_pow(f, k * e)
            den_pow[key] = d
        return den_pow[key]

    scales = []
    for exps in groups:
        s = Fraction(1)
        for i, e in zip(present, exps):
            s *= binds[i]._scale ** e
        scales.append(s)
    L = 1
    for s in scales:
        L = L * s.denominator // math.gcd(L, s.denominator)
    total = Poly()
    for (exps, terms), s in zip(groups.items(), scales):
        term = Poly._raw(terms)
        mult = s * L
        term = term.scale(mult.numerator)
        for i, e in zip(present, exps):
            if e:
                term = term * npow(i, e)
            if K[i] - e and binds[i]._den:
                term = term * dpow(i, K[i] - e)
        total = total + term
    return JetExpr._build(total, Fraction(1, L), den)


def substitute(e: JetExpr, bindings: Mapping) -> JetExpr:
    """Simultaneous substitution of indeterminates by expressions."""
    e = as_expr(e)
    binds: Dict[int, JetExpr] = {}
    for k, v in bindings.items():
        ind = _as_indeterminate(k)
        idx = REGISTRY.index(ind)
        if idx in binds:
            raise ValueError(f"indeterminate {ind} bound twice")
        binds[idx] = as_expr(v)
    if not binds:
        return e
    if not (e.var_indices() & set(binds)):
        return e
    renames = {i: _single_var(v) for i, v in binds.items()}
    if all(r is not None for r in renames.values()):
        num = _rename_poly(e._num, renames)
        out = JetExpr._build(num, e._scale, {})
        for f, k in e._den:
            g = _rename_poly(f, renames)
            out = out / JetExpr(g) ** k if not g.is_constant() else out / g.constant_value() ** k
        return out
    out = _subst_poly(e._num, binds) * e._scale
    for f, k in e._den:
        fs = _subst_poly(f, binds)
        if fs.is_zero():
            raise JetDivisionByZero(f"substitution makes denominator factor {f} vanish")
        out = out / fs ** k
    return out


# ---------------------------------------------------------------------------
# text syntax


def _format_mono(m: int) -> str:
    pairs = sorted(((REGISTRY.items[i], e) for i, e in decode(m)),
                   key=lambda ie: _canonical_key(ie[0]))
    parts = []
    for ind, e in pairs:
        s = str(ind)
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for m in sorted(p._t, key=_grlex_key, reverse=True):
        c = Fraction(p._t[m])
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = _format_mono(m)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def format_expr(e: JetExpr) -> str:
    num = format_poly(e._num.scale(e._scale))
    if not e._den:
        return num
    facs = sorted(((format_poly(f), k) for f, k in e._den))
    den = "/".join(f"({s})" if k == 1 else f"({s})^{k}" for s, k in facs)
    return f"({num})/{den}"


class ParseError(ValueError):
    pass


def parse(text: str) -> JetExpr:
    """Parse the debug syntax produced by :func:`format_expr`."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(str(exc)) from None
    return _Evaluator().visit(tree.body)


class _Evaluator:
    def visit(self, node):
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Div):
                left = self.visit(node.left)
                if _is_numeric(node.right):
                    return left / self.visit(node.right)
                for f, k in self.factors(node.right):
                    left = left / f ** k
                return left
            left = self.visit(node.left)
            right = self.visit(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Pow):
                if not right.is_constant() or right.constant_value().denominator != 1:
                    raise ParseError("exponent must be an integer")
                return left ** int(right.constant_value())
            raise ParseError(f"unsupported operator {type(node.op).__name__}")
        if isinstance(node, ast.UnaryOp):
            v = self.visit(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
            raise ParseError("unsupported unary operator")
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(f"unsupported literal {node.value!r}")
            return JetExpr(node.value)
        if isinstance(node, ast.Name):
            if node.id in DEPENDENTS:
                return jet(node.id)
            return sym(node.id)
        if isinstance(node, ast.Subscript):
            if not isinstance(node.value, ast.Name) or node.value.id not in DEPENDENTS:
                raise ParseError("subscripts apply to dependent variables only")
            sl = node.slice
            if isinstance(sl, ast.Tuple) and len(sl.elts) == 2 and all(
                    isinstance(el, ast.Constant) and isinstance(el.value, int) for el in sl.elts):
                return jet(node.value.id, sl.elts[0].value, sl.elts[1].value)
            raise ParseError("jet variables are written dep[t_order,x_order]")
        raise ParseError(f"unsupported syntax {ast.dump(node)}")

    def factors(self, node) -> List[Tuple[JetExpr, int]]:
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
            return self.factors(node.left) + self.factors(node.right)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow) \
                and isinstance(node.right, ast.Constant) and isinstance(node.right.value, int):
            return [(f, k * node.right.value) for f, k in self.factors(node.left)]
        return [(self.visit(node), 1)]


def _is_numeric(node) -> bool:
    if isinstance(node, ast.Constant):
        return True
    if isinstance(node, ast.UnaryOp):
        return _is_numeric(node.operand)
    if isinstance(node, ast.BinOp):
        return _is_numeric(node.left) and _is_numeric(node.right)
    return False


def iter_terms(e: JetExpr) -> Iterator[Monomial]:
    yield from e.numerator.monomials()
