"""Mixed polynomials in variables z1..zn and their conjugates.

A mixed polynomial is a finite sum of monomials

    c * z1^nu1 * ... * zn^nun * ~z1^mu1 * ... * ~zn^mun

where ``~zk`` denotes the complex conjugate of ``zk``.  The module provides
the plain-text grammar, evaluation, Wirtinger derivatives (``zk`` and
``~zk`` are treated as independent variables), conjugation, and detection /
verification of radial and polar weighted homogeneity.

Grammar (whitespace is insignificant)::

    expression  := ['+'|'-'] term (('+'|'-') term)*
    term        := factor ('*' factor)*
    factor      := coefficient | var
    coefficient := real | '(' real ('+'|'-') real 'i' ')'
    var         := ('z'|'~z') index ('^' positive-integer)?

``real`` is an unsigned decimal literal (``2``, ``0.5``, ``1e-3``).  The
leading sign on the first term is an extension over the strict grammar so
that printing round-trips polynomials whose leading coefficient is
negative.  Variable indices are 1-based and must lie in ``[1, n]``.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from math import gcd, isfinite
from typing import Iterable, Sequence

import numpy as np

from ._exactlin import kernel_basis
from .errors import InputError, ParseError, ZeroPolynomialError

# Coefficients whose modulus drops below this after merging are discarded.
COEFF_DROP_TOL = 1e-14


class WeightKind(enum.Enum):
    RADIAL = "radial"
    POLAR = "polar"


@dataclass(frozen=True)
class MixedMonomial:
    """One term ``coeff * z^nu * ~z^mu``; ``nu`` and ``mu`` have equal length."""

    coeff: complex
    nu: tuple[int, ...]
    mu: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.nu) != len(self.mu):
            raise InputError("nu and mu must have equal length")
        if any(e < 0 for e in self.nu) or any(e < 0 for e in self.mu):
            raise InputError("exponents must be non-negative")
        if not (isfinite(self.coeff.real) and isfinite(self.coeff.imag)):
            raise InputError("coefficient must be finite")
        if self.coeff == 0:
            raise InputError("zero coefficient in monomial")

    @property
    def n(self) -> int:
        return len(self.nu)

    def radial_degree(self, w: Sequence[int]) -> int:
        return sum(wj * (a + b) for wj, a, b in zip(w, self.nu, self.mu))

    def polar_degree(self, w: Sequence[int]) -> int:
        return sum(wj * (a - b) for wj, a, b in zip(w, self.nu, self.mu))

    @property
    def total_degree(self) -> int:
        return sum(self.nu) + sum(self.mu)


@dataclass(frozen=True)
class MixedPolynomial:
    """Immutable mixed polynomial with canonically ordered, merged terms."""

    n: int
    terms: tuple[MixedMonomial, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError("n must be at least 1")
        seen = set()
        for t in self.terms:
            if t.n != self.n:
                raise InputError("term arity does not match polynomial arity")
            key = (t.nu, t.mu)
            if key in seen:
                raise InputError("duplicate exponent pair in terms")
            seen.add(key)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_holomorphic(self) -> bool:
        return all(all(e == 0 for e in t.mu) for t in self.terms)

    def evaluate(self, p: Sequence[complex]) -> complex:
        return evaluate(self, p)

    __call__ = evaluate

    def __str__(self) -> str:
        return to_text(self)


def from_terms(n: int, items: Iterable[tuple[Sequence[int], Sequence[int], complex]]) -> MixedPolynomial:
    """Build a polynomial, merging equal exponent pairs and dropping tiny coefficients."""
    acc: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for nu, mu, coeff in items:
        key = (tuple(int(e) for e in nu), tuple(int(e) for e in mu))
        acc[key] = acc.get(key, 0j) + complex(coeff)
    terms = []
    for (nu, mu), c in acc.items():
        if abs(c) < COEFF_DROP_TOL:
            continue
        # +0.0 normalizes away negative zero so printing never emits "-0.0".
        terms.append(MixedMonomial(complex(c.real + 0.0, c.imag + 0.0), nu, mu))
    terms.sort(key=lambda t: (t.total_degree, t.nu, t.mu))
    return MixedPolynomial(n, tuple(terms))


# ---------------------------------------------------------------- parsing --

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class _Token:
    kind: str  # NUM VAR OP I
    pos: int
    text: str
    value: float = 0.0
    bar: bool = False
    index: int = 0
    is_int: bool = False


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append(_Token("OP", i, ch))
            i += 1
            continue
        if ch == "i":
            tokens.append(_Token("I", i, "i"))
            i += 1
            continue
        if ch == "z" or ch == "~":
            bar = ch == "~"
            j = i + 1
            if bar:
                if j >= len(text) or text[j] != "z":
                    raise ParseError("'~' must be followed by 'z'", i)
                j += 1
            m = _INT_RE.match(text, j)
            if not m:
                raise ParseError("variable index expected after 'z'", j)
            tokens.append(_Token("VAR", i, text[i : m.end()], bar=bar, index=int(m.group())))
            i = m.end()
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            lit = m.group()
            value = float(lit)
            if not isfinite(value):
                raise ParseError("numeric literal overflows a float", i)
            is_int = bool(_INT_RE.fullmatch(lit))
            tokens.append(_Token("NUM", i, lit, value=value, is_int=is_int))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], n: int, text_len: int):
        self.tokens = tokens
        self.n = n
        self.k = 0
        self.end = text_len

    def _peek(self) -> _Token | None:
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def _next(self, expect: str) -> _Token:
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of input, expected {expect}", self.end)
        self.k += 1
        return tok

    def parse(self) -> list[tuple[tuple[int, ...], tuple[int, ...], complex]]:
        items = []
        sign = 1.0
        tok = self._peek()
        if tok is None:
            raise ParseError("empty polynomial text", 0)
        if tok.kind == "OP" and tok.text in "+-":
            sign = -1.0 if tok.text == "-" else 1.0
            self.k += 1
        items.append(self._term(sign))
        while (tok := self._peek()) is not None:
            if tok.kind == "OP" and tok.text in "+-":
                self.k += 1
                items.append(self._term(-1.0 if tok.text == "-" else 1.0))
            else:
                raise ParseError(f"expected '+' or '-', got {tok.text!r}", tok.pos)
        return items

    def _term(self, sign: float) -> tuple[tuple[int, ...], tuple[int, ...], complex]:
        coeff = complex(sign, 0.0)
        nu = [0] * self.n
        mu = [0] * self.n
        coeff = self._factor(coeff, nu, mu)
        while (tok := self._peek()) is not None and tok.kind == "OP" and tok.text == "*":
            self.k += 1
            coeff = self._factor(coeff, nu, mu)
        return tuple(nu), tuple(mu), coeff

    def _factor(self, coeff: complex, nu: list[int], mu: list[int]) -> complex:
        tok = self._next("a coefficient or a variable")
        if tok.kind == "NUM":
            return coeff * tok.value
        if tok.kind == "VAR":
            if not (1 <= tok.index <= self.n):
                raise ParseError(f"variable index {tok.index} outside [1, {self.n}]", tok.pos)
            exp = 1
            nxt = self._peek()
            if nxt is not None and nxt.kind == "OP" and nxt.text == "^":
                self.k += 1
                etok = self._next("a positive integer exponent")
                if etok.kind != "NUM" or not etok.is_int or int(etok.value) < 1:
                    raise ParseError("exponent must be a positive integer", etok.pos)
                exp = int(etok.value)
            (mu if tok.bar else nu)[tok.index - 1] += exp
            return coeff
        if tok.kind == "OP" and tok.text == "(":
            re_tok = self._next("a real number")
            if re_tok.kind != "NUM":
                raise ParseError("real part expected after '('", re_tok.pos)
            sign_tok = self._next("'+' or '-'")
            if sign_tok.kind != "OP" or sign_tok.text not in "+-":
                raise ParseError("'+' or '-' expected in complex coefficient", sign_tok.pos)
            im_tok = self._next("a real number")
            if im_tok.kind != "NUM":
                raise ParseError("imaginary part expected", im_tok.pos)
            i_tok = self._next("'i'")
            if i_tok.kind != "I":
                raise ParseError("'i' expected after imaginary part", i_tok.pos)
            close = self._next("')'")
            if close.kind != "OP" or close.text != ")":
                raise ParseError("')' expected to close complex coefficient", close.pos)
            imag = im_tok.value if sign_tok.text == "+" else -im_tok.value
            return coeff * complex(re_tok.value, imag)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def parse(text: str, n: int) -> MixedPolynomial:
    """Parse polynomial text with variables z1..zn (and ~z1..~zn).

    Raises ParseError with a 0-based position on any syntax problem,
    including variable indices outside [1, n].
    """
    if n < 1:
        raise InputError("n must be at least 1")
    items = _Parser(_lex(text), n, len(text)).parse()
    return from_terms(n, items)


def _fmt_real(x: float) -> str:
    return repr(float(x))


def _term_body(t: MixedMonomial) -> tuple[bool, str]:
    """Return (negative, body-text) with the sign factored out of the coefficient."""
    c = t.coeff
    negative = c.real < 0 or (c.real == 0 and c.imag < 0)
    if negative:
        c = complex(0.0 - c.real, 0.0 - c.imag)
    var_parts = []
    for j in range(t.n):
        for exp, tag in ((t.nu[j], f"z{j + 1}"), (t.mu[j], f"~z{j + 1}")):
            if exp == 1:
                var_parts.append(tag)
            elif exp > 1:
                var_parts.append(f"{tag}^{exp}")
    if c.imag == 0.0:
        coeff_txt = None if (c.real == 1.0 and var_parts) else _fmt_real(c.real)
    else:
        op = "+" if c.imag > 0 else "-"
        coeff_txt = f"({_fmt_real(c.real)}{op}{_fmt_real(abs(c.imag))}i)"
    pieces = ([coeff_txt] if coeff_txt is not None else []) + var_parts
    return negative, "*".join(pieces)


def to_text(f: MixedPolynomial) -> str:
    """Grammar-conforming text; ``parse(to_text(f), f.n)`` reproduces f exactly."""
    if f.is_zero:
        return "0"
    chunks = []
    for idx, t in enumerate(f.terms):
        negative, body = _term_body(t)
        if idx == 0:
            chunks.append(("- " if negative else "") + body)
        else:
            chunks.append(("- " if negative else "+ ") + body)
    return " ".join(chunks)


# ------------------------------------------------------------- evaluation --

@functools.lru_cache(maxsize=4096)
def _eval_arrays(f: MixedPolynomial) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    coeffs = np.array([t.coeff for t in f.terms], dtype=complex)
    nu = np.array([t.nu for t in f.terms], dtype=np.int64).reshape(len(f.terms), f.n)
    mu = np.array([t.mu for t in f.terms], dtype=np.int64).reshape(len(f.terms), f.n)
    return coeffs, nu, mu


def evaluate(f: MixedPolynomial, p: Sequence[complex]) -> complex:
    """Value of f at p (len(p) must equal f.n)."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (f.n,):
        raise InputError(f"point has shape {p.shape}, expected ({f.n},)")
    if f.is_zero:
        return 0j
    coeffs, nu, mu = _eval_arrays(f)
    mono = np.prod(p[None, :] ** nu, axis=1) * np.prod(np.conj(p)[None, :] ** mu, axis=1)
    return complex(np.dot(coeffs, mono))


@functools.lru_cache(maxsize=4096)
def _wirtinger_cached(f: MixedPolynomial, j: int, bar: bool) -> MixedPolynomial:
    items = []
    jj = j - 1
    for t in f.terms:
        exp = t.mu[jj] if bar else t.nu[jj]
        if exp == 0:
            continue
        nu, mu = list(t.nu), list(t.mu)
        if bar:
            mu[jj] -= 1
        else:
            nu[jj] -= 1
        items.append((tuple(nu), tuple(mu), t.coeff * exp))
    return from_terms(f.n, items)


def wirtinger(f: MixedPolynomial, j: int, bar: bool = False) -> MixedPolynomial:
    """Wirtinger derivative d/dzj (bar=False) or d/d~zj (bar=True); j is 1-based."""
    if not 1 <= j <= f.n:
        raise InputError(f"variable index {j} outside [1, {f.n}]")
    return _wirtinger_cached(f, j, bar)


def conjugate(f: MixedPolynomial) -> MixedPolynomial:
    """Complex conjugate polynomial: conjugated coefficients, nu and mu swapped."""
    return from_terms(f.n, ((t.mu, t.nu, t.coeff.conjugate()) for t in f.terms))


def add(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    if f.n != g.n:
        raise InputError("polynomial arities differ")
    return from_terms(f.n, [(t.nu, t.mu, t.coeff) for t in f.terms + g.terms])


def scale(f: MixedPolynomial, c: complex) -> MixedPolynomial:
    return from_terms(f.n, ((t.nu, t.mu, t.coeff * c) for t in f.terms))


# ----------------------------------------------------------------- weights --

@dataclass(frozen=True)
class WeightType:
    """Integer weight vector with its degree under radial or polar grading.

    ``d`` may be zero or negative; ``degree_positive`` marks whether it is a
    positive integer (the weighted-homogeneity definitions require that for
    the geometric statements, but detection reports every lattice generator).
    """

    w: tuple[int, ...]
    d: int
    kind: WeightKind

    def __post_init__(self) -> None:
        if not self.w or all(x == 0 for x in self.w):
            raise InputError("weight vector must be nonzero")
        g = 0
        for x in self.w:
            g = gcd(g, abs(x))
        if g != 1:
            raise InputError("weight vector must have gcd 1")

    @property
    def degree_positive(self) -> bool:
        return self.d > 0

    @property
    def strictly_positive(self) -> bool:
        return all(x > 0 for x in self.w)

    @property
    def strictly_negative(self) -> bool:
        return all(x < 0 for x in self.w)

    @property
    def strictly_signed(self) -> bool:
        return self.strictly_positive or self.strictly_negative

    def as_dict(self) -> dict:
        return {
            "w": list(self.w),
            "d": self.d,
            "kind": self.kind.value,
            "degree_positive": self.degree_positive,
            "strictly_positive": self.strictly_positive,
            "strictly_negative": self.strictly_negative,
        }


def _term_weight_degree(t: MixedMonomial, w: Sequence[int], kind: WeightKind) -> int:
    return t.radial_degree(w) if kind is WeightKind.RADIAL else t.polar_degree(w)


def check_weighted(f: MixedPolynomial, w: Sequence[int], kind: WeightKind) -> int | None:
    """Degree d if every term of f has the same weighted degree under w, else None."""
    if f.is_zero:
        raise ZeroPolynomialError("weighted homogeneity is undefined for the zero polynomial")
    if len(w) != f.n:
        raise InputError("weight length does not match polynomial arity")
    degrees = {_term_weight_degree(t, w, kind) for t in f.terms}
    return degrees.pop() if len(degrees) == 1 else None


def detect_weights(f: MixedPolynomial, kind: WeightKind) -> list[WeightType]:
    """Generating set of the integer lattice of weight vectors homogeneous for f.

    Each generator is primitive (gcd 1) and carries its own degree.  The sign
    is normalized so the degree is positive when nonzero, otherwise so the
    first nonzero weight entry is positive.  Empty list when only w = 0 works.
    """
    if f.is_zero:
        raise ZeroPolynomialError("weight detection is undefined for the zero polynomial")
    if kind is WeightKind.RADIAL:
        rows = [tuple(a + b for a, b in zip(t.nu, t.mu)) for t in f.terms]
    else:
        rows = [tuple(a - b for a, b in zip(t.nu, t.mu)) for t in f.terms]
    base = rows[0]
    diffs = [tuple(r[j] - base[j] for j in range(f.n)) for r in rows[1:]]
    diffs = [d for d in diffs if any(d)]
    result = []
    for vec in kernel_basis(diffs, f.n):
        d = sum(wj * ej for wj, ej in zip(vec, base))
        if d < 0 or (d == 0 and next(x for x in vec if x != 0) < 0):
            vec = tuple(-x for x in vec)
            d = -d
        result.append(WeightType(vec, d, kind))
    return result


def verify_polar_action(f: MixedPolynomial, wt: WeightType, p: Sequence[complex], t: float) -> float:
    """Residual |f(exp(i*w*t) . p) - exp(i*d*t) * f(p)| of the S^1 action identity."""
    if wt.kind is not WeightKind.POLAR:
        raise InputError("verify_polar_action needs a polar weight type")
    if check_weighted(f, wt.w, WeightKind.POLAR) != wt.d:
        raise InputError("polynomial is not polar weighted homogeneous of the given type")
    p = np.asarray(p, dtype=complex)
    rotated = p * np.exp(1j * t * np.array(wt.w, dtype=float))
    return abs(evaluate(f, rotated) - np.exp(1j * wt.d * t) * evaluate(f, p))


def euler_residual(f: MixedPolynomial, wt: WeightType, p: Sequence[complex]) -> float:
    """Normalized residual of the weighted Euler identity at p.

    Radial grading satisfies sum_j w_j (z_j d_j f + zbar_j dbar_j f) = d f;
    the polar grading flips the sign of the conjugate half.  Zero up to
    roundoff whenever f is weighted homogeneous of the given type.
    """
    if check_weighted(f, wt.w, wt.kind) != wt.d:
        raise InputError("polynomial is not weighted homogeneous of the given type")
    p = np.asarray(p, dtype=complex)
    sign = -1.0 if wt.kind is WeightKind.POLAR else 1.0
    total = 0.0 + 0.0j
    for j, wj in enumerate(wt.w, start=1):
        total += wj * p[j - 1] * evaluate(wirtinger(f, j), p)
        total += sign * wj * np.conj(p[j - 1]) * evaluate(wirtinger(f, j, bar=True), p)
    value = evaluate(f, p)
    return abs(total - wt.d * value) / (1.0 + abs(value))
