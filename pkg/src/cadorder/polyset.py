"""Exact sparse multivariate polynomials over the integers.

A :class:`Polynomial` maps exponent tuples to nonzero ``int`` coefficients.
Values are treated as immutable once built.  Problem files are read with
:func:`parse_problem`, which accepts a plain one-polynomial-per-line format
and the subset of SMT-LIB used by QF_NRA benchmark sets.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

NUM_VARS = 3

Exponents = tuple[int, ...]


class ParseError(ValueError):
    """Raised for malformed problem text; carries a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class TooManyVariablesError(ParseError):
    pass


class EmptyProblemError(ValueError):
    pass


def var_name(index: int) -> str:
    return f"x{index}"


class Polynomial:
    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exponents, int] | None = None, nvars: int = NUM_VARS):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    if len(exps) != nvars:
                        raise ValueError(f"exponent vector {exps} does not have length {nvars}")
                    clean[tuple(exps)] = c
        self.terms: dict[Exponents, int] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponents, int], nvars: int) -> "Polynomial":
        # terms must already be free of zero coefficients
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int, nvars: int = NUM_VARS) -> "Polynomial":
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int = NUM_VARS) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw({tuple(exps): 1}, nvars)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different variable spaces")
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) - c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial._raw({}, self.nvars)
            return Polynomial._raw({e: c * other for e, c in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exponents, int] = {}
        get = out.get
        n = self.nvars
        if n == 3:
            for (i0, i1, i2), ca in b.items():
                for (j0, j1, j2), cb in a.items():
                    k = (i0 + j0, i1 + j1, i2 + j2)
                    out[k] = get(k, 0) + ca * cb
        else:
            for ea, ca in b.items():
                for eb, cb in a.items():
                    k = tuple(x + y for x, y in zip(ea, eb))
                    out[k] = get(k, 0) + ca * cb
        return Polynomial._raw({e: c for e, c in out.items() if c}, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Divide exactly by ``other``; raises ``ArithmeticError`` on a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        guard = _guard_mask(self.nvars)
        return _unpack(_pdiv_exact(_pack(self), _pack(other), guard), self.nvars)

    # -- structure ----------------------------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, v: int) -> int:
        if not self.terms:
            return 0
        return max(e[v] for e in self.terms)

    def variables(self) -> frozenset[int]:
        return frozenset(i for e in self.terms for i, k in enumerate(e) if k)

    def coefficients(self, v: int) -> dict[int, "Polynomial"]:
        """Coefficients with respect to ``v`` keyed by power, each free of ``v``."""
        buckets: dict[int, dict[Exponents, int]] = {}
        for e, c in self.terms.items():
            k = e[v]
            buckets.setdefault(k, {})[e[:v] + (0,) + e[v + 1:]] = c
        return {k: Polynomial._raw(t, self.nvars) for k, t in buckets.items()}

    def derivative(self, v: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            if e[v]:
                out[e[:v] + (e[v] - 1,) + e[v + 1:]] = c * e[v]
        return Polynomial._raw(out, self.nvars)

    def content(self) -> int:
        return reduce(gcd, self.terms.values(), 0)

    def canonical(self) -> "Polynomial":
        """Primitive part, signed so the lex-largest monomial is positive."""
        if not self.terms:
            return self
        g = self.content()
        if self.terms[max(self.terms)] < 0:
            g = -g
        if g == 1:
            return self
        return Polynomial._raw({e: c // g for e, c in self.terms.items()}, self.nvars)

    def sorted_terms(self) -> list[tuple[Exponents, int]]:
        """Terms in graded-lex descending order (the printing order)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        return to_plain(self)

    def __repr__(self) -> str:
        return f"Polynomial({to_plain(self)!r})"


def total_degree(p: Polynomial) -> int:
    """Largest monomial total degree; 0 for nonzero constants, -1 for zero."""
    return p.total_degree()


def degree_in(p: Polynomial, v: int) -> int:
    return p.degree(v)


def canonicalize(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    """Primitive, sign-normalized, nonconstant, deduplicated; first-seen order kept."""
    seen = {}
    for p in polys:
        if p.is_constant():
            continue
        q = p.canonical()
        seen.setdefault(q, None)
    return tuple(seen)


# -- resultants -------------------------------------------------------------


def sylvester_matrix(p: Polynomial, q: Polynomial, v: int) -> list[list[Polynomial]]:
    m, n = p.degree(v), q.degree(v)
    if m < 1 or n < 1:
        raise ValueError(f"resultant needs positive degree in {var_name(v)} (got {m}, {n})")
    zero = Polynomial.constant(0, p.nvars)
    pc, qc = p.coefficients(v), q.coefficients(v)
    prow = [pc.get(m - i, zero) for i in range(m + 1)]
    qrow = [qc.get(n - i, zero) for i in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + prow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qrow + [zero] * (size - n - 1 - i))
    return rows


# Inside elimination, exponent vectors are packed into one int per monomial,
# x0 in the most significant field, so int order is lex order and exponent
# addition is int addition.  Each field keeps a guard bit for the
# componentwise-divisibility test.
_FIELD = 24
_GUARD_BIT = 1 << (_FIELD - 1)


def _guard_mask(n: int) -> int:
    return sum(_GUARD_BIT << (_FIELD * i) for i in range(n))


def _pack(p: Polynomial) -> dict[int, int]:
    out = {}
    for e, c in p.terms.items():
        key = 0
        for k in e:
            if k >= _GUARD_BIT:
                raise OverflowError("exponent too large for packed arithmetic")
            key = (key << _FIELD) | k
        out[key] = c
    return out


def _unpack(d: dict[int, int], n: int) -> Polynomial:
    mask = (1 << _FIELD) - 1
    terms = {}
    for key, c in d.items():
        e = [0] * n
        for i in range(n - 1, -1, -1):
            e[i] = key & mask
            key >>= _FIELD
        terms[tuple(e)] = c
    return Polynomial._raw(terms, n)


def _pmul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in b.items():
        for kb, cb in a.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _psub_inplace(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    for k, c in b.items():
        s = a.get(k, 0) - c
        if s:
            a[k] = s
        else:
            del a[k]
    return a


def _pdiv_exact(a: dict[int, int], b: dict[int, int], guard: int) -> dict[int, int]:
    lead = max(b)
    lead_c = b[lead]
    quot = {}
    if len(b) == 1:
        for k, c in a.items():
            q, r = divmod(c, lead_c)
            diff = (k | guard) - lead
            if r or (diff & guard) != guard:
                raise ArithmeticError("inexact polynomial division")
            quot[k - lead] = q
        return quot
    rest = [(k, c) for k, c in b.items() if k != lead]
    rem = dict(a)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    while rem:
        k = -heapq.heappop(heap)
        c = rem.pop(k, 0)
        if not c:
            continue
        q, r = divmod(c, lead_c)
        diff = (k | guard) - lead
        if r or (diff & guard) != guard:
            raise ArithmeticError("inexact polynomial division")
        d = k - lead
        quot[d] = q
        for gk, gc in rest:
            t = d + gk
            old = rem.get(t, 0)
            s = old - q * gc
            if s:
                rem[t] = s
                if not old:
                    heapq.heappush(heap, -t)
            elif old:
                del rem[t]
    return quot


def bareiss_determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = matrix[0][0].nvars
    guard = _guard_mask(nvars)
    a = [[_pack(x) for x in row] for row in matrix]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Polynomial.constant(0, nvars)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                num = _pmul(pivot, row_i[j]) if row_i[j] else {}
                if lead and row_k[j]:
                    num = _psub_inplace(num, _pmul(lead, row_k[j]))
                if prev is not None and num:
                    num = _pdiv_exact(num, prev, guard)
                row_i[j] = num
            row_i[k] = {}
        prev = pivot
    det = _unpack(a[n - 1][n - 1], nvars)
    return -det if sign < 0 else det


def resultant(p: Polynomial, q: Polynomial, v: int) -> Polynomial:
    """Resultant of ``p`` and ``q`` with respect to variable index ``v``."""
    return bareiss_determinant(sylvester_matrix(p, q, v))


def discriminant(p: Polynomial, v: int) -> Polynomial:
    """Discriminant in ``v``: (-1)^(d(d-1)/2) res(p, dp/dv) / lc(p).

    The sign factor makes ``x^2 + b*x + c`` give ``b^2 - 4*c``.
    """
    d = p.degree(v)
    if d < 2:
        raise ValueError(f"discriminant needs degree >= 2 in {var_name(v)} (got {d})")
    lc = p.coefficients(v)[d]
    r = resultant(p, p.derivative(v), v)
    try:
        out = r.exact_div(lc)
    except ArithmeticError as exc:
        raise ArithmeticError("resultant not divisible by leading coefficient") from exc
    return -out if (d * (d - 1) // 2) % 2 else out


# -- problems ---------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    id: str
    polynomials: tuple[Polynomial, ...]
    num_vars: int = NUM_VARS

    def __post_init__(self):
        if not self.polynomials:
            raise EmptyProblemError(f"problem {self.id!r} has no polynomials")
        for p in self.polynomials:
            if p.nvars != self.num_vars:
                raise ValueError("polynomial variable count differs from problem")

    @classmethod
    def from_polynomials(cls, pid: str, polys: Iterable[Polynomial], num_vars: int = NUM_VARS) -> "Problem":
        """Canonicalize (drop constants, primitive part, dedupe) and build."""
        canon = canonicalize(polys)
        if not canon:
            raise EmptyProblemError(f"problem {pid!r} has no nonconstant polynomials")
        return cls(pid, canon, num_vars)

    @classmethod
    def from_strings(cls, pid: str, lines: Iterable[str], num_vars: int = NUM_VARS) -> "Problem":
        return cls.from_polynomials(pid, (parse_polynomial(s, num_vars) for s in lines), num_vars)

    def to_strings(self) -> list[str]:
        return [to_plain(p) for p in self.polynomials]


# -- plain format -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\^)|(\*)|([+-]))")


def to_plain(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        factors = []
        for v, k in enumerate(e):
            if k == 1:
                factors.append(var_name(v))
            elif k > 1:
                factors.append(f"{var_name(v)}^{k}")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        term = "*".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts)


def parse_polynomial(text: str, num_vars: int = NUM_VARS, line: int = 1) -> Polynomial:
    """Parse one plain-format polynomial such as ``3*x0^2*x1 - x2 + 1``."""
    terms: dict[Exponents, int] = {}
    pos = 0
    n = len(text)
    expect_term = True
    sign = 1
    coef = None
    exps = [0] * num_vars
    have_factor = False

    def fail(msg):
        raise ParseError(msg, line, pos + 1)

    def flush():
        nonlocal coef, exps, have_factor
        if not have_factor:
            fail("expected a term")
        key = tuple(exps)
        c = sign * (1 if coef is None else coef)
        s = terms.get(key, 0) + c
        if s:
            terms[key] = s
        else:
            terms.pop(key, None)
        coef, exps, have_factor = None, [0] * num_vars, False

    need_factor = True
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            fail(f"unexpected character {text[pos]!r}")
        num, var, caret, star, pm = m.groups()
        if pm:
            if have_factor:
                if need_factor:
                    fail("dangling '*'")
                flush()
                sign = 1
            elif not expect_term:
                fail(f"unexpected {pm!r}")
            sign *= -1 if pm == "-" else 1
            expect_term = True
            need_factor = True
        elif num is not None or var is not None:
            if not need_factor:
                fail("missing '*' between factors")
            if num is not None:
                coef = int(num) * (1 if coef is None else coef)
            else:
                idx = int(var)
                if idx >= num_vars:
                    raise TooManyVariablesError(f"variable x{idx} outside x0..x{num_vars - 1}", line, pos + 1)
                k = 1
                after = m.end()
                m2 = re.compile(r"\s*\^\s*(\d+)").match(text, after)
                if m2:
                    k = int(m2.group(1))
                    m = m2
                exps[idx] += k
            have_factor = True
            need_factor = False
            expect_term = False
        elif star:
            if need_factor:
                fail("unexpected '*'")
            need_factor = True
        else:
            fail("unexpected '^'")
        pos = m.end()
    if have_factor:
        if need_factor:
            fail("dangling '*'")
        flush()
    elif not terms and expect_term and sign == 1 and not text.strip():
        fail("empty polynomial")
    elif need_factor:
        fail("expected a term")
    return Polynomial._raw(terms, num_vars)


def parse_plain(text: str, problem_id: str = "", num_vars: int = NUM_VARS) -> Problem:
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        polys.append(parse_polynomial(body, num_vars, lineno))
    return Problem.from_polynomials(problem_id, polys, num_vars)


# -- SMT-LIB subset ---------------------------------------------------------

_RELATIONS = {"<", "<=", "=", ">=", ">", "distinct"}
_CONNECTIVES = {"and", "or", "not", "=>", "xor"}
_IGNORED_COMMANDS = {
    "set-logic", "set-info", "set-option", "check-sat", "exit", "get-model",
    "push", "pop", "get-info", "get-value", "echo",
}


class _Sym(str):
    """Token atom that remembers its source position."""

    line: int
    col: int


def _tokenize_sexpr(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            t = _Sym(ch)
            t.line, t.col = line, col
            tokens.append(t)
            i += 1
            col += 1
            continue
        if ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", line, col)
            t = _Sym(text[i + 1:j])
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string literal", line, col)
            t = _Sym(text[i:j + 1])
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            j -= 1
            t = _Sym(text[i:j + 1])
        t.line, t.col = line, col
        tokens.append(t)
        width = j + 1 - i
        col += width
        line += text.count("\n", i, j + 1)
        i = j + 1
    return tokens


def _read_sexprs(tokens):
    stack: list[list] = [[]]
    opens = []
    for t in tokens:
        if t == "(":
            stack.append([])
            opens.append(t)
        elif t == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", t.line, t.col)
            done = stack.pop()
            opener = opens.pop()
            done = _SList(done)
            done.line, done.col = opener.line, opener.col
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1:
        o = opens[-1]
        raise ParseError("unbalanced '('", o.line, o.col)
    return stack[0]


class _SList(list):
    line: int
    col: int


def _pos(node):
    return getattr(node, "line", 0), getattr(node, "col", 0)


class _RationalPoly:
    """Tiny polynomial algebra with Fraction coefficients for the SMT reader."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = {e: c for e, c in t.items() if c}

    @staticmethod
    def const(c, n):
        return _RationalPoly({(0,) * n: Fraction(c)})

    def __add__(self, o):
        t = dict(self.t)
        for e, c in o.t.items():
            t[e] = t.get(e, 0) + c
        return _RationalPoly(t)

    def __neg__(self):
        return _RationalPoly({e: -c for e, c in self.t.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        t = {}
        for e1, c1 in self.t.items():
            for e2, c2 in o.t.items():
                k = tuple(a + b for a, b in zip(e1, e2))
                t[k] = t.get(k, 0) + c1 * c2
        return _RationalPoly(t)

    def to_int(self, n) -> Polynomial:
        den = reduce(lcm, (c.denominator for c in self.t.values()), 1)
        return Polynomial({e: int(c * den) for e, c in self.t.items()}, n)


class _SmtReader:
    def __init__(self, num_vars):
        self.num_vars = num_vars
        self.vars: dict[str, int] = {}
        self.bools: set[str] = set()
        self.polys: list[Polynomial] = []

    def declare(self, name, sort, node):
        if sort == "Bool":
            self.bools.add(name)
            return
        if sort not in ("Real", "Int"):
            raise ParseError(f"unsupported sort {sort!r}", *_pos(node))
        if name in self.vars:
            return
        if len(self.vars) >= self.num_vars:
            raise TooManyVariablesError(
                f"more than {self.num_vars} variables (extra: {name!r})", *_pos(node))
        self.vars[name] = len(self.vars)

    def command(self, node):
        if not isinstance(node, list) or not node:
            raise ParseError("expected a command", *_pos(node))
        head = node[0]
        if head == "declare-fun":
            if len(node) != 4 or not isinstance(node[2], list):
                raise ParseError("malformed declare-fun", *_pos(node))
            if node[2]:
                raise ParseError("function symbols with arguments are not supported", *_pos(node))
            self.declare(node[1], node[3], node)
        elif head == "declare-const":
            if len(node) != 3:
                raise ParseError("malformed declare-const", *_pos(node))
            self.declare(node[1], node[2], node)
        elif head == "assert":
            if len(node) != 2:
                raise ParseError("assert takes one formula", *_pos(node))
            self.formula(node[1])
        elif head in _IGNORED_COMMANDS:
            pass
        else:
            raise ParseError(f"unsupported command {head!r}", *_pos(node))

    def formula(self, node):
        if not isinstance(node, list):
            if node in ("true", "false") or node in self.bools:
                return
            raise ParseError(f"unexpected atom {node!r} in formula", *_pos(node))
        if not node:
            raise ParseError("empty formula", *_pos(node))
        head = node[0]
        if head in _CONNECTIVES:
            for sub in node[1:]:
                self.formula(sub)
        elif head in _RELATIONS:
            args = [self.term(a) for a in node[1:]]
            if len(args) < 2:
                raise ParseError(f"relation {head!r} needs two operands", *_pos(node))
            for lhs, rhs in zip(args, args[1:]):
                self.polys.append((lhs - rhs).to_int(self.num_vars))
        elif head == "let":
            raise ParseError("let-bindings are not supported", *_pos(node))
        elif head == "ite":
            raise ParseError("ite is not supported", *_pos(node))
        elif head == "exists" or head == "forall":
            self.formula(node[2])
        else:
            raise ParseError(f"unsupported formula head {head!r}", *_pos(node))

    def term(self, node) -> _RationalPoly:
        n = self.num_vars
        if not isinstance(node, list):
            if node in self.vars:
                exps = [0] * n
                exps[self.vars[node]] = 1
                return _RationalPoly({tuple(exps): Fraction(1)})
            try:
                return _RationalPoly.const(Fraction(node), n)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"unknown symbol {node!r}", *_pos(node)) from None
        if not node:
            raise ParseError("empty term", *_pos(node))
        head, args = node[0], node[1:]
        if head == "+":
            return reduce(lambda a, b: a + b, (self.term(a) for a in args), _RationalPoly.const(0, n))
        if head == "-":
            if not args:
                raise ParseError("'-' needs operands", *_pos(node))
            parts = [self.term(a) for a in args]
            if len(parts) == 1:
                return -parts[0]
            return reduce(lambda a, b: a - b, parts)
        if head == "*":
            return reduce(lambda a, b: a * b, (self.term(a) for a in args), _RationalPoly.const(1, n))
        if head in ("^", "pow"):
            if len(args) != 2:
                raise ParseError("'^' takes a base and an exponent", *_pos(node))
            base = self.term(args[0])
            try:
                k = int(args[1])
            except (TypeError, ValueError):
                k = -1
            if k < 0:
                raise ParseError("exponent must be a non-negative integer literal", *_pos(node))
            out = _RationalPoly.const(1, n)
            for _ in range(k):
                out = out * base
            return out
        if head == "/":
            if len(args) != 2:
                raise ParseError("'/' takes two literals", *_pos(node))
            num, den = self.term(args[0]), self.term(args[1])
            if any(any(e) for e in den.t) or not den.t:
                raise ParseError("division only by nonzero constants", *_pos(node))
            (c,) = den.t.values()
            return num * _RationalPoly.const(1 / c, n)
        raise ParseError(f"unsupported term head {head!r}", *_pos(node))


def parse_smtlib(text: str, problem_id: str = "", num_vars: int = NUM_VARS) -> Problem:
    """Extract the polynomials of an SMT-LIB QF_NRA script.

    Boolean structure and relation signs are discarded; every atom
    ``lhs ~ rhs`` contributes the polynomial ``lhs - rhs``.
    """
    reader = _SmtReader(num_vars)
    for node in _read_sexprs(_tokenize_sexpr(text)):
        reader.command(node)
    return Problem.from_polynomials(problem_id, reader.polys, num_vars)


def parse_problem(text: str, format: str = "plain", problem_id: str = "", num_vars: int = NUM_VARS) -> Problem:
    if format == "plain":
        return parse_plain(text, problem_id, num_vars)
    if format in ("smtlib", "smt2", "smtlib-subset"):
        return parse_smtlib(text, problem_id, num_vars)
    raise ValueError(f"unknown problem format {format!r}")
