"""Exact arithmetic in the path algebra of a graph.

Scalars live in a prime field or in the rationals; there is no floating
point anywhere.  Elements are finite combinations of normal-form monomials
gamma lambda* (a real path followed by a reversed ghost path ending at the
same vertex).  A monomial is in normal form unless both paths end with the
same edge and that edge is the designated one at its source, in which case
the completeness relation rewrites it into strictly smaller pieces:

    alpha d d* beta*  ->  alpha beta* - sum over siblings e of d:
                                         alpha e e* beta*

The first summand is shorter and the sibling summands are already normal
(only the designated edge, the last declared at its source, can violate),
so rewriting terminates and the result is unique regardless of order.

Elements are immutable values.  The monomial interner is the only shared
mutable structure (single-writer); it assigns stable integer ids in first
occurrence order, which fixes iteration and serialization order everywhere.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .graph_core import FiniteGraph, GraphError


class AlgebraError(ValueError):
    pass


class FieldError(AlgebraError):
    pass


# -- scalars -------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """Integers mod p, p prime.  Values are ints in range(p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic must be prime, got {p!r}")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def of(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise FieldError(f"denominator divisible by {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def ratio(self, num: int, den: int):
        return self.div(self.of(num), self.of(den))

    def nonzero_sample(self, rng):
        return rng.randrange(1, self.p)

    def coef_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


_Q_SAMPLES = tuple(Fraction(n, d)
                   for n in (1, 2, 3, 4, -1, -2, -3, -4) for d in (1, 2, 3))


class RationalField:
    """Exact rationals via fractions.Fraction (always lowest terms)."""

    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def of(self, x):
        try:
            return Fraction(x)
        except (TypeError, ValueError):
            raise FieldError(f"cannot coerce {x!r} into Q") from None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise FieldError("division by zero")
        return Fraction(a) / b

    def ratio(self, num: int, den: int):
        if den == 0:
            raise FieldError("division by zero")
        return Fraction(num, den)

    def nonzero_sample(self, rng):
        return rng.choice(_Q_SAMPLES)

    def coef_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "Q"


class IntegerRing:
    """Plain integer coefficients; the field-free layer normalization and
    structure constants are computed in before reduction into a field."""

    char = None
    zero = 0
    one = 1

    def of(self, x):
        return int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def __repr__(self):
        return "Z"


INTS = IntegerRing()


def field_for_char(c: int):
    if c == 0:
        return RationalField()
    return PrimeField(c)


# -- monomials -----------------------------------------------------------


class Monomial(NamedTuple):
    gamma: tuple[str, ...]   # real path, edge ids
    lam: tuple[str, ...]     # ghost path, edge ids, reversed on application
    root: str                # common range vertex of both paths

    @property
    def degree(self) -> int:
        return len(self.gamma) - len(self.lam)

    def star(self) -> "Monomial":
        return Monomial(self.lam, self.gamma, self.root)


def make_monomial(graph: FiniteGraph, gamma: Sequence[str], lam: Sequence[str],
                  root: Optional[str] = None) -> Monomial:
    """Validated monomial gamma lambda*; root required iff both paths empty."""
    gamma = tuple(gamma)
    lam = tuple(lam)
    rg = graph.path_range(gamma, graph.edge(gamma[0]).src) if gamma else None
    rl = graph.path_range(lam, graph.edge(lam[0]).src) if lam else None
    if rg is not None and rl is not None and rg != rl:
        raise AlgebraError(f"paths end at different vertices: {rg} vs {rl}")
    end = rg if rg is not None else rl
    if end is None:
        if root is None:
            raise AlgebraError("vertex monomial needs an explicit vertex")
        if not graph.has_vertex(root):
            raise GraphError(f"unknown vertex {root!r}")
        return Monomial((), (), root)
    if root is not None and root != end:
        raise AlgebraError(f"declared root {root} does not match path range {end}")
    return Monomial(gamma, lam, end)


def is_basis_admissible(graph: FiniteGraph, m: Monomial) -> bool:
    if not m.gamma or not m.lam or m.gamma[-1] != m.lam[-1]:
        return True
    d = m.gamma[-1]
    return graph.designated.get(graph.edge(d).src) != d


def mono_mul(graph: FiniteGraph, a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Structural product of two monomials, or None when it vanishes.

    The ghost tail of the left factor cancels against the real head of the
    right factor edge by edge; the survivor's remainder is appended on the
    matching side.  The result may need normalization.
    """
    lam1, gam2 = a.lam, b.gamma
    k, n = len(lam1), len(gam2)
    if k <= n:
        if gam2[:k] != lam1:
            return None
        if k == 0:
            if n == 0:
                if a.root != b.root:
                    return None
                return Monomial(a.gamma, b.lam, a.root)
            if a.root != graph.edge(gam2[0]).src:
                return None
        return Monomial(a.gamma + gam2[k:], b.lam, b.root)
    if lam1[:n] != gam2:
        return None
    rest = lam1[n:]
    if n == 0 and b.root != graph.edge(rest[0]).src:
        return None
    return Monomial(a.gamma, b.lam + rest, a.root)


def normalize_terms(graph: FiniteGraph, ring, terms) -> dict:
    """Reduce (coef, gamma, lam, root) terms to a normal-form combination.

    Returns {Monomial: coef} with no zero coefficients.  Works over any
    coefficient ring with add/neg; the rewrite itself only negates.
    """
    designated = graph.designated
    edge_of = graph.edge
    out_of = graph.out_edges
    acc: dict[Monomial, object] = {}
    zero = ring.zero
    stack = [(c, tuple(g), tuple(l), r) for (c, g, l, r) in terms]
    while stack:
        c, gamma, lam, root = stack.pop()
        if c == zero:
            continue
        if gamma and lam and gamma[-1] == lam[-1]:
            d = gamma[-1]
            u = edge_of(d).src
            if designated.get(u) == d:
                alpha, beta = gamma[:-1], lam[:-1]
                stack.append((c, alpha, beta, u))
                nc = ring.neg(c)
                for e in out_of(u):
                    if e.id != d:
                        stack.append((nc, alpha + (e.id,), beta + (e.id,), e.dst))
                continue
        m = Monomial(gamma, lam, root)
        total = ring.add(acc.get(m, zero), c)
        if total == zero:
            acc.pop(m, None)
        else:
            acc[m] = total
    return acc


class MonomialInterner:
    """Assigns stable small ids to monomials in first-seen order."""

    def __init__(self):
        self._ids: dict[Monomial, int] = {}
        self._monos: list[Monomial] = []

    def intern(self, m: Monomial) -> int:
        i = self._ids.get(m)
        if i is None:
            i = len(self._monos)
            self._ids[m] = i
            self._monos.append(m)
        return i

    def id_of(self, m: Monomial) -> int:
        return self._ids[m]

    def monomial(self, i: int) -> Monomial:
        return self._monos[i]

    def known(self, m: Monomial) -> bool:
        return m in self._ids

    def __len__(self):
        return len(self._monos)


# -- elements -------------------------------------------------------------


class Element:
    """Immutable normal-form combination of monomials over a fixed field."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "Algebra", terms: dict):
        self.algebra = algebra
        self.terms = terms

    # -- queries --

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> tuple[Monomial, ...]:
        return tuple(self.terms)

    def coefficient(self, m: Monomial):
        return self.terms.get(m, self.algebra.field.zero)

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({m.degree for m in self.terms}))

    def graded_component(self, n: int) -> "Element":
        return Element(self.algebra,
                       {m: c for m, c in self.terms.items() if m.degree == n})

    def decompose(self) -> list[tuple[int, "Element"]]:
        return [(n, self.graded_component(n)) for n in self.degrees()]

    # -- linear structure --

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        f = self.algebra.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            t = f.add(out.get(m, f.zero), c)
            if t == f.zero:
                out.pop(m, None)
            else:
                out[m] = t
        return Element(self.algebra, out)

    def __neg__(self) -> "Element":
        f = self.algebra.field
        return Element(self.algebra, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        f = self.algebra.field
        c = f.of(c)
        if c == f.zero:
            return self.algebra.zero()
        return Element(self.algebra, {m: f.mul(cc, c) for m, cc in self.terms.items()})

    def __rmul__(self, c) -> "Element":
        if isinstance(c, Element):
            return NotImplemented
        return self.scale(c)

    # -- multiplicative structure --

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        f = alg.field
        raw = []
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(alg.graph, m1, m2)
                if m is not None:
                    raw.append((f.mul(c1, c2), m.gamma, m.lam, m.root))
        return alg._from_normal(normalize_terms(alg.graph, f, raw))

    def bracket(self, other: "Element") -> "Element":
        return self * other - other * self

    def star(self) -> "Element":
        return Element(self.algebra, {m.star(): c for m, c in self.terms.items()})

    # -- plumbing --

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra and not (
                other.algebra.graph == self.algebra.graph
                and other.algebra.field == self.algebra.field):
            raise AlgebraError("elements belong to different algebras")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.algebra.graph == other.algebra.graph
                and self.algebra.field == other.algebra.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_json(self) -> list:
        """Terms in interner order, coefficients rendered as strings."""
        alg = self.algebra
        order = sorted(self.terms, key=alg.interner.intern)
        out = []
        for m in order:
            entry = {"coef": alg.field.coef_str(self.terms[m]),
                     "gamma": list(m.gamma), "lambda": list(m.lam)}
            if not m.gamma and not m.lam:
                entry["vertex"] = m.root
            out.append(entry)
        return out

    def __repr__(self):
        return f"<element {render_element(self)}>"


class Algebra:
    """The path algebra of a finite graph over an exact field.

    Construction site for elements; holds the monomial interner.  For a
    graph with emitter marks this is the algebra of the graph as declared:
    materialized stream edges are ordinary edges, marked vertices are not
    subject to the completeness relation.
    """

    def __init__(self, graph: FiniteGraph, field):
        self.graph = graph
        self.field = field
        self.interner = MonomialInterner()

    # -- constructors --

    def _from_normal(self, terms: dict) -> Element:
        intern = self.interner.intern
        for m in terms:
            intern(m)
        return Element(self, terms)

    def from_raw(self, raw_terms: Iterable) -> Element:
        """raw_terms: iterable of (coef, gamma, lam, root); normalizes."""
        f = self.field
        prepared = [(f.of(c), tuple(g), tuple(l), r) for c, g, l, r in raw_terms]
        return self._from_normal(normalize_terms(self.graph, f, prepared))

    def zero(self) -> Element:
        return Element(self, {})

    def monomial(self, gamma=(), lam=(), root=None, coef=1) -> Element:
        m = make_monomial(self.graph, gamma, lam, root)
        return self.from_raw([(self.field.of(coef), m.gamma, m.lam, m.root)])

    def vertex(self, v: str) -> Element:
        return self.monomial((), (), v)

    def edge(self, e: str) -> Element:
        return self.monomial((e,), ())

    def ghost(self, e: str) -> Element:
        return self.monomial((), (e,))

    def vertex_sum(self) -> Element:
        """Sum of all vertices: the identity element of a finite graph's algebra."""
        return self.from_raw([(1, (), (), v) for v in self.graph.vertices])

    def parse(self, text: str) -> Element:
        return parse_element(self, text)

    def __repr__(self):
        return f"<algebra of {self.graph!r} over {self.field!r}>"


# -- text format -----------------------------------------------------------
#
# element := term (('+'|'-') term)*      an optional sign may lead
# term    := [coef '*'] mono
# coef    := int | int '/' int
# mono    := VERTEX | path ['|' path] | VERTEX '|' path
# path    := EDGE ('.' EDGE)*
#
# "g|l" denotes the monomial g l*; "v|l" a pure ghost path into v.  The
# bare element "0" is the zero element; any other bare integer is an error.


class ParseError(AlgebraError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_WS = " \t\r\n"
_SYMS = "+-*/.|"


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _WS:
            i += 1
            continue
        if ch in _SYMS:
            toks.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, algebra: Algebra, text: str):
        self.alg = algebra
        self.graph = algebra.graph
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Element:
        # bare zero literal
        if (self.toks[0][:2] == ("int", "0")
                and self.toks[1][0] == "end"):
            return self.alg.zero()
        raw = []
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            raw.append(self.term(sign))
            kind, val, pos = self.take()
            if kind == "end":
                break
            if kind != "op" or val not in "+-":
                raise ParseError("expected '+', '-' or end of input", pos)
            sign = -1 if val == "-" else 1
        return self.alg.from_raw(raw)

    def term(self, sign: int):
        f = self.alg.field
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            num = int(val)
            kind2, val2, pos2 = self.peek()
            if kind2 == "op" and val2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "int":
                    raise ParseError("expected denominator", p3)
                coef = f.ratio(num, int(v3))
            else:
                coef = f.of(num)
            self.expect_op("*")
            m = self.mono()
        elif kind == "name":
            coef = f.one
            m = self.mono()
        else:
            raise ParseError("expected a term", pos)
        if sign < 0:
            coef = f.neg(coef)
        return (coef, m.gamma, m.lam, m.root)

    def mono(self) -> Monomial:
        kind, val, pos = self.take()
        if kind != "name":
            raise ParseError("expected a vertex or edge name", pos)
        g = self.graph
        if g.has_vertex(val):
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "|":
                self.take()
                lam = self.path()
                end = g.path_range(lam, g.edge(lam[0]).src)
                if end != val:
                    raise ParseError(
                        f"ghost path ends at {end}, not {val}", pos)
                return Monomial((), lam, val)
            return Monomial((), (), val)
        if not g.has_edge(val):
            raise ParseError(f"unknown name {val!r}", pos)
        gamma = self.path(first=val)
        end = g.path_range(gamma, g.edge(gamma[0]).src)
        k2, v2, _ = self.peek()
        if k2 == "op" and v2 == "|":
            self.take()
            lam = self.path()
            lend = g.path_range(lam, g.edge(lam[0]).src)
            if lend != end:
                raise ParseError(
                    f"paths end at different vertices: {end} vs {lend}", pos)
            return Monomial(gamma, lam, end)
        return Monomial(gamma, (), end)

    def path(self, first: Optional[str] = None) -> tuple:
        ids = []
        if first is None:
            kind, val, pos = self.take()
            if kind != "name" or not self.graph.has_edge(val):
                raise ParseError("expected an edge name", pos)
            ids.append(val)
        else:
            ids.append(first)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == ".":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "name" or not self.graph.has_edge(v2):
                    raise ParseError("expected an edge name", p2)
                ids.append(v2)
            else:
                return tuple(ids)


def parse_element(algebra: Algebra, text: str) -> Element:
    """Parse the element grammar; raises ParseError with a position."""
    try:
        return _Parser(algebra, text).parse()
    except GraphError as exc:
        raise ParseError(str(exc), 0) from None


def _mono_str(m: Monomial) -> str:
    if not m.gamma and not m.lam:
        return m.root
    if not m.lam:
        return ".".join(m.gamma)
    if not m.gamma:
        return f"{m.root}|{'.'.join(m.lam)}"
    return f"{'.'.join(m.gamma)}|{'.'.join(m.lam)}"


def render_element(el: Element) -> str:
    """Text form in the element grammar; parses back to the same element."""
    if el.is_zero():
        return "0"
    alg = el.algebra
    f = alg.field
    parts = []
    for m in sorted(el.terms, key=alg.interner.intern):
        s = f.coef_str(el.terms[m])
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        body = _mono_str(m) if s == "1" else f"{s}*{_mono_str(m)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)
