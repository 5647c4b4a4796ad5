"""Terms, atoms and formulas of the language of multiplication, order and power predicates.

Terms have no addition, so every term is a monomial ``c * x1^e1 * ... * xk^ek``
and is stored in that normal form from the moment it is built.  Formulas are
immutable trees; the lowercase helpers (:func:`conj`, :func:`lt`, ...) build
them with the cheap simplifications the elimination relies on, while the
node classes themselves never rewrite anything.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from .numtheory import is_nth_power

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Monomial:
    """``coeff * prod(var ** exp)`` with no zero exponents and sorted variables.

    Build through :meth:`make`, :meth:`var` or :meth:`const` so the invariants hold.
    A zero coefficient (full-rational front end only) absorbs every variable.
    """

    coeff: Fraction = Fraction(1)
    powers: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def make(cls, coeff: Number = 1, powers: Union[Mapping[str, int], Iterable[Tuple[str, int]]] = ()) -> Monomial:
        coeff = Fraction(coeff)
        items = powers.items() if isinstance(powers, Mapping) else powers
        acc: Dict[str, int] = {}
        for v, e in items:
            acc[v] = acc.get(v, 0) + e
        if coeff == 0:
            return cls(coeff, ())
        return cls(coeff, tuple(sorted((v, e) for v, e in acc.items() if e != 0)))

    @classmethod
    def var(cls, name: str) -> Monomial:
        return cls(Fraction(1), ((name, 1),))

    @classmethod
    def const(cls, value: Number) -> Monomial:
        return cls.make(value)

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial.make(self.coeff * other.coeff, itertools.chain(self.powers, other.powers))

    def __pow__(self, k: int) -> Monomial:
        if k == 0:
            return ONE
        return Monomial.make(self.coeff**k, ((v, e * k) for v, e in self.powers))

    def inverse(self) -> Monomial:
        return self ** -1

    def __truediv__(self, other: Monomial) -> Monomial:
        return self * other.inverse()

    def exponent(self, x: str) -> int:
        for v, e in self.powers:
            if v == x:
                return e
        return 0

    def without(self, x: str) -> Monomial:
        return Monomial(self.coeff, tuple((v, e) for v, e in self.powers if v != x))

    def variables(self) -> frozenset:
        return frozenset(v for v, _ in self.powers)

    @property
    def is_constant(self) -> bool:
        return not self.powers

    def substitute(self, x: str, t: Monomial) -> Monomial:
        e = self.exponent(x)
        if e == 0:
            return self
        return self.without(x) * t**e

    def rename(self, mapping: Mapping[str, str]) -> Monomial:
        return Monomial.make(self.coeff, ((mapping.get(v, v), e) for v, e in self.powers))

    def value(self, valuation: Mapping[str, Fraction]) -> Fraction:
        out = self.coeff
        for v, e in self.powers:
            out *= Fraction(valuation[v]) ** e
        return out

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


ONE = Monomial()


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from .syntax import to_text

        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Monomial
    rhs: Monomial


@dataclass(frozen=True)
class Lt(Formula):
    lhs: Monomial
    rhs: Monomial


@dataclass(frozen=True)
class Pow(Formula):
    """``R_n(arg)``: arg is an n-th power."""

    n: int
    arg: Monomial

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"power index must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Atom = Union[Eq, Lt, Pow]
ATOMS = (Eq, Lt, Pow)


# -- simplifying constructors ---------------------------------------------


def eq(u: Monomial, v: Monomial) -> Formula:
    if u == v:
        return TRUE
    if u.is_constant and v.is_constant:
        return TRUE if u.coeff == v.coeff else FALSE
    return Eq(u, v)


def lt(u: Monomial, v: Monomial) -> Formula:
    if u == v:
        return FALSE
    if u.is_constant and v.is_constant:
        return TRUE if u.coeff < v.coeff else FALSE
    return Lt(u, v)


def power(n: int, t: Monomial) -> Formula:
    if n == 1:
        return TRUE
    if t.is_constant and t.coeff > 0:
        # integer roots only; no factoring happens here
        return TRUE if is_nth_power(t.coeff, n) else FALSE
    return Pow(n, t)


def neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bottom):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def conj(*args: Formula) -> Formula:
    out: List[Formula] = []
    for a in args:
        parts = a.args if isinstance(a, And) else (a,)
        for p in parts:
            if isinstance(p, Bottom):
                return FALSE
            if not isinstance(p, Top) and p not in out:
                out.append(p)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*args: Formula) -> Formula:
    out: List[Formula] = []
    for a in args:
        parts = a.args if isinstance(a, Or) else (a,)
        for p in parts:
            if isinstance(p, Top):
                return TRUE
            if not isinstance(p, Bottom) and p not in out:
                out.append(p)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


# -- traversal ------------------------------------------------------------


def monomials(f: Formula) -> Iterator[Monomial]:
    if isinstance(f, (Eq, Lt)):
        yield f.lhs
        yield f.rhs
    elif isinstance(f, Pow):
        yield f.arg
    for child in children(f):
        yield from monomials(child)


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Implies):
        return (f.lhs, f.rhs)
    if isinstance(f, (Exists, Forall)):
        return (f.body,)
    return ()


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, (Eq, Lt)):
        return f.lhs.variables() | f.rhs.variables()
    if isinstance(f, Pow):
        return f.arg.variables()
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    out: frozenset = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    return all(is_quantifier_free(c) for c in children(f))


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with ``fn`` applied to every atom, simplifying on the way."""
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return neg(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return conj(*(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return disj(*(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Implies):
        return Implies(map_atoms(f.lhs, fn), map_atoms(f.rhs, fn))
    if isinstance(f, Exists):
        return Exists(f.var, map_atoms(f.body, fn))
    if isinstance(f, Forall):
        return Forall(f.var, map_atoms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def map_terms(atom: Formula, fn) -> Formula:
    if isinstance(atom, Eq):
        return eq(fn(atom.lhs), fn(atom.rhs))
    if isinstance(atom, Lt):
        return lt(fn(atom.lhs), fn(atom.rhs))
    if isinstance(atom, Pow):
        return power(atom.n, fn(atom.arg))
    raise TypeError(f"not an atom: {atom!r}")


def substitute(f: Formula, x: str, t: Monomial) -> Formula:
    """Replace the free occurrences of ``x`` by ``t`` and renormalize."""
    if isinstance(f, (Exists, Forall)):
        if f.var == x:
            return f
        return type(f)(f.var, substitute(f.body, x, t))
    if isinstance(f, ATOMS):
        return map_terms(f, lambda m: m.substitute(x, t))
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return neg(substitute(f.arg, x, t))
    if isinstance(f, And):
        return conj(*(substitute(a, x, t) for a in f.args))
    if isinstance(f, Or):
        return disj(*(substitute(a, x, t) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.lhs, x, t), substitute(f.rhs, x, t))
    raise TypeError(f"not a formula: {f!r}")


def rename_bound(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Alpha-rename binders so they are pairwise distinct and distinct from free variables."""
    used = set(avoid) | set(free_vars(f))

    def fresh(name: str) -> str:
        if name not in used:
            return name
        for i in itertools.count(1):
            cand = f"{name}_{i}"
            if cand not in used:
                return cand
        raise AssertionError("unreachable")

    def go(g: Formula, env: Dict[str, str]) -> Formula:
        if isinstance(g, ATOMS):
            if not env:
                return g
            rn = lambda m: m.rename(env)  # noqa: E731
            if isinstance(g, Pow):
                return Pow(g.n, rn(g.arg))
            return type(g)(rn(g.lhs), rn(g.rhs))
        if isinstance(g, (Top, Bottom)):
            return g
        if isinstance(g, Not):
            return Not(go(g.arg, env))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a, env) for a in g.args))
        if isinstance(g, Implies):
            return Implies(go(g.lhs, env), go(g.rhs, env))
        if isinstance(g, (Exists, Forall)):
            new = fresh(g.var)
            used.add(new)
            inner = dict(env)
            if new == g.var:
                inner.pop(g.var, None)
            else:
                inner[g.var] = new
            return type(g)(new, go(g.body, inner))
        raise TypeError(f"not a formula: {g!r}")

    return go(f, {})


# -- negation normal form and existential distribution ----------------------


def is_literal(f: Formula) -> bool:
    return isinstance(f, ATOMS + (Top, Bottom)) or (isinstance(f, Not) and isinstance(f.arg, Pow))


def to_nnf(f: Formula) -> Formula:
    """Remove implications and universals and push negations down.

    Negated equalities and orders become disjunctions of order atoms, so a
    negation survives only on a power atom, or on an existential that came
    from a universal quantifier.
    """
    if isinstance(f, ATOMS + (Top, Bottom)):
        return f
    if isinstance(f, And):
        return conj(*(to_nnf(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(to_nnf(a) for a in f.args))
    if isinstance(f, Implies):
        return disj(_nnf_neg(f.lhs), to_nnf(f.rhs))
    if isinstance(f, Exists):
        return Exists(f.var, to_nnf(f.body))
    if isinstance(f, Forall):
        return neg(Exists(f.var, _nnf_neg(f.body)))
    if isinstance(f, Not):
        return _nnf_neg(f.arg)
    raise TypeError(f"not a formula: {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    """NNF of ``not f``."""
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bottom):
        return TRUE
    if isinstance(f, Eq):
        return disj(lt(f.lhs, f.rhs), lt(f.rhs, f.lhs))
    if isinstance(f, Lt):
        return disj(eq(f.lhs, f.rhs), lt(f.rhs, f.lhs))
    if isinstance(f, Pow):
        return neg(power(f.n, f.arg))
    if isinstance(f, Not):
        return to_nnf(f.arg)
    if isinstance(f, And):
        return disj(*(_nnf_neg(a) for a in f.args))
    if isinstance(f, Or):
        return conj(*(_nnf_neg(a) for a in f.args))
    if isinstance(f, Implies):
        return conj(to_nnf(f.lhs), _nnf_neg(f.rhs))
    if isinstance(f, Exists):
        return neg(Exists(f.var, to_nnf(f.body)))
    if isinstance(f, Forall):
        return Exists(f.var, _nnf_neg(f.body))
    raise TypeError(f"not a formula: {f!r}")


def dnf_clauses(f: Formula) -> List[List[Formula]]:
    """Disjunctive normal form as a list of conjunct lists.

    Anything that is not And/Or/Top/Bottom is treated as an opaque literal.
    """
    if isinstance(f, Top):
        return [[]]
    if isinstance(f, Bottom):
        return []
    if isinstance(f, Or):
        return [c for a in f.args for c in dnf_clauses(a)]
    if isinstance(f, And):
        out: List[List[Formula]] = [[]]
        for a in f.args:
            out = [left + right for left in out for right in dnf_clauses(a)]
        return out
    return [[f]]


def distribute_exists(f: Formula) -> Formula:
    """Push each existential through the disjunctions of its (NNF) body.

    Afterwards every Exists body is a conjunction of literals mentioning the
    bound variable; conjuncts free of it are hoisted out.
    """
    if isinstance(f, Exists):
        body = distribute_exists(f.body)
        disjuncts = []
        for clause in dnf_clauses(body):
            inside = [lit for lit in clause if f.var in free_vars(lit)]
            outside = [lit for lit in clause if f.var not in free_vars(lit)]
            if inside:
                outside.append(Exists(f.var, conj(*inside)))
            disjuncts.append(conj(*outside))
        return disj(*disjuncts)
    if isinstance(f, Not):
        return neg(distribute_exists(f.arg))
    if isinstance(f, And):
        return conj(*(distribute_exists(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(distribute_exists(a) for a in f.args))
    if isinstance(f, Implies):
        return Implies(distribute_exists(f.lhs), distribute_exists(f.rhs))
    if isinstance(f, Forall):
        return Forall(f.var, distribute_exists(f.body))
    return f


# -- isolating one variable ------------------------------------------------


@dataclass(frozen=True)
class XEq:
    """``x^e = rhs``"""

    e: int
    rhs: Monomial


@dataclass(frozen=True)
class LowerBound:
    """``r < x^e``"""

    r: Monomial
    e: int


@dataclass(frozen=True)
class UpperBound:
    """``x^e < s``"""

    s: Monomial
    e: int


@dataclass(frozen=True)
class PosPow:
    """``R_n(t * x^e)``"""

    n: int
    t: Monomial
    e: int


@dataclass(frozen=True)
class NegPow:
    """``not R_m(u * x^e)``"""

    m: int
    u: Monomial
    e: int


@dataclass(frozen=True)
class XFree:
    literal: Formula


IsolatedAtom = Union[XEq, LowerBound, UpperBound, PosPow, NegPow, XFree]


def isolate(literal: Formula, x: str) -> IsolatedAtom:
    """Gather ``x`` on one side with a positive exponent (valid over the positive rationals)."""
    if isinstance(literal, (Eq, Lt)):
        ratio = literal.lhs / literal.rhs
        e = ratio.exponent(x)
        rest = ratio.without(x)
        if e == 0:
            # x^k cancels from both sides
            return XFree(type(literal)(literal.lhs.without(x), literal.rhs.without(x)))
        if isinstance(literal, Eq):
            # x^e * rest = 1
            return XEq(e, rest.inverse()) if e > 0 else XEq(-e, rest)
        # x^e * rest < 1
        return UpperBound(rest.inverse(), e) if e > 0 else LowerBound(rest, -e)
    if isinstance(literal, Pow):
        e = literal.arg.exponent(x)
        rest = literal.arg.without(x)
        if e == 0:
            return XFree(literal)
        return PosPow(literal.n, rest, e) if e > 0 else PosPow(literal.n, rest.inverse(), -e)
    if isinstance(literal, Not) and isinstance(literal.arg, Pow):
        inner = isolate(literal.arg, x)
        if isinstance(inner, XFree):
            return XFree(literal)
        return NegPow(inner.n, inner.t, inner.e)
    if x in free_vars(literal):
        raise ValueError(f"cannot isolate {x} in non-literal {literal!r}")
    return XFree(literal)


def isolated_formula(a: IsolatedAtom, x: str) -> Formula:
    """The literal an isolated atom stands for."""
    xe = lambda e: Monomial.make(1, {x: e})  # noqa: E731
    if isinstance(a, XEq):
        return Eq(xe(a.e), a.rhs)
    if isinstance(a, LowerBound):
        return Lt(a.r, xe(a.e))
    if isinstance(a, UpperBound):
        return Lt(xe(a.e), a.s)
    if isinstance(a, PosPow):
        return Pow(a.n, a.t * xe(a.e))
    if isinstance(a, NegPow):
        return Not(Pow(a.m, a.u * xe(a.e)))
    return a.literal
