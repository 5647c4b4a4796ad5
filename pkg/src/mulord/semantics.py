"""Ground truth: evaluation, sign splitting, witness construction, integer checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from . import numtheory as nt
from .formula import (
    And,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Lt,
    Monomial,
    Not,
    Or,
    Pow,
    Top,
    conj,
    disj,
    dnf_clauses,
    eq,
    free_vars,
    is_quantifier_free,
    lt,
    monomials,
    substitute,
    to_nnf,
)
from .qe import ClassifiedConstraints, classify, eliminate_all, unify_powers
from .syntax import UnsupportedConstruct

DOMAINS = ("qpos", "q")


@dataclass(frozen=True)
class SignedValue:
    sign: str  # "neg", "zero" or "pos"
    magnitude: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.sign not in ("neg", "zero", "pos"):
            raise ValueError(f"bad sign {self.sign!r}")
        if (self.magnitude is None) != (self.sign == "zero"):
            raise ValueError("magnitude must be given exactly when the sign is nonzero")
        if self.magnitude is not None and self.magnitude <= 0:
            raise ValueError("magnitude must be positive")

    @classmethod
    def of(cls, r) -> SignedValue:
        r = Fraction(r)
        if r == 0:
            return cls("zero")
        return cls("pos" if r > 0 else "neg", abs(r))

    def value(self) -> Fraction:
        if self.sign == "zero":
            return Fraction(0)
        return self.magnitude if self.sign == "pos" else -self.magnitude


Value = Union[int, Fraction, SignedValue]


# -- ground evaluation -----------------------------------------------------


def _term_value(m: Monomial, env: Mapping[str, Fraction]) -> Fraction:
    out = m.coeff
    for v, e in m.powers:
        if v not in env:
            raise ValueError(f"unassigned variable {v!r}")
        base = env[v]
        if base == 0 and e < 0:
            raise ValueError(f"inverse of zero: {v} = 0 with exponent {e}")
        out *= base**e
    return out


def power_holds(value: Fraction, n: int, domain: str) -> bool:
    """``R_n(value)``; over all rationals odd roots keep the sign and 0 is every power."""
    if domain == "qpos":
        return nt.is_nth_power(value, n)
    if value == 0:
        return True
    if value < 0:
        return n % 2 == 1 and nt.is_nth_power(-value, n)
    return nt.is_nth_power(value, n)


def eval_ground(f: Formula, domain: str = "qpos", valuation: Optional[Mapping[str, Value]] = None) -> bool:
    """Truth of a quantifier-free formula under a total assignment of its variables."""
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    env: Dict[str, Fraction] = {}
    for k, v in (valuation or {}).items():
        v = v.value() if isinstance(v, SignedValue) else Fraction(v)
        if domain == "qpos" and v <= 0:
            raise ValueError(f"{k} = {v} is not a positive rational")
        env[k] = v
    return _eval(f, domain, env)


def _eval(f: Formula, domain: str, env: Mapping[str, Fraction]) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Eq):
        return _term_value(f.lhs, env) == _term_value(f.rhs, env)
    if isinstance(f, Lt):
        return _term_value(f.lhs, env) < _term_value(f.rhs, env)
    if isinstance(f, Pow):
        v = _term_value(f.arg, env)
        if domain == "qpos" and v <= 0:
            raise ValueError(f"power predicate on non-positive value {v}")
        return power_holds(v, f.n, domain)
    if isinstance(f, Not):
        return not _eval(f.arg, domain, env)
    if isinstance(f, And):
        return all(_eval(a, domain, env) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, domain, env) for a in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.lhs, domain, env)) or _eval(f.rhs, domain, env)
    if isinstance(f, (Exists, Forall)):
        raise ValueError("eval_ground needs a quantifier-free formula")
    raise TypeError(f"not a formula: {f!r}")


# -- full rationals by sign splitting ---------------------------------------


def _check_full_q(f: Formula) -> None:
    for node in _nodes(f):
        if isinstance(node, Pow):
            raise UnsupportedConstruct("power predicates are not part of the full-rational language")
    for m in monomials(f):
        if any(e < 0 for _, e in m.powers):
            raise UnsupportedConstruct("inverses are not part of the full-rational language")


def _nodes(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from _nodes(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _nodes(a)
    elif isinstance(f, Implies):
        yield from _nodes(f.lhs)
        yield from _nodes(f.rhs)
    elif isinstance(f, (Exists, Forall)):
        yield from _nodes(f.body)


def _sign(c: Fraction) -> int:
    return (c > 0) - (c < 0)


def _magnitude(m: Monomial) -> Monomial:
    return Monomial(abs(m.coeff), m.powers)


def _split_atom(f: Formula) -> Formula:
    su, sv = _sign(f.lhs.coeff), _sign(f.rhs.coeff)
    if isinstance(f, Eq):
        if su != sv:
            return Bottom()
        if su == 0:
            return Top()
        return eq(_magnitude(f.lhs), _magnitude(f.rhs))
    if su != sv:
        return Top() if su < sv else Bottom()
    if su == 0:
        return Bottom()
    a, b = _magnitude(f.lhs), _magnitude(f.rhs)
    return lt(a, b) if su > 0 else lt(b, a)


def signsplit(f: Formula) -> Formula:
    """Rewrite a sentence about all rationals as one about positive rationals.

    Each quantified variable splits into a negative, zero and positive case.
    In the negative case ``x`` is replaced by ``-x`` and then ranges over the
    positives, so every term ends up as a signed coefficient times a positive
    magnitude and each atom can be decided on signs alone or reduced to the
    magnitudes.
    """
    _check_full_q(f)
    if free_vars(f):
        raise ValueError(f"signsplit needs a sentence; free variables {sorted(free_vars(f))}")
    return _split(f)


def _split(f: Formula) -> Formula:
    if isinstance(f, (Exists, Forall)):
        x = f.var
        cases = (
            substitute(f.body, x, Monomial.make(-1, {x: 1})),
            substitute(f.body, x, Monomial.const(0)),
            f.body,
        )
        neg_case, zero_case, pos_case = (_split(c) for c in cases)
        if isinstance(f, Exists):
            return disj(Exists(x, neg_case), zero_case, Exists(x, pos_case))
        return conj(Forall(x, neg_case), zero_case, Forall(x, pos_case))
    if isinstance(f, (Eq, Lt)):
        return _split_atom(f)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_split(f.arg))
    if isinstance(f, And):
        return conj(*(_split(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(_split(a) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_split(f.lhs), _split(f.rhs))
    raise TypeError(f"not a formula: {f!r}")


def decide(sentence: Formula, domain: str = "qpos") -> bool:
    """Truth value of a sentence over the positive rationals or over all rationals."""
    return decide_with_trace(sentence, domain)[0]


def decide_with_trace(sentence: Formula, domain: str = "qpos"):
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    if free_vars(sentence):
        raise ValueError(f"not a sentence; free variables {sorted(free_vars(sentence))}")
    if domain == "q":
        sentence = signsplit(sentence)
    qf, trace = eliminate_all(sentence)
    return eval_ground(qf, "qpos", {}), trace


# -- witnesses -------------------------------------------------------------


def rational_power_between(a: Fraction, b: Fraction, n: int) -> Fraction:
    """The simplest rational g > 0 with ``a < g**n < b``.

    Stern-Brocot descent toward the open interval between the real n-th roots
    of a and b, comparing exact powers only.  Runs of steps in one direction
    are taken in a single jump found by doubling and bisection.
    """
    a, b = Fraction(a), Fraction(b)
    if not 0 < a < b or n < 1:
        raise ValueError(f"need 0 < a < b and n >= 1, got a={a}, b={b}, n={n}")

    def side(p: int, q: int) -> int:
        v = Fraction(p, q) ** n
        return -1 if v <= a else (1 if v >= b else 0)

    def longest_run(ok) -> int:
        k = 1
        while ok(2 * k):
            k *= 2
        lo, hi = k, 2 * k  # ok(lo) holds, ok(hi) fails
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
        return lo

    lp, lq, hp, hq = 0, 1, 1, 0
    while True:
        p, q = lp + hp, lq + hq
        c = side(p, q)
        if c == 0:
            return Fraction(p, q)
        if c < 0:
            k = longest_run(lambda k: side(lp + k * hp, lq + k * hq) < 0)
            lp, lq = lp + k * hp, lq + k * hq
        else:
            k = longest_run(lambda k: side(k * lp + hp, k * lq + hq) > 0)
            hp, hq = k * lp + hp, k * lq + hq


@dataclass(frozen=True)
class WitnessRecipe:
    """Ingredients of the witness ``x = (P * d**M)**N * t`` for a bucketed existential.

    ``M`` only has to be a common multiple of the negated-power indices; the
    lcm keeps the witness small.  ``power_interval`` is the open interval the
    witness must land in, with a missing bound replaced by a finite one.
    """

    N: int
    t: Fraction
    M: int
    P: int
    power_interval: Tuple[Fraction, Fraction]
    delta: Fraction

    @property
    def x(self) -> Fraction:
        return (self.P * self.delta**self.M) ** self.N * self.t


def _ground(m: Monomial, env: Mapping[str, Fraction]) -> Fraction:
    return _term_value(m, env)


def witness_recipe(c: ClassifiedConstraints, valuation: Mapping[str, Value]) -> Optional[WitnessRecipe]:
    """Build the witness recipe for unified constraints, or None when none can exist.

    Solvability of the power constraints is checked prime by prime with the
    congruence solver, independently of the symbolic pairwise conditions the
    elimination emits.
    """
    env = {k: Fraction(v.value() if isinstance(v, SignedValue) else v) for k, v in valuation.items()}
    if any(a.e != 1 for a in c.constraints()):
        raise ValueError("constraints must be unified to the first power")
    lows = [_ground(a.r, env) for a in c.lowers]
    highs = [_ground(a.s, env) for a in c.uppers]
    lo = max(lows) if lows else None
    hi = min(highs) if highs else None
    if lo is not None and hi is not None and lo >= hi:
        return None

    ts = [_ground(a.t, env) for a in c.pos_pows]
    ns = [a.n for a in c.pos_pows]
    t_vals = [nt.factor_rational(t) for t in ts]
    for prime in sorted(set().union(*t_vals)) if t_vals else ():
        system = nt.CongruenceSystem(tuple(v.get(prime, 0) for v in t_vals), tuple(ns))
        if nt.solve_congruences(system) is None:
            return None
    if ts:
        uc = nt.unit_combination(ns)
        big_n = uc.modulus_lcm
        t = Fraction(1)
        for tk, nu in zip(ts, uc.exponents):
            t *= tk ** (-nu)
    else:
        big_n, t = 1, Fraction(1)

    us = [_ground(a.u, env) for a in c.neg_pows]
    big_m = nt.lcm(a.m for a in c.neg_pows)
    prime = nt.next_prime_avoiding(t_vals + [nt.factor_rational(u) for u in us])
    # x = P^N * d^(N*M) * t must lie strictly between lo and hi; a missing
    # bound is replaced by any finite one on the open side
    scale = Fraction(prime) ** big_n * t
    a = lo / scale if lo is not None else None
    b = hi / scale if hi is not None else None
    if a is None and b is None:
        a, b = Fraction(1, 2), Fraction(2)
    elif a is None:
        a = b / 2
    elif b is None:
        b = 2 * a
    delta = rational_power_between(a, b, big_n * big_m)
    return WitnessRecipe(big_n, t, big_m, prime, (a * scale, b * scale), delta)


def construct_witness(c: ClassifiedConstraints, valuation: Mapping[str, Value]) -> Optional[Fraction]:
    """A verified x satisfying every unified constraint, or None."""
    env = {k: Fraction(v.value() if isinstance(v, SignedValue) else v) for k, v in valuation.items()}
    if not _eval(conj(*c.residue), "qpos", env):
        return None
    if c.equalities:
        x = _ground(c.equalities[0].rhs, env)
    else:
        recipe = witness_recipe(c, env)
        if recipe is None:
            return None
        x = recipe.x
    if not _eval(c.matrix(), "qpos", {**env, c.var: x}):
        return None
    return x


def find_witness(f: Exists, valuation: Mapping[str, Value]) -> Optional[Fraction]:
    """Witness for ``exists x. body`` under a valuation of the parameters.

    The body is split into disjuncts; each is bucketed, unified and handed to
    :func:`construct_witness`.  A candidate is returned only after it passes
    direct evaluation of the original body.
    """
    if not isinstance(f, Exists) or not is_quantifier_free(f.body):
        raise ValueError("find_witness needs exists x. <quantifier-free body>")
    env = {k: Fraction(v.value() if isinstance(v, SignedValue) else v) for k, v in valuation.items()}
    for clause in dnf_clauses(to_nnf(f.body)):
        unified = unify_powers(classify(clause, f.var))
        y = construct_witness(unified, env)
        if y is None:
            continue
        x = nt.nth_root(y, unified.scale)
        if x is not None and _eval(f.body, "qpos", {**env, f.var: x}):
            return x
    return None


# -- integers: addition from multiplication and order ------------------------


def tarski_sum_holds(x: int, y: int, z: int) -> bool:
    """Right-hand side of the definition of ``x + y = z`` from product and successor."""
    if z == 0:
        return (x + 1) * (y + 1) == x * y + 1
    return (z * x + 1) * (z * y + 1) == z * z * (x * y + 1) + 1


def negation_def_holds(x: int, y: int) -> bool:
    """``S(x) * S(y) = S(x * y)``, which holds exactly when ``x = -y``."""
    return (x + 1) * (y + 1) == x * y + 1


@dataclass
class DefinabilityReport:
    checked: int
    mismatches: List[Tuple[int, int, int]] = field(default_factory=list)

    def lines(self) -> List[str]:
        out = [f"checked={self.checked} mismatches={len(self.mismatches)}"]
        out += [f"x={x} y={y} z={z}" for x, y, z in self.mismatches]
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def check_addition_definability(bound: int) -> DefinabilityReport:
    """Compare the product/successor definition with ``x + y = z`` on ``[-bound, bound]^3``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = range(-bound, bound + 1)
    mismatches = []
    checked = 0
    for x in rng:
        for y in rng:
            s = x + y
            for z in rng:
                if tarski_sum_holds(x, y, z) != (s == z):
                    mismatches.append((x, y, z))
            checked += len(rng)
    mismatches.sort()
    return DefinabilityReport(checked, mismatches)


def _compile_int(f: Formula) -> Callable[[Dict[str, int], range], bool]:
    """Closure evaluating ``f`` over integers, quantifiers ranging over the given range."""

    def term(m: Monomial) -> Callable[[Dict[str, int]], int]:
        if m.coeff.denominator != 1 or any(e < 0 for _, e in m.powers):
            raise UnsupportedConstruct(f"term {m} is not an integer polynomial term")
        c = m.coeff.numerator
        ps = m.powers

        def value(env: Dict[str, int]) -> int:
            out = c
            for v, e in ps:
                out *= env[v] ** e
            return out

        return value

    if isinstance(f, Top):
        return lambda env, dom: True
    if isinstance(f, Bottom):
        return lambda env, dom: False
    if isinstance(f, (Eq, Lt)):
        lhs, rhs = term(f.lhs), term(f.rhs)
        if isinstance(f, Eq):
            return lambda env, dom: lhs(env) == rhs(env)
        return lambda env, dom: lhs(env) < rhs(env)
    if isinstance(f, Pow):
        raise UnsupportedConstruct("power predicates are not part of the integer language")
    if isinstance(f, Not):
        g = _compile_int(f.arg)
        return lambda env, dom: not g(env, dom)
    if isinstance(f, (And, Or)):
        parts = [_compile_int(a) for a in f.args]
        if isinstance(f, And):
            return lambda env, dom: all(p(env, dom) for p in parts)
        return lambda env, dom: any(p(env, dom) for p in parts)
    if isinstance(f, Implies):
        a, b = _compile_int(f.lhs), _compile_int(f.rhs)
        return lambda env, dom: (not a(env, dom)) or b(env, dom)
    if isinstance(f, (Exists, Forall)):
        body = _compile_int(f.body)
        x = f.var
        quant = any if isinstance(f, Exists) else all

        def run(env: Dict[str, int], dom: range) -> bool:
            inner = dict(env)

            def at(w: int) -> bool:
                inner[x] = w
                return body(inner, dom)

            return quant(at(w) for w in dom)

        return run
    raise TypeError(f"not a formula: {f!r}")


def eval_bounded_z(f: Formula, bound: int, valuation: Optional[Mapping[str, int]] = None) -> bool:
    """Truth over the integers with every quantifier restricted to ``[-bound, bound]``."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    env = dict(valuation or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise ValueError(f"unassigned variables {sorted(missing)}")
    return _compile_int(f)(env, range(-bound, bound + 1))
