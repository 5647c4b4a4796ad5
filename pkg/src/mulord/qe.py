"""Quantifier elimination over the positive rationals.

One existential at a time, innermost first: put the body in negation normal
form, split it into disjuncts, isolate the bound variable in each literal,
sort the literals into buckets, raise everything to a common power of the
variable, then write down the quantifier-free equivalent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from . import numtheory as nt
from .formula import (
    ONE,
    And,
    Exists,
    Forall,
    Formula,
    Implies,
    LowerBound,
    Monomial,
    NegPow,
    Not,
    Or,
    PosPow,
    UpperBound,
    XEq,
    conj,
    disj,
    distribute_exists,
    eq,
    is_quantifier_free,
    isolate,
    isolated_formula,
    lt,
    neg,
    power,
    to_nnf,
)

RULES = ("nnf", "distribute", "isolate", "unify_powers", "subst_equality", "emit_qf")


@dataclass(frozen=True)
class TraceStep:
    rule: str
    before: Formula
    after: Formula

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")


@dataclass
class ClassifiedConstraints:
    """The conjuncts of one existential, sorted by how they mention ``var``.

    ``scale`` is the power the variable was raised to by :func:`unify_powers`
    (the bound variable of the unified form stands for ``var ** scale``).
    """

    var: str
    equalities: List[XEq] = field(default_factory=list)
    lowers: List[LowerBound] = field(default_factory=list)
    uppers: List[UpperBound] = field(default_factory=list)
    pos_pows: List[PosPow] = field(default_factory=list)
    neg_pows: List[NegPow] = field(default_factory=list)
    residue: List[Formula] = field(default_factory=list)
    scale: int = 1

    def constraints(self) -> list:
        return [*self.equalities, *self.lowers, *self.uppers, *self.pos_pows, *self.neg_pows]

    def matrix(self) -> Formula:
        lits = [isolated_formula(a, self.var) for a in self.constraints()]
        return conj(*lits, *self.residue)

    def to_formula(self) -> Formula:
        return Exists(self.var, self.matrix())


def classify(conjuncts: Iterable, x: str) -> ClassifiedConstraints:
    """Bucket literals (or already isolated atoms) by their shape in ``x``."""
    out = ClassifiedConstraints(x)
    for item in conjuncts:
        a = isolate(item, x) if isinstance(item, Formula) else item
        if isinstance(a, XEq):
            out.equalities.append(a)
        elif isinstance(a, LowerBound):
            out.lowers.append(a)
        elif isinstance(a, UpperBound):
            out.uppers.append(a)
        elif isinstance(a, PosPow):
            out.pos_pows.append(a)
        elif isinstance(a, NegPow):
            out.neg_pows.append(a)
        else:
            out.residue.append(a.literal)
    return out


def unify_powers(c: ClassifiedConstraints) -> ClassifiedConstraints:
    """Raise every constraint so the variable appears as ``x^p``, then rename ``x^p`` to x.

    Uses ``a = b <-> a^q = b^q``, ``a < b <-> a^q < b^q`` and
    ``R_n(a) <-> R_{nq}(a^q)``, and adds ``R_p(x)`` for the new variable.
    """
    exps = [a.e for a in c.constraints()]
    if any(e < 1 for e in exps):
        raise ValueError("exponents of the eliminated variable must be positive")
    p = nt.lcm(exps)
    out = ClassifiedConstraints(c.var, residue=list(c.residue), scale=c.scale * p)
    for a in c.equalities:
        out.equalities.append(XEq(1, a.rhs ** (p // a.e)))
    for a in c.lowers:
        out.lowers.append(LowerBound(a.r ** (p // a.e), 1))
    for a in c.uppers:
        out.uppers.append(UpperBound(a.s ** (p // a.e), 1))
    for a in c.pos_pows:
        q = p // a.e
        out.pos_pows.append(PosPow(a.n * q, a.t**q, 1))
    for a in c.neg_pows:
        q = p // a.e
        out.neg_pows.append(NegPow(a.m * q, a.u**q, 1))
    if p > 1:
        out.pos_pows.append(PosPow(p, ONE, 1))
    return out


def witness_base(pos_pows: List[PosPow]) -> Tuple[int, Monomial]:
    """``(N, t)`` such that the solutions of all ``R_n(t_k * x)`` are ``x = g^N * t``.

    ``N`` is the lcm of the indices and ``t = prod t_k^(-nu_k)`` with the
    exponents from :func:`numtheory.unit_combination`.
    """
    if not pos_pows:
        return 1, ONE
    uc = nt.unit_combination([a.n for a in pos_pows])
    t = ONE
    for a, nu in zip(pos_pows, uc.exponents):
        t = t * a.t ** (-nu)
    return uc.modulus_lcm, t


def eliminate_one(c: ClassifiedConstraints) -> Formula:
    """Quantifier-free equivalent of ``exists var. matrix`` for unified constraints."""
    if any(a.e != 1 for a in c.constraints()):
        raise ValueError("constraints must be unified to the first power")
    if c.equalities:
        v0 = c.equalities[0].rhs
        return conj(
            *(eq(v0, a.rhs) for a in c.equalities[1:]),
            *(lt(a.r, v0) for a in c.lowers),
            *(lt(v0, a.s) for a in c.uppers),
            *(power(a.n, a.t * v0) for a in c.pos_pows),
            *(neg(power(a.m, a.u * v0)) for a in c.neg_pows),
            *c.residue,
        )
    bounds = [lt(lo.r, up.s) for lo in c.lowers for up in c.uppers]
    pairs = [
        power(math.gcd(a.n, b.n), a.t / b.t)
        for i, a in enumerate(c.pos_pows)
        for b in c.pos_pows[i + 1 :]
    ]
    big_n, t = witness_base(c.pos_pows)
    # negated powers whose index does not divide N can always be dodged
    negs = [neg(power(a.m, a.u * t)) for a in c.neg_pows if big_n % a.m == 0]
    return conj(*bounds, *pairs, *negs, *c.residue)


def _eliminate_exists(x: str, body: Formula, trace: List[TraceStep]) -> Formula:
    nnf = to_nnf(body)
    trace.append(TraceStep("nnf", Exists(x, body), Exists(x, nnf)))
    spread = distribute_exists(Exists(x, nnf))
    trace.append(TraceStep("distribute", Exists(x, nnf), spread))
    return _replace_exists(spread, trace)


def _replace_exists(f: Formula, trace: List[TraceStep]) -> Formula:
    if isinstance(f, Exists):
        literals = f.body.args if isinstance(f.body, And) else (f.body,)
        isolated = [isolate(lit, f.var) for lit in literals]
        classified = classify(isolated, f.var)
        trace.append(TraceStep("isolate", f, classified.to_formula()))
        unified = unify_powers(classified)
        trace.append(TraceStep("unify_powers", classified.to_formula(), unified.to_formula()))
        result = eliminate_one(unified)
        rule = "subst_equality" if unified.equalities else "emit_qf"
        trace.append(TraceStep(rule, unified.to_formula(), result))
        return result
    if isinstance(f, And):
        return conj(*(_replace_exists(a, trace) for a in f.args))
    if isinstance(f, Or):
        return disj(*(_replace_exists(a, trace) for a in f.args))
    if isinstance(f, Not):
        return neg(_replace_exists(f.arg, trace))
    return f


def eliminate_all(f: Formula) -> Tuple[Formula, List[TraceStep]]:
    """Eliminate every quantifier, innermost first, recording each rewrite."""
    trace: List[TraceStep] = []

    def go(g: Formula) -> Formula:
        if is_quantifier_free(g):
            return g
        if isinstance(g, Exists):
            return _eliminate_exists(g.var, go(g.body), trace)
        if isinstance(g, Forall):
            return neg(_eliminate_exists(g.var, neg(go(g.body)), trace))
        if isinstance(g, Not):
            return neg(go(g.arg))
        if isinstance(g, And):
            return conj(*(go(a) for a in g.args))
        if isinstance(g, Or):
            return disj(*(go(a) for a in g.args))
        if isinstance(g, Implies):
            return disj(neg(go(g.lhs)), go(g.rhs))
        raise TypeError(f"not a formula: {g!r}")

    return go(f), trace


def eliminate(f: Formula) -> Formula:
    return eliminate_all(f)[0]
