"""Seeded random formulas and the differential check of elimination against witnesses."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

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
)
from .qe import eliminate_all
from .semantics import _eval, find_witness
from .syntax import to_text

COEFFS = [Fraction(c) for c in ("1", "2", "3", "4", "1/2", "1/3", "4/9", "8", "9/4", "27/8", "6")]
INDICES = (2, 3, 4, 6)
PARAMS = ("a", "b")


def case_rng(seed: int, index: int) -> random.Random:
    """Independent generator for case ``index`` so any case can be replayed alone."""
    return random.Random(seed * 1_000_003 + index)


# -- general formulas (parser round trip) ------------------------------------


def random_monomial(rng: random.Random, names: Sequence[str], domain: str = "qpos") -> Monomial:
    coeff = rng.choice(COEFFS)
    if domain == "q" and rng.random() < 0.3:
        coeff = -coeff
    powers: Dict[str, int] = {}
    for v in rng.sample(list(names), k=rng.randint(0, min(2, len(names)))):
        e = rng.choice((1, 1, 2, 3) if domain == "q" else (-2, -1, 1, 1, 2, 3))
        powers[v] = e
    return Monomial.make(coeff, powers)


def random_atom(rng: random.Random, names: Sequence[str], domain: str = "qpos") -> Formula:
    kind = rng.random()
    if kind < 0.35:
        return Lt(random_monomial(rng, names, domain), random_monomial(rng, names, domain))
    if kind < 0.55 or domain == "q":
        return Eq(random_monomial(rng, names, domain), random_monomial(rng, names, domain))
    return Pow(rng.choice(INDICES), random_monomial(rng, names, domain))


def random_formula(
    rng: random.Random,
    depth: int = 3,
    free: Sequence[str] = ("a", "b"),
    domain: str = "qpos",
    _bound: Sequence[str] = (),
    _fresh: Optional[List[int]] = None,
) -> Formula:
    """Arbitrary formula tree: every connective, nested quantifiers, fresh bound names.

    Bound variables occur only inside their quantifier and are never reused,
    so printing and re-parsing gives back the identical tree.
    """
    fresh = _fresh if _fresh is not None else [0]
    names = list(free) + list(_bound)
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.05:
            return Top()
        if r < 0.1:
            return Bottom()
        return random_atom(rng, names or ["a"], domain)
    k = rng.randrange(6)
    sub = lambda scope=tuple(_bound): random_formula(rng, depth - 1, free, domain, scope, fresh)  # noqa: E731
    if k == 0:
        return Not(sub())
    if k == 1:
        return And(tuple(sub() for _ in range(rng.randint(2, 3))))
    if k == 2:
        return Or(tuple(sub() for _ in range(rng.randint(2, 3))))
    if k == 3:
        return Implies(sub(), sub())
    var = f"x{fresh[0]}"
    fresh[0] += 1
    node = Exists if k == 4 else Forall
    return node(var, sub((*_bound, var)))


# -- one-quantifier formulas with parameters ---------------------------------


def random_parameter(rng: random.Random) -> Fraction:
    """A positive rational built from small primes."""
    out = Fraction(1)
    for p in (2, 3, 5):
        out *= Fraction(p) ** rng.randint(-2, 2)
    return out


def random_x_literal(rng: random.Random, x: str = "x") -> Formula:
    def mono(with_x: bool) -> Monomial:
        powers = {p: rng.choice((-1, 0, 0, 1, 2)) for p in PARAMS}
        if with_x:
            powers[x] = rng.choice((-2, -1, 1, 1, 1, 2, 3))
        return Monomial.make(rng.choice(COEFFS), powers)

    r = rng.random()
    if r < 0.3:
        a, b = mono(True), mono(rng.random() < 0.2)
        return Lt(a, b) if rng.random() < 0.5 else Lt(b, a)
    if r < 0.4:
        return Eq(mono(True), mono(False))
    atom = Pow(rng.choice(INDICES), mono(True))
    if r < 0.72:
        return atom
    return Not(atom)


def random_one_quantifier(rng: random.Random, x: str = "x") -> Exists:
    """``exists x. body`` where body is a small and/or/not combination of literals on x."""

    def clause() -> Formula:
        lits = [random_x_literal(rng, x) for _ in range(rng.randint(1, 4))]
        return lits[0] if len(lits) == 1 else And(tuple(lits))

    body = clause()
    r = rng.random()
    if r < 0.2:
        body = Or((body, clause()))
    elif r < 0.3:
        body = Not(clause())
    return Exists(x, body)


@dataclass
class CaseResult:
    index: int
    formula: Exists
    valuation: Dict[str, Fraction]
    qe_verdict: bool
    witness: Optional[Fraction]
    qf: Formula

    @property
    def agrees(self) -> bool:
        return self.qe_verdict == (self.witness is not None)

    def describe(self) -> str:
        vals = ", ".join(f"{k}={v}" for k, v in sorted(self.valuation.items()))
        return (
            f"case {self.index}: {to_text(self.formula)}  with {vals}\n"
            f"  eliminated: {to_text(self.qf)}\n"
            f"  qe verdict: {str(self.qe_verdict).lower()}  witness: {self.witness}"
        )


def run_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, index)
    f = random_one_quantifier(rng)
    valuation = {p: random_parameter(rng) for p in PARAMS}
    qf, _ = eliminate_all(f)
    verdict = _eval(qf, "qpos", valuation)
    witness = find_witness(f, valuation)
    return CaseResult(index, f, valuation, verdict, witness, qf)


def bounded_refutation(f: Exists, valuation: Dict[str, Fraction], height: int = 30) -> Optional[Fraction]:
    """Search x = p/q (p, q <= height) times parameter monomials; return a satisfying x if any."""
    multipliers = {Fraction(1)}
    for v in valuation.values():
        multipliers |= {v, 1 / v, v * v, 1 / (v * v)}
    for q in range(1, height + 1):
        for p in range(1, height + 1):
            if math.gcd(p, q) != 1:
                continue
            for m in multipliers:
                x = Fraction(p, q) * m
                if _eval(f.body, "qpos", {**valuation, f.var: x}):
                    return x
    return None


@dataclass
class FuzzReport:
    seed: int
    iterations: int
    passed: int = 0
    failures: List[CaseResult] = field(default_factory=list)
    true_cases: int = 0

    @property
    def failed(self) -> int:
        return len(self.failures)

    def lines(self) -> List[str]:
        out = [f"passed={self.passed} failed={self.failed}"]
        if self.failures:
            first = self.failures[0]
            out.append(first.describe())
            out.append(f"reproduce: mulord fuzz --seed {self.seed} --iters {first.index + 1}")
        return out


def run_fuzz(seed: int, iterations: int) -> FuzzReport:
    report = FuzzReport(seed, iterations)
    for i in range(iterations):
        case = run_case(seed, i)
        if case.agrees:
            report.passed += 1
            report.true_cases += case.qe_verdict
        else:
            report.failures.append(case)
    return report
