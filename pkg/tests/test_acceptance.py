"""Acceptance criteria; each test prints one PASS/FAIL line with its measurement."""

import random
import time
from fractions import Fraction

import pytest

from mulord import numtheory as nt
from mulord.formula import Exists
from mulord.fuzz import random_formula, run_fuzz
from mulord.semantics import (
    check_addition_definability,
    decide,
    eval_bounded_z,
    eval_ground,
    find_witness,
    negation_def_holds,
)
from mulord.syntax import parse, to_text


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nacceptance {number}: {'PASS' if ok else 'FAIL'} {detail}")

    return emit


def test_1_addition_definable_on_integers(report):
    start = time.perf_counter()
    result = check_addition_definability(40)
    elapsed = time.perf_counter() - start
    ok = result.checked == 81**3 and not result.mismatches and elapsed < 10
    report(1, ok, f"checked={result.checked} mismatches={len(result.mismatches)} in {elapsed:.2f}s")
    assert ok


def test_2_negation_definition(report):
    rng = range(-1000, 1001)
    mismatches = sum(negation_def_holds(x, y) != (x == -y) for x in rng for y in rng)
    report(2, mismatches == 0, f"pairs={len(rng) ** 2} mismatches={mismatches}")
    assert mismatches == 0


def test_3_successor_from_order(report):
    f = parse("forall w. (u < w -> v <= w) & (v <= w -> u < w)", "q")
    rng = range(-49, 50)
    mismatches = [
        (u, v) for u in rng for v in rng if eval_bounded_z(f, 50, {"u": u, "v": v}) != (v == u + 1)
    ]
    report(3, not mismatches, f"pairs={len(rng) ** 2} mismatches={len(mismatches)}")
    assert not mismatches


QE_SUITE = [
    ("exists x. R[2](x) & R[3](x) & !R[6](x)", False),
    ("exists x. R[2](2*x) & R[3](4*x)", True),
    ("exists x. 1 < x & x < 9/8 & R[5](x)", True),
    ("forall x. exists y. x < y & R[2](inv(x)*y)", True),
    ("exists x. R[2](x) & !R[2](x)", False),
]


def _oracle(f):
    """Witness-oracle verdict; a universal is sampled over a grid of outer values."""
    if isinstance(f, Exists):
        return find_witness(f, {}) is not None
    inner = f.body
    grid = {Fraction(p, q) for p in range(1, 13) for q in range(1, 13)}
    return all(find_witness(inner, {f.var: v}) is not None for v in grid)


def test_4_qe_sentence_suite(report):
    sentences = [(parse(text), want) for text, want in QE_SUITE]
    start = time.perf_counter()
    verdicts = [decide(f) for f, _ in sentences]
    elapsed = time.perf_counter() - start
    correct = [v is want for v, (_, want) in zip(verdicts, sentences)]
    oracle = [_oracle(f) is want for f, want in sentences]
    w = find_witness(sentences[1][0], {})
    witness_ok = w is not None and nt.is_nth_power(w / 2, 6) and eval_ground(sentences[1][0].body, "qpos", {"x": w})
    ok = all(correct) and all(oracle) and witness_ok and elapsed < 1
    report(4, ok, f"correct={sum(correct)}/5 oracle={sum(oracle)}/5 witness={w} in {elapsed:.3f}s")
    assert ok


def test_5_differential_fuzz(report):
    start = time.perf_counter()
    result = run_fuzz(seed=0, iterations=600)
    elapsed = time.perf_counter() - start
    ok = result.iterations >= 500 and not result.failures and elapsed < 60
    detail = f"cases={result.iterations} agree={result.passed} true_with_witness={result.true_cases} in {elapsed:.2f}s"
    report(5, ok, detail)
    assert ok, "\n".join(result.lines())


FULL_Q_SUITE = [
    ("forall x. exists y. y*y = x", False),
    ("forall x. exists y. y*y*y = x", False),
    ("forall x. forall y. x*y = y*x", True),
    ("exists x. x*x = x & !(x = 1)", True),
]


def test_6_full_rationals(report):
    start = time.perf_counter()
    verdicts = [decide(parse(text, "q"), "q") for text, _ in FULL_Q_SUITE]
    elapsed = time.perf_counter() - start
    correct = sum(v is want for v, (_, want) in zip(verdicts, FULL_Q_SUITE))
    ok = correct == len(FULL_Q_SUITE) and elapsed < 1
    report(6, ok, f"correct={correct}/4 in {elapsed:.3f}s")
    assert ok


def test_7_ground_power_predicate(report):
    found = {n: set() for n in range(2, 7)}
    for n in range(2, 7):
        for p in range(1, 201):
            for q in range(1, 201):
                r = Fraction(p, q) ** n
                if r.numerator <= 100 and r.denominator <= 100:
                    found[n].add(r)
    rationals = {Fraction(p, q) for p in range(1, 101) for q in range(1, 101)}
    disagreements = [(r, n) for r in rationals for n in range(2, 7) if nt.is_nth_power(r, n) != (r in found[n])]
    report(7, not disagreements, f"pairs={len(rationals) * 5} disagreements={len(disagreements)}")
    assert not disagreements


def test_8_parse_print_round_trip(report):
    failures = []
    for seed in range(1000):
        f = random_formula(random.Random(seed), depth=4)
        if parse(to_text(f)) != f:
            failures.append(seed)
    report(8, not failures, f"formulas=1000 failures={len(failures)}")
    assert not failures
