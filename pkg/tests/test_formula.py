import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mulord.formula import (
    And,
    Eq,
    Exists,
    Forall,
    Implies,
    LowerBound,
    Lt,
    Monomial,
    Not,
    Or,
    PosPow,
    Pow,
    TRUE,
    UpperBound,
    XEq,
    XFree,
    distribute_exists,
    free_vars,
    is_quantifier_free,
    isolate,
    isolated_formula,
    substitute,
    to_nnf,
)
from mulord.fuzz import random_atom, random_formula, random_one_quantifier
from mulord.semantics import eval_ground
from mulord.syntax import ParseError, UnsupportedConstruct, parse, parse_term, to_text

from helpers import POSITIVE_POOL, alpha_key, pool_eval, random_valuation

x, y, a, b = (Monomial.var(v) for v in "xyab")
ONE = Monomial.const(1)


def m(text):
    return parse_term(text)


# parse


def test_parse_existential_example():
    f = parse("exists x. 1 < x & x < 2 & R[2](x)")
    assert f == Exists("x", And((Lt(ONE, x), Lt(x, Monomial.const(2)), Pow(2, x))))


def test_parse_folds_exponents():
    assert parse_term("x^2 * y * x^-2") == Monomial.make(1, {"y": 1})
    assert parse_term("inv(x*y^2) * 4/9") == Monomial.make(Fraction(4, 9), {"x": -1, "y": -2})


def test_parse_forall_implies():
    f = parse("forall x. R[2](x) -> R[2](4/9 * x)")
    assert f == Forall("x", Implies(Pow(2, x), Pow(2, Monomial.make(Fraction(4, 9), {"x": 1}))))


def test_parse_precedence():
    f = parse("!R[2](a) & b < a | a = b -> a < 1")
    assert f == Implies(Or((And((Not(Pow(2, a)), Lt(b, a))), Eq(a, b))), Lt(a, ONE))


def test_parse_le_sugar():
    assert parse("a <= b") == Or((Lt(a, b), Eq(a, b)))


def test_parse_parenthesized_term_and_group():
    assert parse("(a*b)^2 < 3") == Lt(Monomial.make(1, {"a": 2, "b": 2}), Monomial.const(3))
    assert parse("(a < b) & (b < 2)") == And((Lt(a, b), Lt(b, Monomial.const(2))))


def test_parse_alpha_renames_bound_variables():
    f = parse("x < 1 & (exists x. x < 2) & (exists x. 2 < x)")
    assert f == And((
        Lt(x, ONE),
        Exists("x_1", Lt(Monomial.var("x_1"), Monomial.const(2))),
        Exists("x_2", Lt(Monomial.const(2), Monomial.var("x_2"))),
    ))


@pytest.mark.parametrize(
    "text, line, column",
    [("a < ", 1, 5), ("a <\n & b", 2, 2), ("R[1](a)", 1, 3), ("a ? b", 1, 3), ("exists 1. a < b", 1, 8)],
)
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("text", ["0 < x", "-1 < x", "x < 0*y"])
def test_qpos_rejects_nonpositive_constants(text):
    with pytest.raises(UnsupportedConstruct):
        parse(text, "qpos")


@pytest.mark.parametrize("text", ["inv(x) = 1", "x^-1 = 1", "R[2](x)"])
def test_full_q_rejects_inverse_and_powers(text):
    with pytest.raises(UnsupportedConstruct):
        parse(text, "q")


def test_full_q_accepts_zero_and_negatives():
    assert parse("x*0 = -3/2", "q") == Eq(Monomial.const(0), Monomial.const(Fraction(-3, 2)))


# print


def test_print_constants_and_r1():
    assert to_text(TRUE) == "true"
    assert to_text(Pow(1, a)) == "true"
    assert to_text(And(())) == "true"
    assert to_text(Or(())) == "false"


def test_print_examples():
    assert to_text(parse("exists x. 4/9*x^-2 < a & !R[3](x)")) == "exists x. 4/9*x^-2 < a & !R[3](x)"
    assert to_text(And((Exists("x", Lt(x, a)), Lt(a, b)))) == "(exists x. x < a) & a < b"
    assert to_text(Implies(Implies(Lt(a, b), Lt(b, a)), Lt(a, b))) == "(a < b -> b < a) -> a < b"


@pytest.mark.parametrize("seed", range(200))
def test_print_parse_round_trip(seed):
    rng = random.Random(seed)
    f = random_formula(rng, depth=4)
    g = parse(to_text(f))
    assert alpha_key(g) == alpha_key(f)


@pytest.mark.parametrize("seed", range(50))
def test_print_parse_round_trip_full_q(seed):
    rng = random.Random(seed)
    f = random_formula(rng, depth=3, domain="q")
    assert alpha_key(parse(to_text(f), "q")) == alpha_key(f)


# to_nnf


def test_nnf_negated_equality():
    assert to_nnf(Not(Eq(a, b))) == Or((Lt(a, b), Lt(b, a)))


def test_nnf_negated_order():
    assert to_nnf(Not(Lt(a, b))) == Or((Eq(a, b), Lt(b, a)))


def test_nnf_forall():
    assert to_nnf(parse("forall x. R[2](x)")) == Not(Exists("x", Not(Pow(2, x))))


def _nnf_shape_ok(f):
    if isinstance(f, (Implies, Forall)):
        return False
    if isinstance(f, Not):
        return isinstance(f.arg, (Pow, Exists)) and _nnf_shape_ok(f.arg)
    if isinstance(f, (And, Or)):
        return all(_nnf_shape_ok(c) for c in f.args)
    if isinstance(f, Exists):
        return _nnf_shape_ok(f.body)
    return True


def _nnf_qf_shape_ok(f):
    if isinstance(f, Not):
        return isinstance(f.arg, Pow)
    if isinstance(f, (And, Or)):
        return all(_nnf_qf_shape_ok(c) for c in f.args)
    return not isinstance(f, (Implies, Forall, Exists))


@pytest.mark.parametrize("seed", range(200))
def test_nnf_and_distribute_preserve_truth(seed):
    rng = random.Random(1000 + seed)
    f = random_formula(rng, depth=3, free=("a", "b"))
    g = to_nnf(f)
    assert _nnf_shape_ok(g)
    if is_quantifier_free(f):
        assert _nnf_qf_shape_ok(g)
    h = distribute_exists(g)
    env = random_valuation(rng, sorted(free_vars(f)))
    expected = pool_eval(f, env, POSITIVE_POOL)
    assert pool_eval(g, env, POSITIVE_POOL) == expected
    assert pool_eval(h, env, POSITIVE_POOL) == expected


# distribute_exists


def test_distribute_over_or():
    A, B = Lt(x, a), Pow(2, x)
    assert distribute_exists(Exists("x", Or((A, B)))) == Or((Exists("x", A), Exists("x", B)))


def test_distribute_over_and_of_or():
    A, B, C = Lt(x, a), Pow(2, x), Lt(b, x)
    got = distribute_exists(Exists("x", And((A, Or((B, C))))))
    assert got == Or((Exists("x", And((A, B))), Exists("x", And((A, C)))))


def test_distribute_hoists_x_free():
    A = Lt(a, b)
    assert distribute_exists(Exists("x", A)) == A
    got = distribute_exists(Exists("x", And((A, Lt(x, a)))))
    assert got == And((A, Exists("x", Lt(x, a))))


def test_distribute_bodies_are_literal_conjunctions():
    rng = random.Random(7)
    for _ in range(100):
        f = distribute_exists(to_nnf(random_one_quantifier(rng)))
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Exists):
                lits = g.body.args if isinstance(g.body, And) else (g.body,)
                assert all(isinstance(lit, (Eq, Lt, Pow)) or isinstance(lit, Not) and isinstance(lit.arg, Pow) for lit in lits)
                assert all("x" in free_vars(lit) for lit in lits)
            elif isinstance(g, (And, Or)):
                stack.extend(g.args)
            elif isinstance(g, Not):
                stack.append(g.arg)


# isolate


def test_isolate_lower_to_upper():
    assert isolate(Lt(a, m("x^-2")), "x") == UpperBound(a.inverse(), 2)


def test_isolate_power_with_negative_exponent():
    assert isolate(Pow(3, m("a*x^-2")), "x") == PosPow(3, a.inverse(), 2)


def test_isolate_cancelling_exponents():
    assert isolate(Eq(m("x^2*a"), m("x^2*b")), "x") == XFree(Eq(a, b))


def test_isolate_shapes():
    assert isolate(Eq(m("x^2"), a), "x") == XEq(2, a)
    assert isolate(Eq(a, m("x^-3*b")), "x") == XEq(3, m("b*a^-1"))
    assert isolate(Lt(m("a^2"), m("x^3")), "x") == LowerBound(m("a^2"), 3)
    assert isolate(Lt(m("x^2*b"), m("x*a")), "x") == UpperBound(m("a*b^-1"), 1)


@pytest.mark.parametrize("seed", range(100))
def test_isolate_preserves_truth(seed):
    rng = random.Random(seed)
    atom = random_atom(rng, ["x", "a", "b"])
    if rng.random() < 0.3 and isinstance(atom, Pow):
        atom = Not(atom)
    iso = isolated_formula(isolate(atom, "x"), "x")
    for _ in range(50):
        env = random_valuation(rng, ["x", "a", "b"])
        assert eval_ground(iso, "qpos", env) == eval_ground(atom, "qpos", env)


# substitute


def test_substitute_examples():
    assert substitute(Lt(x, a), "x", m("b^2")) == Lt(m("b^2"), a)
    assert substitute(Pow(2, m("x*a")), "x", a) == Pow(2, m("a^2"))
    assert substitute(Eq(x, x), "x", m("a*b")) == TRUE


def test_substitute_respects_binders():
    f = And((Lt(x, a), Exists("x", Lt(x, b))))
    assert substitute(f, "x", b) == And((Lt(b, a), Exists("x", Lt(x, b))))


# monomial algebra

monos = st.builds(
    lambda c, ex: Monomial.make(c, dict(zip("xyz", ex))),
    st.fractions(min_value=Fraction(1, 50), max_value=50),
    st.lists(st.integers(-4, 4), min_size=3, max_size=3),
)


@given(monos, monos, monos)
def test_monomial_product_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * Monomial.const(1) == p


@given(monos)
def test_monomial_inverse(p):
    assert p.inverse().inverse() == p
    assert p * p.inverse() == Monomial.const(1)
    assert all(e != 0 for _, e in p.powers)
