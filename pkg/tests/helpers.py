"""Test-only utilities: finite-pool evaluation, random valuations, alpha-equivalence."""

from fractions import Fraction
import random

from mulord.formula import And, Bottom, Eq, Exists, Forall, Implies, Lt, Not, Or, Pow, Top
from mulord.semantics import power_holds


def pool_eval(f, env, pool, domain="qpos"):
    """Truth with every quantifier ranging over the finite ``pool``."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, (Eq, Lt, Pow)):
        val = lambda m: m.value(env)  # noqa: E731
        if isinstance(f, Eq):
            return val(f.lhs) == val(f.rhs)
        if isinstance(f, Lt):
            return val(f.lhs) < val(f.rhs)
        return power_holds(val(f.arg), f.n, domain)
    if isinstance(f, Not):
        return not pool_eval(f.arg, env, pool, domain)
    if isinstance(f, And):
        return all(pool_eval(a, env, pool, domain) for a in f.args)
    if isinstance(f, Or):
        return any(pool_eval(a, env, pool, domain) for a in f.args)
    if isinstance(f, Implies):
        return (not pool_eval(f.lhs, env, pool, domain)) or pool_eval(f.rhs, env, pool, domain)
    quant = any if isinstance(f, Exists) else all
    return quant(pool_eval(f.body, {**env, f.var: v}, pool, domain) for v in pool)


def small_positive(rng: random.Random) -> Fraction:
    out = Fraction(1)
    for p in (2, 3, 5):
        out *= Fraction(p) ** rng.randint(-2, 2)
    return out


def random_valuation(rng, names):
    return {n: small_positive(rng) for n in names}


POSITIVE_POOL = sorted({Fraction(p, q) for p in range(1, 9) for q in range(1, 9)} | {Fraction(4, 9), Fraction(27, 8)})


def alpha_key(f, env=None, counter=None):
    """Structure of ``f`` with bound variables replaced by their binding depth."""
    env = env or {}
    counter = counter if counter is not None else [0]
    if isinstance(f, (Exists, Forall)):
        name = f"#{counter[0]}"
        counter[0] += 1
        return (type(f).__name__, alpha_key(f.body, {**env, f.var: name}, counter))
    if isinstance(f, (Eq, Lt)):
        return (type(f).__name__, f.lhs.rename(env), f.rhs.rename(env))
    if isinstance(f, Pow):
        return ("Pow", f.n, f.arg.rename(env))
    if isinstance(f, Not):
        return ("Not", alpha_key(f.arg, env, counter))
    if isinstance(f, (And, Or)):
        return (type(f).__name__, tuple(alpha_key(a, env, counter) for a in f.args))
    if isinstance(f, Implies):
        return ("Implies", alpha_key(f.lhs, env, counter), alpha_key(f.rhs, env, counter))
    return (type(f).__name__,)
