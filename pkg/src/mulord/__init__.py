"""Decision procedure for multiplication and order over the rationals."""

from .formula import Formula, Monomial
from .qe import eliminate_all
from .semantics import decide, eval_ground
from .syntax import parse, to_text

__all__ = ["Formula", "Monomial", "decide", "eliminate_all", "eval_ground", "parse", "to_text"]
