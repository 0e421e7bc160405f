"""Hypothesis strategies for random expression trees and points."""

import math

from hypothesis import strategies as st

from bergman_dual.conformal import MobiusMap
from bergman_dual.fncore import Const, MobiusComp, Pow, Prod, ScaleArg, ShiftArg, Sum, Var

finite = dict(allow_nan=False, allow_infinity=False)
coeff = st.complex_numbers(max_magnitude=3, min_magnitude=0.2, **finite)
upper = st.builds(complex, st.floats(-3, 3, **finite), st.floats(0.2, 3, **finite))


@st.composite
def mobius_maps(draw):
    a, b, c, d = (draw(coeff) for _ in range(4))
    if abs(a * d - b * c) < 0.1:
        d = d + 1
    return MobiusMap(a, b, c, d)


def _leaf():
    return st.one_of(st.just(Var()), st.builds(Const, coeff))


def _extend(children):
    # shifts by +2.5i keep the argument of powers in the upper half-plane far from the cut
    return st.one_of(
        st.builds(lambda a, b: Sum((a, b)), children, children),
        st.builds(lambda a, b: Prod((a, b)), children, children),
        st.builds(lambda s, e: ScaleArg(s, e), st.floats(0.5, 2, **finite), children),
        st.builds(lambda c, e: ShiftArg(c, e), st.floats(-1, 1, **finite), children),
        st.builds(lambda nu: Pow(ShiftArg(2.5j, Var()), nu),
                  st.complex_numbers(max_magnitude=2.5, **finite)),
        st.builds(lambda m: MobiusComp(m, Var()), mobius_maps()),
    )


expressions = st.recursive(_leaf(), _extend, max_leaves=6)
