"""Default test-function batteries."""

from __future__ import annotations

from .conformal import CAYLEY_INV
from .fncore import Const, MobiusComp, Pow, Prod, Var, shift_power, vanishing_at
from .parse import BatteryEntry, to_literal


def _psi_inv(power: int = 1):
    base = MobiusComp(CAYLEY_INV, Var())
    return base if power == 1 else Pow(base, power)


def predual_battery():
    """Ten little-Bloch functions vanishing at ``i`` (pullbacks of disk polynomials and rational relatives)."""
    return [
        _psi_inv(),
        _psi_inv(2),
        _psi_inv(3),
        Prod((Const(2), _psi_inv())) + _psi_inv(2),
        vanishing_at(shift_power(1j, -1)),
        vanishing_at(shift_power(1j, -2)),
        vanishing_at(shift_power(1j, -0.5)),
        vanishing_at(shift_power(2j, -1)),
        vanishing_at(shift_power(1 + 1j, -1)),
        _psi_inv() * shift_power(1j, -1),
    ]


def l1_battery():
    """Functions in the L^1 Bergman space for every ``alpha`` in ``(-1, 1.5)``."""
    return [
        shift_power(1j, -4),
        shift_power(2j, -4),
        shift_power(1 + 1j, -5),
        shift_power(1j, -4) + Prod((Const(0.5 - 0.25j), shift_power(0.5 + 2j, -5))),
        shift_power(1j, -4.5 + 0.3j),
    ]


def smooth_battery():
    """Small battery for generator and continuity ladders."""
    return [
        vanishing_at(shift_power(1j, -1)),
        vanishing_at(shift_power(1j, -2)),
        _psi_inv(),
    ]


def embedding_battery():
    return [Const(1), shift_power(1j, -1), shift_power(1j, -2), _psi_inv()]


def membership_battery() -> list[BatteryEntry]:
    """Annotated battery: the predual battery is ``in``; the rest illustrate each failing predicate."""
    out = [(f, "in") for f in predual_battery()]
    out += [
        (vanishing_at(shift_power(1j, nu)), "in") for nu in (-0.5, -1, -2)
    ]
    out += [
        (Var(), "out"),
        (Const(1), "out"),
        (Pow(Var(), 1j), "out"),
        (Prod((Const(-2 + 1j), Pow(Var(), 0.5j))), "out"),
        (vanishing_at(shift_power(1j, 0.5)), "out"),
        (vanishing_at(shift_power(1j, 1)), "out"),
        (shift_power(1j, -1), "out"),
    ]
    return [BatteryEntry(to_literal(f), f, e) for f, e in out]
