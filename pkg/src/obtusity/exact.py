"""Exact values as rational combinations of a fixed set of constants.

A :class:`ClosedFormValue` is a finite map ``Const -> Fraction``; addition
and rational scaling are exact, and :func:`cf_eval` evaluates to any number
of decimal digits with mpmath at a working precision carrying guard digits.
Results are truncated (not rounded) to the requested digits, so a value
printed as 0.9159655941 is reproduced digit for digit.
"""

from __future__ import annotations

import enum
import math
from decimal import Decimal
from fractions import Fraction
from typing import Mapping

import mpmath

__all__ = [
    "ClosedFormValue",
    "Const",
    "PUBLISHED_DECIMALS",
    "PUBLISHED_VALUES",
    "catalan",
    "cf_eval",
    "cf_sum_config",
    "config_closed_form",
    "published_value",
]

GUARD_DIGITS = 10


def _catalan_mpf(dps: int) -> mpmath.mpf:
    """G = sum (-1)^n / (2n + 1)^2 via the Cohen-Rodriguez Villegas-Zagier
    acceleration of alternating series.

    The error after n terms is at most 2 a_0 / (3 + sqrt 8)^n, so n is chosen
    from ``dps`` before summing.
    """
    with mpmath.workdps(dps + GUARD_DIGITS):
        n = math.ceil((dps + GUARD_DIGITS) * math.log(10) / math.log(3 + math.sqrt(8))) + 1
        d = (3 + mpmath.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        b = mpmath.mpf(-1)
        c = -d
        s = mpmath.mpf(0)
        for k in range(n):
            c = b - c
            s += c / (2 * k + 1) ** 2
            b = b * (k + n) * (k - n) / ((k + mpmath.mpf(1) / 2) * (k + 1))
        return s / d


def _to_decimal(x: mpmath.mpf, digits: int, rounding: str = "down") -> Decimal:
    """Fix ``x`` (carrying guard digits) to ``digits`` decimals.

    ``rounding`` is "down" (truncate toward zero) or "nearest" (half up).
    """
    scaled = abs(x) * mpmath.mpf(10) ** digits
    if rounding == "down":
        n = int(mpmath.floor(scaled))
    elif rounding == "nearest":
        n = int(mpmath.floor(scaled + mpmath.mpf(1) / 2))
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    sign = 1 if x < 0 and n else 0
    return Decimal((sign, tuple(int(c) for c in str(n)), -digits))


def catalan(digits: int) -> Decimal:
    """Catalan's constant truncated to ``digits`` decimals."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    with mpmath.workdps(digits + GUARD_DIGITS):
        return _to_decimal(_catalan_mpf(digits + GUARD_DIGITS), digits)


class Const(enum.Enum):
    ONE = "1"
    CATALAN = "G"
    PI = "pi"
    PI_OVER_SQRT2 = "pi/sqrt(2)"
    PI_SQUARED = "pi^2"
    PI_LN2 = "pi*ln(2)"
    PI_LN_SILVER = "pi*ln(1+sqrt(2))"
    PI_OVER_SQRT3 = "pi/sqrt(3)"
    LN_SQRT3_OVER_2 = "ln(sqrt(3)/2)"
    INV_PI_SQUARED = "1/pi^2"

    def evaluate(self, dps: int) -> mpmath.mpf:
        """Value at ``dps`` decimal digits (caller supplies the guard digits)."""
        with mpmath.workdps(dps):
            pi = mpmath.pi
            return {
                Const.ONE: lambda: mpmath.mpf(1),
                Const.CATALAN: lambda: _catalan_mpf(dps),
                Const.PI: lambda: +pi,
                Const.PI_OVER_SQRT2: lambda: pi / mpmath.sqrt(2),
                Const.PI_SQUARED: lambda: pi**2,
                Const.PI_LN2: lambda: pi * mpmath.log(2),
                Const.PI_LN_SILVER: lambda: pi * mpmath.log(1 + mpmath.sqrt(2)),
                Const.PI_OVER_SQRT3: lambda: pi / mpmath.sqrt(3),
                Const.LN_SQRT3_OVER_2: lambda: mpmath.log(mpmath.sqrt(3) / 2),
                Const.INV_PI_SQUARED: lambda: 1 / pi**2,
            }[self]()


class ClosedFormValue:
    """Exact Q-linear combination of :class:`Const` symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Const, Fraction | int | str] | None = None):
        clean = {}
        for sym, coef in (terms or {}).items():
            q = Fraction(coef)
            if q:
                clean[Const(sym)] = q
        self._terms = dict(sorted(clean.items(), key=lambda kv: _ORDER[kv[0]]))

    @property
    def terms(self) -> dict[Const, Fraction]:
        return dict(self._terms)

    def coefficient(self, sym: Const) -> Fraction:
        return self._terms.get(sym, Fraction(0))

    def __add__(self, other: ClosedFormValue) -> ClosedFormValue:
        if not isinstance(other, ClosedFormValue):
            return NotImplemented
        out = dict(self._terms)
        for sym, q in other._terms.items():
            out[sym] = out.get(sym, Fraction(0)) + q
        return ClosedFormValue(out)

    def __neg__(self) -> ClosedFormValue:
        return ClosedFormValue({s: -q for s, q in self._terms.items()})

    def __sub__(self, other: ClosedFormValue) -> ClosedFormValue:
        return self + (-other)

    def __mul__(self, r) -> ClosedFormValue:
        if isinstance(r, ClosedFormValue):
            return NotImplemented
        r = Fraction(r)
        return ClosedFormValue({s: r * q for s, q in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, ClosedFormValue) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __float__(self) -> float:
        return float(cf_eval(self, 20))

    def __repr__(self) -> str:
        if not self._terms:
            return "ClosedFormValue(0)"
        body = " + ".join(f"({q})*{s.value}" for s, q in self._terms.items())
        return f"ClosedFormValue({body})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for sym, q in self._terms.items():
            mag = abs(q)
            if sym is Const.ONE:
                term = str(mag)
            elif sym is Const.INV_PI_SQUARED:
                term = f"{mag}/pi^2" if mag.denominator == 1 else f"({mag})/pi^2"
            elif mag == 1:
                term = sym.value
            elif mag.denominator == 1:
                term = f"{mag}*{sym.value}"
            else:
                term = f"({mag})*{sym.value}"
            if not out:
                out = term if q > 0 else f"-{term}"
            else:
                out += f" {'+' if q > 0 else '-'} {term}"
        return out

    def to_json(self) -> dict[str, str]:
        """{symbol: "num/den"} with symbol names as in :class:`Const`."""
        return {s.name: f"{q.numerator}/{q.denominator}" for s, q in self._terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> ClosedFormValue:
        return cls({Const[k]: Fraction(v) for k, v in data.items()})


_ORDER = {c: i for i, c in enumerate(Const)}


def cf_eval(v: ClosedFormValue, digits: int, rounding: str = "down") -> Decimal:
    """Decimal value of ``v`` to ``digits`` decimals, truncated by default
    (``rounding="nearest"`` rounds half up)."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    dps = digits + GUARD_DIGITS
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for sym, q in v.terms.items():
            total += mpmath.mpf(q.numerator) / q.denominator * sym.evaluate(dps)
        return _to_decimal(total, digits, rounding)


def cf_sum_config(*parts: ClosedFormValue) -> ClosedFormValue:
    """Exact sum of the obtuse-vertex contributions of one configuration."""
    out = ClosedFormValue()
    for p in parts:
        out = out + p
    return out


# ---------------------------------------------------------------------------
# published closed forms

def _cf(**kw) -> ClosedFormValue:
    names = {
        "one": Const.ONE, "G": Const.CATALAN, "pi": Const.PI, "pi_sqrt2": Const.PI_OVER_SQRT2,
        "pi2": Const.PI_SQUARED, "pi_ln2": Const.PI_LN2, "pi_lns": Const.PI_LN_SILVER,
        "pi_sqrt3": Const.PI_OVER_SQRT3, "ln_s3": Const.LN_SQRT3_OVER_2,
        "inv_pi2": Const.INV_PI_SQUARED,
    }
    return ClosedFormValue({names[k]: Fraction(v) for k, v in kw.items()})


F = Fraction

PUBLISHED_VALUES: dict[str, ClosedFormValue] = {
    # 322r
    "3*22r": _cf(one=F(6739, 6750), G=F(-8, 15), pi=F(211, 1440), pi_sqrt2=F(-17, 252),
                 pi2=F(-1, 45), pi_lns=F(-1, 24), pi_ln2=F(1, 24)),
    "32*2r": _cf(one=F(121, 7350), pi=F(1, 2688)),
    "322r": _cf(one=F(341101, 330750), G=F(-8, 15), pi=F(2969, 20160), pi_sqrt2=F(-17, 252),
                pi2=F(-1, 45), pi_ln2=F(1, 24), pi_lns=F(-1, 24)),
    # 321r
    "3*21r": _cf(one=F(49043, 54000), G=F(-8, 15), pi=F(1567, 11520), pi_sqrt2=F(-67, 720),
                 pi2=F(-1, 240), pi_ln2=F(1, 192), pi_lns=F(-1, 96)),
    "32*1r": _cf(one=F(37, 1176), pi=F(1, 1344)),
    "321*r": _cf(one=F(43, 14700)),
    "321r": _cf(one=F(2494097, 2646000), G=F(-8, 15), pi=F(11029, 80640), pi_sqrt2=F(-67, 720),
                pi2=F(-1, 240), pi_ln2=F(1, 192), pi_lns=F(-1, 96)),
    # 222r
    "2*22r": _cf(one=F(14393, 27000), G=F(-2, 15), pi=F(11, 1152), pi2=F(-1, 72), pi_ln2=F(1, 96)),
    "22*2r": _cf(one=F(37, 1176), pi=F(1, 1344)),
    "222r": _cf(one=F(788507, 1323000), G=F(-2, 15), pi=F(89, 8064), pi2=F(-1, 72),
                pi_ln2=F(1, 96)),
    # 320
    "3*20": _cf(one=F(42977, 54000), G=F(-7, 30), pi2=F(-1, 1440)),
    "32*0": _cf(one=F(23, 450)),
    "320*": _cf(),
    "320": _cf(one=F(45737, 54000), G=F(-7, 30), pi2=F(-1, 1440)),
    # 311
    "3*11": _cf(one=F(42977, 54000), G=F(-7, 30), pi2=F(-1, 1440)),
    "31*1": _cf(one=F(17, 1800)),
    "311": _cf(one=F(43997, 54000), G=F(-7, 30), pi2=F(-1, 1440)),
    # 221r
    "2*21r": _cf(one=F(23, 450)),
    "221*r": _cf(one=F(788, 3375), pi2=F(-1, 120)),
    "221r": _cf(one=F(1133, 3375), pi2=F(-1, 120)),
    # 221e
    "2*21e": _cf(one=F(32629, 54000), G=F(-7, 30), pi2=F(-1, 360)),
    "22*1e": _cf(one=F(23, 450)),
    "221*e": _cf(one=F(17, 1800)),
    "221e": _cf(one=F(35899, 54000), G=F(-7, 30), pi2=F(-1, 360)),
    # whole bodies
    "eta_C3": _cf(one=F(323338, 385875), G=F(-13, 35), pi=F(4859, 62720),
                  pi_sqrt2=F(-73, 1680), pi2=F(-1, 105), pi_ln2=F(3, 224), pi_lns=F(-3, 224)),
    "eta_disk": _cf(one=F(9, 8), inv_pi2=-4),
    "eta_ball": _cf(one=F(37, 70)),
    "eta_square": _cf(one=F(97, 150), pi=F(1, 40)),
    "eta_triangle": _cf(one=F(25, 4), pi_sqrt3=F(1, 12), ln_s3=F(393, 10)),
}

# mirror-image vertices share a value
for _alias, _src in {"322*r": "32*2r", "222*r": "22*2r", "311*": "31*1", "22*1r": "2*21r"}.items():
    PUBLISHED_VALUES[_alias] = PUBLISHED_VALUES[_src]
PUBLISHED_VALUES["eta_cube"] = PUBLISHED_VALUES["eta_C3"]

# decimals printed next to the closed forms (digits as published)
PUBLISHED_DECIMALS: dict[str, str] = {
    "3*22r": "0.576363509",
    "32*2r": "0.0176313323",
    "322r": "0.611626173665235356686",
    "3*21r": "0.5816795685",
    "32*1r": "0.03380008",
    "321*r": "0.00292517",
    "321r": "0.61840481814327429018",
    "2*22r": "0.326548524",
    "222r": "0.39414868337494",
    "3*20": "0.575291173117",
    "32*0": "0.0511111",
    "320": "0.6264022842",
    "31*1": "0.00944444",
    "311": "0.5941800620",
    "221*r": "0.151234778",
    "221r": "0.2534570004",
    "2*21e": "0.3630998677",
    "221e": "0.4236554232",
    "eta_C3": "0.54265928142722907450111187258177267165716732602495",
    "eta_disk": "0.7197",
    "eta_ball": "0.5286",
    "eta_square": "0.7252",
    "eta_triangle": "0.7482",
}


def config_closed_form(label: str) -> ClosedFormValue:
    """Configuration value summed from its three obtuse-vertex values."""
    from .geometry import CONFIG_PARTS

    return cf_sum_config(*(published_value(p) for p in CONFIG_PARTS[label]))


def published_value(id: str) -> ClosedFormValue:
    try:
        return PUBLISHED_VALUES[id]
    except KeyError:
        raise KeyError(f"no published value for {id!r}") from None
