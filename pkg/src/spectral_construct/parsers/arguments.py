"""Command-line value syntax: complex numbers, exact rationals, windows and grids."""

import math
from fractions import Fraction
from typing import Any, Optional

import click

from spectral_construct.models import ExactComplex, Window


def _split(text: str, parts: int, what: str) -> list[str]:
    pieces = [piece.strip() for piece in text.split(",")]
    if len(pieces) != parts or not all(pieces):
        raise ValueError(f"{what} needs {parts} comma-separated values, got {text!r}")
    return pieces


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


def parse_complex(text: str) -> complex:
    """'re,im' -> complex."""
    re, im = _split(text, 2, "lambda")
    return complex(_finite(re), _finite(im))


def parse_exact(text: str) -> ExactComplex:
    """'num/den,num/den' (integers or decimals accepted) -> ExactComplex."""
    re, im = _split(text, 2, "exact lambda")
    try:
        return ExactComplex(Fraction(re), Fraction(im))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational in {text!r}: {exc}") from exc


def parse_window(text: str) -> Window:
    """'x0,x1,y0,y1' -> Window."""
    x0, x1, y0, y1 = (_finite(piece) for piece in _split(text, 4, "window"))
    return Window(x0, x1, y0, y1)


def parse_grid(text: str) -> tuple[int, int]:
    """'NXxNY' -> (nx, ny), both at least 2."""
    pieces = text.lower().split("x")
    if len(pieces) != 2:
        raise ValueError(f"grid must look like 201x201, got {text!r}")
    nx, ny = int(pieces[0]), int(pieces[1])
    if nx < 2 or ny < 2:
        raise ValueError("grid dimensions must be at least 2")
    return nx, ny


def parse_epsilons(text: str) -> tuple[float, ...]:
    """'1e-1,1e-2,1e-3' -> strictly decreasing positive thresholds."""
    values = tuple(_finite(piece) for piece in text.split(",") if piece.strip())
    if not values or any(v <= 0 for v in values):
        raise ValueError("epsilons must be positive")
    if any(a <= b for a, b in zip(values, values[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    return values


class _ParsedParam(click.ParamType):
    """click parameter type backed by one of the parse functions above."""

    parser: Any = None

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]):
        if not isinstance(value, str):
            return value
        try:
            return type(self).parser(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class ComplexParam(_ParsedParam):
    name = "re,im"
    parser = staticmethod(parse_complex)


class ExactParam(_ParsedParam):
    name = "num/den,num/den"
    parser = staticmethod(parse_exact)


class WindowParam(_ParsedParam):
    name = "x0,x1,y0,y1"
    parser = staticmethod(parse_window)


class GridParam(_ParsedParam):
    name = "NXxNY"
    parser = staticmethod(parse_grid)


class EpsilonsParam(_ParsedParam):
    name = "eps,eps,..."
    parser = staticmethod(parse_epsilons)


COMPLEX = ComplexParam()
EXACT = ExactParam()
WINDOW = WindowParam()
GRID = GridParam()
EPSILONS = EpsilonsParam()
