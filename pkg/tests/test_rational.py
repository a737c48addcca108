from decimal import Decimal
from fractions import Fraction

import pytest

from votetiming.rational import as_rational, format_decimal, format_rational


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("3/4", Fraction(3, 4)),
        (" -2 / 6 ", Fraction(-1, 3)),
        ("0.125", Fraction(1, 8)),
        (".5", Fraction(1, 2)),
        ("1.0", Fraction(1)),
        (7, Fraction(7)),
        (Decimal("0.2"), Fraction(1, 5)),
        (Fraction(6, 8), Fraction(3, 4)),
    ],
)
def test_accepts_exact_inputs(raw, expected):
    assert as_rational(raw) == expected
    assert type(as_rational(raw)) is Fraction


@pytest.mark.parametrize("raw", [0.5, True, "abc", "1/0", "1e-3", None, "1/2/3"])
def test_rejects_floats_and_garbage(raw):
    with pytest.raises((TypeError, ValueError)):
        as_rational(raw)


def test_numpy_integers_become_plain_ints():
    np = pytest.importorskip("numpy")
    x = as_rational(Fraction(int(np.int64(3)), 4))
    assert type(x.numerator) is int
    assert as_rational(np.int64(5)) == 5


def test_formatting():
    assert format_rational(Fraction(2)) == "2/1"
    assert format_rational(Fraction(-3, 9)) == "-1/3"
    assert format_decimal(Fraction(2, 3), 4) == "0.6667"
    assert format_decimal(Fraction(-1, 8), 2) == "-0.12"  # half-even
    assert format_decimal(Fraction(-1, 10**9), 3) == "0.000"
