import json
from fractions import Fraction

import pytest

from randwalls.presentation import (
    Presentation,
    integer_nth_root,
    relator_count,
    subdivision_factor,
)


def test_subdivision_factor():
    assert subdivision_factor(8) == 1
    assert subdivision_factor(14) == 2
    assert subdivision_factor(20) == 1
    assert subdivision_factor(7) == 4
    assert subdivision_factor(6) == 2


def test_relator_count_exact():
    # floor(3^(3/14 * 14)) = 27 exactly; float pow would be fragile here
    assert relator_count(2, Fraction(3, 14), 14) == 27
    assert relator_count(2, Fraction(3, 14), 8) == 6
    assert relator_count(2, Fraction(1, 8), 40) == 243
    assert relator_count(2, Fraction(3, 14), 20) == 110


def test_integer_nth_root():
    assert integer_nth_root(27, 3) == 3
    assert integer_nth_root(26, 3) == 2
    assert integer_nth_root(10**30, 2) == 10**15


def test_validation():
    with pytest.raises(ValueError):
        Presentation(n=0, d=Fraction(1, 4), ell0=8, subdivision=1, relators=())
    with pytest.raises(ValueError):
        Presentation(n=2, d=Fraction(3, 2), ell0=8, subdivision=1, relators=())
    with pytest.raises(ValueError):  # 2*7 not divisible by 4
        Presentation(n=2, d=Fraction(1, 4), ell0=7, subdivision=2, relators=())
    with pytest.raises(ValueError):  # wrong relator length
        Presentation(n=2, d=Fraction(1, 4), ell0=8, subdivision=1,
                     relators=((1, 2),))


def test_json_round_trip(tmp_path):
    pres = Presentation(
        n=2, d=Fraction(3, 14), ell0=14, subdivision=2,
        relators=((1, 2, -1, 2, 1, 1, 2, -1, -2, -2, 1, 1, 2, 2),),
    )
    assert pres.ell == 28
    again = Presentation.from_json(pres.to_json())
    assert again == pres
    path = tmp_path / "pres.json"
    pres.save(path)
    assert Presentation.load(path) == pres
    data = json.loads(path.read_text())
    assert data["d"] == "3/14"
