import pytest
from pydantic import ValidationError

from app.pydantic_models.family import Family, FamilyLabel
from app.services.families import (
    SIGNATURE_COLUMNS,
    check_table_signatures,
    diameter_of,
    global_rows,
    local_family,
    local_rows,
    point_count,
    singular_dims,
    table_frame,
)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_table_signatures_are_distinct(q):
    check_table_signatures(q)


@pytest.mark.parametrize(
    "family, n, q, expected",
    [
        (Family.polar_w, 3, 2, 63),
        (Family.polar_q, 2, 3, 40),
        (Family.polar_qplus, 3, 2, 35),
        (Family.polar_qminus, 2, 2, 27),
        (Family.grassmann, 4, 2, 155),
        (Family.half_spin, 5, 2, 2295),
        (Family.e6, 6, 2, 139503),
        (Family.segre, 2, 2, 21),
    ],
)
def test_point_counts(family, n, q, expected):
    assert point_count(family, n, q) == expected


def test_residues():
    assert local_family(Family.polar_qminus, 4) == (Family.polar_qminus, 3)
    assert local_family(Family.grassmann, 5) == (Family.segre, 3)
    assert local_family(Family.half_spin, 6) == (Family.grassmann, 5)
    assert local_family(Family.e7, 7) == (Family.e6, 6)
    assert local_family(Family.segre, 2) is None


def test_dimensions_and_diameters():
    assert singular_dims(Family.grassmann, 5) == (2, 4)
    assert singular_dims(Family.half_spin, 6) == (3, 5)
    assert singular_dims(Family.polar_w, 4) == (3, 3)
    assert diameter_of(Family.half_spin, 7) == 3
    assert diameter_of(Family.e7, 7) == 3
    assert diameter_of(Family.e6, 6) == 2


def test_table_frame():
    frame = table_frame(2)
    assert frame.height == len(global_rows())
    assert set(SIGNATURE_COLUMNS) <= set(frame.columns)
    e7 = frame.filter(frame["family"] == str(Family.e7)).row(0, named=True)
    assert int(e7["points"]) == point_count(Family.e7, 7, 2)
    assert table_frame(3, local_rows()).height == len(local_rows())


def test_local_rows_cover_every_residue():
    local = {(row.family, row.n) for row in local_rows()}
    for row in global_rows():
        assert row.local in local


def test_labels_display():
    assert FamilyLabel(family=Family.polar_w, n=3, q=2).display == "W(5,2)"
    assert FamilyLabel(family=Family.polar_qplus, n=3, q=2).display == "Q+(5,2)"
    assert FamilyLabel(family=Family.polar_qminus, n=3, q=3).display == "Q-(7,3)"
    assert FamilyLabel(family=Family.grassmann, n=4, q=2).display == "A_4,2(2)"
    assert FamilyLabel(family=Family.segre, n=2, q=2, role="local").display == "A_1,1xA_2,1(2)"


@pytest.mark.parametrize(
    "values",
    [
        {"family": "PolarW", "n": 3, "q": 6},
        {"family": "A_n2", "n": 3, "q": 2},
        {"family": "D_nn", "n": 10, "q": 2},
        {"family": "A11_An1", "n": 2, "q": 2},
        {"family": "E7_7", "n": 7, "q": 2, "role": "local"},
    ],
)
def test_labels_outside_the_ranges(values):
    with pytest.raises(ValidationError):
        FamilyLabel(**values)
