import pytest

from coxdec.types import affine_diagram, group_order, parse_sum, rank_of, standard_diagram, sum_name, type_name


@pytest.mark.parametrize("family, rank", [("A", 4), ("B", 3), ("D", 5), ("E", 8), ("F", 4), ("H", 4)])
def test_standard_names(family, rank):
    assert type_name(standard_diagram(family, rank)) == f"{family}{rank}"


@pytest.mark.parametrize("family, rank", [("A", 3), ("B", 4), ("C", 4), ("D", 4), ("E", 7), ("F", 4)])
def test_affine_names(family, rank):
    assert type_name(affine_diagram(family, rank)) == f"{family}{rank}~"


def test_sum_round_trip():
    names = parse_sum("2A1+D4")
    assert names == ["A1", "A1", "D4"]
    assert sum_name(names) == "2A1+D4"
    assert rank_of("E8") == 8


def test_group_orders():
    assert group_order("A3") == 24
    assert group_order("H4") == 14400
    assert group_order("E8") == 696729600
