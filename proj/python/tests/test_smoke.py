import pytest

import klcalc


def test_group_data():
    g = klcalc.Group("B2")
    assert g.order == 8
    assert len(g) == 8
    assert g.length("1212") == 4
    info = klcalc.group_info("E8")
    assert info["order"] == 696729600
    assert info["longest_length"] == 120


def test_kl_values():
    g = klcalc.Group("A3")
    assert g.P("", "2132") == "1 + q"
    assert g.h("", "2132") == "v^2 + v^4"
    assert g.mu("1", "12") == 1
    assert g.P("1", "2") == "0"
    assert not g.bruhat_leq("1", "2")
    assert dict(klcalc.Group("A1").kl_basis("1")) == {"": "v", "1": "1"}


def test_andersen_reports():
    g = klcalc.Group("A2")
    report = klcalc.andersen(g, "", "121")
    assert report["layers"] == {"3": 1}
    assert len(klcalc.block_table(g)) == 19
    assert len(klcalc.block_table(g, "1,2")) == 1


def test_filtration():
    assert klcalc.smith_valuations([["v", "v"], ["v", "v + v^2"]]) == [1, 2]
    pieces, free, degrees = klcalc.gysin_pieces("v^2 + v^4", 4)
    assert pieces == [2, 4]
    assert free == 0
    assert degrees == sorted(-d for d in degrees)


def test_errors():
    with pytest.raises(klcalc.InfiniteType):
        klcalc.Group("[[1,3,3],[3,1,3],[3,3,1]]")
    with pytest.raises(klcalc.UsageError):
        klcalc.Group("A2").h("", "3")
    with pytest.raises(klcalc.InsufficientTruncation):
        klcalc.smith_valuations([["v^5"]], 3)
    with pytest.raises(klcalc.ParityError):
        klcalc.h_to_P("v^3", 4)
    assert issubclass(klcalc.ParityError, klcalc.Error)
