import pytest

from braidmono.braid import BraidWord, equals
from braidmono.factorization import Factor, Factorization, LabelError, LabelMap


def test_label_maps():
    d = LabelMap.doubled(2)
    assert d.names == ("1", "1'", "2", "2'")
    assert d.pos("2'") == 4 and d.name(2) == "1'"
    assert LabelMap.numbered(3).header() == "@strands 3"
    with pytest.raises(LabelError):
        d.pos("3")
    with pytest.raises(ValueError):
        LabelMap(("1", "1"))


def test_factorization_operations():
    a = Factor(BraidWord.sigma(3, 1), "a")
    b = Factor(BraidWord.sigma(3, 2), "b")
    f = Factorization(3, (a, b), LabelMap.numbered(3))
    assert len(f) == 2 and f.degree == 2
    assert f.product().letters == (1, 2)
    assert [x.label for x in f.then(f)] == ["a", "b", "a", "b"]
    g = f.replace(0, [b, b])
    assert [x.label for x in g] == ["b", "b", "b"]
    with pytest.raises(IndexError):
        f.replace(5, [])
    with pytest.raises(ValueError):
        Factorization(4, (a,))
    with pytest.raises(ValueError):
        Factorization(3, (a,), LabelMap.numbered(4))
    assert Factorization.concat([f, f], 3).degree == 4
    doc = f.to_json()
    assert doc["factors"][1]["letters"] == [2]
    assert equals(f.product(), BraidWord(3, (1, 2)))
