import pytest

from expandergauge.limits import ENV_VAR, Limits, limits_from_env


def test_defaults_and_merge():
    lim = Limits()
    assert (lim.exact, lim.dense, lim.lattice, lim.elements) == (26, 4096, 2000, 10000)
    assert lim.merged("exact:20, dense:100").exact == 20
    assert lim.merged("") is lim and lim.merged(None) is lim


@pytest.mark.parametrize("text,msg", [("exact", "item 1"), ("dense:100,foo:3", "item 2"),
                                      ("exact:x", "integer"), ("exact:0", "positive")])
def test_merge_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        Limits().merged(text)


def test_env(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "lattice:50")
    assert limits_from_env().lattice == 50
    monkeypatch.delenv(ENV_VAR)
    assert limits_from_env() == Limits()
