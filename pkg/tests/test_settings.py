import pytest

from perqwalk.config.settings import Settings, get_settings, override_settings


def test_from_env(monkeypatch):
    monkeypatch.setenv("PERQWALK_THREADS", "3")
    monkeypatch.setenv("PERQWALK_DEBUG", "yes")
    monkeypatch.setenv("PERQWALK_DENSE_GUARD", "144")
    monkeypatch.delenv("PERQWALK_GENERAL_GUARD", raising=False)
    settings = Settings.from_env()
    assert settings.threads == 3
    assert settings.debug
    assert settings.dense_guard == 144
    assert settings.general_guard == 80


@pytest.mark.parametrize("value", ["many", "0", "-4"])
def test_bad_integers_are_rejected(monkeypatch, value):
    monkeypatch.setenv("PERQWALK_THREADS", value)
    with pytest.raises(ValueError, match="PERQWALK_THREADS"):
        Settings.from_env()


def test_override_and_reload(monkeypatch):
    override_settings(Settings(threads=1, dense_guard=36))
    assert get_settings().dense_guard == 36
    monkeypatch.setenv("PERQWALK_DENSE_GUARD", "100")
    override_settings(None)
    assert get_settings().dense_guard == 100
