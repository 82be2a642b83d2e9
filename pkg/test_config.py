import pytest
from pydantic import ValidationError

from app.core.config import Settings


def test_defaults_are_valid():
    settings = Settings(_env_file=None)
    assert settings.SOLVER_THREADS == 1
    assert settings.PROFILE_WINDOW >= 64
    assert settings.LOG_LEVEL == "WARNING"


def test_log_level_is_normalised(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "debug")
    assert Settings(_env_file=None).LOG_LEVEL == "DEBUG"


@pytest.mark.parametrize(
    "name, value",
    [
        ("SOLVER_THREADS", "0"),
        ("SOLVER_TIMEOUT_SECONDS", "0"),
        ("LOG_LEVEL", "chatty"),
        ("PROFILE_WINDOW", "16"),
        ("PROFILE_MAX_LENGTH", "0"),
    ],
)
def test_invalid_values_are_rejected(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings(_env_file=None)
