from lagrangian_variety.config import DEFAULTS, THREADS_ENV, Config


def test_defaults():
    assert DEFAULTS.seed == 0xBD
    assert DEFAULTS.oracle_cap == 4
    assert DEFAULTS.output_format == "json"


def test_replace_ignores_none():
    config = DEFAULTS.replace(seed=None, oracle_cap=2)

    assert config.seed == DEFAULTS.seed
    assert config.oracle_cap == 2


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "4")

    assert Config.from_env().threads == 4


def test_bad_thread_counts_are_ignored(monkeypatch):
    for raw in ("many", "0", "-2"):
        monkeypatch.setenv(THREADS_ENV, raw)
        assert Config.from_env().threads == 1

    monkeypatch.delenv(THREADS_ENV)
    assert Config.from_env() == Config()
