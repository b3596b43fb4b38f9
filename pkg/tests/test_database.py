import pytest
from sqlalchemy import text

from twoprimeadic.core import init_db, settings
from twoprimeadic.core.database import _make_engine, dispose_db, get_session
from twoprimeadic.core.exc import EmptyValueError


@pytest.mark.integration
def test_init_db_creates_functional_connection(scan_store):
    """
    Тестируем что после init_db можно установить соединение с БД
    и выполнять запросы через публичный интерфейс.
    """
    with get_session() as session:
        result = session.execute(text("SELECT 1"))
        assert result.scalar() == 1


def test_init_db_without_url(monkeypatch):
    """Без URL в аргументе и настройках выбрасывается EmptyValueError."""
    monkeypatch.setattr(settings, "SCAN_DB_URL", None)
    dispose_db()
    with pytest.raises(EmptyValueError):
        init_db()


@pytest.mark.integration
def test_init_db_with_other_url_rebuilds_engine(scan_store, tmp_path):
    """Другой URL закрывает прежний движок; повтор того же URL движок не меняет."""
    other = f"sqlite:///{tmp_path / 'other.db'}"
    init_db(other)
    engine = _make_engine()
    assert engine.url.database == str(tmp_path / "other.db")
    init_db(other)
    assert _make_engine() is engine
    init_db(scan_store)
    assert _make_engine() is not engine
