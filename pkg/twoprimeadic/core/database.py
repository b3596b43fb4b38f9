import logging
from contextlib import contextmanager
from functools import wraps
from typing import Generator, Optional

from sqlalchemy import Engine, create_engine, make_url
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session, sessionmaker

from twoprimeadic.models.base_model import Base

from .config import settings
from .exc import EmptyValueError


logger = logging.getLogger(__name__)


_engine: Optional[Engine] = None
_sessionmaker: Optional[sessionmaker[Session]] = None


def _make_engine(url: Optional[str] = None) -> Engine:
    """
    Создает движок хранилища скана (один на процесс и URL).

    Args:
        url: URL SQLAlchemy; по умолчанию текущий движок или settings.SCAN_DB_URL.
            Другой URL закрывает текущий движок и создаёт новый

    Returns:
        Engine: Синхронный движок SQLAlchemy

    Raises:
        EmptyValueError: Если URL не задан ни аргументом, ни в настройках
    """
    global _engine
    if _engine is not None:
        if url is None or make_url(url) == _engine.url:
            return _engine
        logger.info("URL хранилища скана сменился, движок пересоздаётся")
        dispose_db()

    url = url or settings.SCAN_DB_URL
    if not url:
        raise EmptyValueError("Не задан URL хранилища скана (SCAN_DB_URL)")

    _engine = create_engine(url, echo=settings.SCAN_DB_ECHO)
    logger.info("Движок хранилища скана инициализирован для %s", _engine.url.drivername)
    return _engine


def _make_sessionmaker() -> sessionmaker[Session]:
    """Создает фабрику сессий поверх уже созданного движка."""
    global _sessionmaker
    if _sessionmaker is not None:
        return _sessionmaker

    _sessionmaker = sessionmaker(bind=_make_engine(), expire_on_commit=False)
    logger.debug("Создан sessionmaker")
    return _sessionmaker


@contextmanager
def get_session() -> Generator[Session, None, None]:
    """
    Контекстный менеджер сессии с откатом транзакции при ошибке.

    Yields:
        Session: Сессия хранилища

    Raises:
        SQLAlchemyError: При ошибках работы с БД
    """
    with _make_sessionmaker()() as session:
        try:
            yield session
        except SQLAlchemyError as exc:
            logger.debug("Ошибка в сессии: %s", str(exc))
            session.rollback()
            raise


def connection(commit: bool = True):
    """
    Декоратор, передающий методу сессию и фиксирующий транзакцию.

    Args:
        commit: Выполнять ли commit после метода
    """

    def decorator(method):
        @wraps(method)
        def wrapper(*args, **kwargs):
            with get_session() as session:
                result = method(*args, session=session, **kwargs)
                if commit:
                    session.commit()
                    logger.debug("Транзакция закоммичена")
                return result

        return wrapper

    return decorator


def init_db(url: Optional[str] = None, use_create_all: bool = True) -> None:
    """
    Инициализирует движок и фабрику сессий и при необходимости создает таблицы.

    Args:
        url: URL хранилища; по умолчанию settings.SCAN_DB_URL
        use_create_all: Создать таблицы по Base.metadata
    """
    engine = _make_engine(url)
    _make_sessionmaker()
    if use_create_all:
        Base.metadata.create_all(engine)
        logger.info("Таблицы хранилища созданы через create_all()")


def dispose_db() -> None:
    """Закрывает движок; следующий init_db может указать другой URL."""
    global _engine, _sessionmaker
    if _engine is not None:
        _engine.dispose()
        logger.debug("Движок хранилища закрыт")
    _engine = None
    _sessionmaker = None
