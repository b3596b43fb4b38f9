import logging
import time
from typing import (
    Any,
    Dict,
    Generic,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from pydantic import BaseModel
from sqlalchemy import Column, delete, func, insert, select
from sqlalchemy.orm import Session
from sqlalchemy.sql import Select

from twoprimeadic.core.database import connection
from twoprimeadic.core.exc import (
    EmptyFilterError,
    EmptyValueError,
    InvalidFieldError,
    NotFoundError,
)
from twoprimeadic.core.utils import count_execute_time
from twoprimeadic.models.base_model import Base


logger = logging.getLogger(__name__)


T = TypeVar("T", bound=Base)

Key = Tuple[Any, ...]
OrderBy = Union[str, Sequence[str]]


class BaseRepository(Generic[T]):
    """
    Репозиторий поверх SQLAlchemy Core с адресацией записей по ключу.

    Ключ задаётся кортежем значений полей key_fields (по умолчанию id).
    Фильтры передаются pydantic-схемой, учитываются только явно заданные поля.
    """

    model: type[T]
    key_fields: Tuple[str, ...] = ("id",)
    _table_columns: Dict[str, Column] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if getattr(cls, "model", None) is None:
            return
        cls._table_columns = {column.name: column for column in cls.model.__table__.c}
        cls._require_known(cls.key_fields)
        logger.debug(
            "%s: %d колонок, ключ %s",
            cls.__name__,
            len(cls._table_columns),
            cls.key_fields,
        )

    @classmethod
    def _require_known(cls, names: Iterable[str]) -> List[str]:
        """
        Raises:
            InvalidFieldError: Если хотя бы одного поля нет в таблице
        """
        names = list(names)
        unknown = [name for name in names if name not in cls._table_columns]
        if unknown:
            raise InvalidFieldError(
                f"Поля {unknown} отсутствуют в таблице {cls.model.__tablename__}"
            )
        return names

    @classmethod
    def _key_conditions(cls, key: Key) -> List[Any]:
        if len(key) != len(cls.key_fields):
            raise InvalidFieldError(
                f"Ключ {key} не соответствует полям {cls.key_fields}"
            )
        return [
            cls._table_columns[name] == value
            for name, value in zip(cls.key_fields, key)
        ]

    @classmethod
    def _filter_conditions(cls, filters: BaseModel) -> List[Any]:
        """
        Условия равенства из заданных полей схемы.

        Raises:
            EmptyFilterError: Если в схеме не задано ни одного поля
            InvalidFieldError: Если поля нет в таблице
        """
        payload = filters.model_dump(mode="json", exclude_unset=True)
        if not payload:
            raise EmptyFilterError(
                f"Фильтр {type(filters).__name__} не задаёт ни одного поля"
            )
        cls._require_known(payload)
        return [cls._table_columns[name] == value for name, value in payload.items()]

    @classmethod
    def _ordered(cls, query: Select, order_by: OrderBy) -> Select:
        names = [order_by] if isinstance(order_by, str) else list(order_by)
        columns = [cls._table_columns[name] for name in cls._require_known(names)]
        return query.order_by(*columns)

    @classmethod
    @connection()
    def create(
        cls, values: Union[BaseModel, Sequence[BaseModel]], session: Session
    ) -> int:
        """
        Вставляет одну или несколько записей одним insert.

        Args:
            values: Схема записи или последовательность схем
            session: Сессия SQLAlchemy

        Returns:
            int: Число переданных записей

        Raises:
            EmptyValueError: Если записей нет
            InvalidFieldError: Если в схеме есть поле, которого нет в таблице
        """
        start_time = time.time()
        records = [values] if isinstance(values, BaseModel) else list(values)
        if not records:
            raise EmptyValueError(f"Нечего вставлять в {cls.model.__tablename__}")
        rows = [record.model_dump(mode="json", exclude_unset=True) for record in records]
        for row in rows:
            cls._require_known(row)

        session.execute(insert(cls.model), rows)
        logger.debug(
            "%s: вставлено %d записей за %.3f сек",
            cls.model.__tablename__,
            len(rows),
            count_execute_time(start_time=start_time),
        )
        return len(rows)

    @classmethod
    @connection(commit=False)
    def get_one(cls, key: Key, session: Session = None) -> Optional[Dict[str, Any]]:
        """
        Запись по ключу в виде словаря, None если её нет.

        Raises:
            InvalidFieldError: Если длина ключа не совпадает с key_fields
        """
        query = select(*cls._table_columns.values()).where(*cls._key_conditions(key))
        found = session.execute(query).mappings().one_or_none()
        return dict(found) if found is not None else None

    @classmethod
    @connection(commit=False)
    def get_many(
        cls,
        filters: Optional[BaseModel] = None,
        select_fields: Optional[Sequence[str]] = None,
        order_by: Optional[OrderBy] = None,
        limit: Optional[int] = None,
        session: Session = None,
    ) -> List[Dict[str, Any]]:
        """
        Записи в виде словарей.

        Args:
            filters: Схема фильтра
            select_fields: Возвращаемые поля (по умолчанию все колонки)
            order_by: Поле или список полей сортировки по возрастанию
            limit: Не больше limit записей
            session: Сессия SQLAlchemy
        """
        start_time = time.time()
        names = cls._require_known(select_fields or cls._table_columns)
        query = select(*(cls._table_columns[name] for name in names))
        if filters is not None:
            query = query.where(*cls._filter_conditions(filters))
        if order_by:
            query = cls._ordered(query, order_by)
        if limit:
            query = query.limit(limit)

        rows = [dict(row) for row in session.execute(query).mappings()]
        logger.debug(
            "%s: выбрано %d записей за %.3f сек",
            cls.model.__tablename__,
            len(rows),
            count_execute_time(start_time=start_time),
        )
        return rows

    @classmethod
    @connection(commit=False)
    def count(
        cls, filters: Optional[BaseModel] = None, session: Session = None
    ) -> int:
        """Число записей, отвечающих фильтру (всех, если фильтра нет)."""
        query = select(func.count()).select_from(cls.model.__table__)
        if filters is not None:
            query = query.where(*cls._filter_conditions(filters))
        return session.execute(query).scalar_one()

    @classmethod
    @connection()
    def delete(cls, key: Key, session: Session = None) -> int:
        """
        Удаляет запись по ключу.

        Returns:
            int: Число удалённых записей

        Raises:
            NotFoundError: Если записи с таким ключом нет
        """
        stmt = delete(cls.model.__table__).where(*cls._key_conditions(key))
        deleted = session.execute(stmt).rowcount
        if not deleted:
            raise NotFoundError(f"{cls.model.__tablename__}: нет записи с ключом {key}")
        logger.debug("%s: удалено %d записей", cls.model.__tablename__, deleted)
        return deleted
