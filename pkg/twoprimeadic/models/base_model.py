from datetime import datetime
from typing import Annotated, Optional

from sqlalchemy import BigInteger, DateTime, Integer, String, UniqueConstraint
from sqlalchemy.orm import DeclarativeBase, Mapped, declared_attr, mapped_column
from sqlalchemy.sql import func


id_field = Annotated[
    int, mapped_column(Integer, primary_key=True, autoincrement=True)
]
created_at = Annotated[
    datetime, mapped_column(DateTime, server_default=func.now())
]


class Base(DeclarativeBase):
    """
    Базовый класс моделей хранилища.

    Имя таблицы — имя класса в нижнем регистре с суффиксом 's'.
    """

    __abstract__ = True

    @declared_attr.directive
    def __tablename__(cls) -> str:
        return cls.__name__.lower() + "s"


class ScanRecord(Base):
    """Сохранённая строка скана; ключ — упорядоченная пара (p, q)."""

    __table_args__ = (UniqueConstraint("p", "q", name="uq_scan_pair"),)

    id: Mapped[id_field]
    p: Mapped[int] = mapped_column(Integer, nullable=False)
    q: Mapped[int] = mapped_column(Integer, nullable=False)
    pq: Mapped[int] = mapped_column(Integer, nullable=False, index=True)
    case_tag: Mapped[str] = mapped_column(String(8), nullable=False)
    candidate_d: Mapped[int] = mapped_column(BigInteger, nullable=False)
    candidate_prime: Mapped[bool] = mapped_column(nullable=False)
    d_divides: Mapped[bool] = mapped_column(nullable=False)
    r1: Mapped[int] = mapped_column(BigInteger, nullable=False)
    r2: Mapped[int] = mapped_column(BigInteger, nullable=False)
    phi_exact: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)
    consistent: Mapped[bool] = mapped_column(nullable=False)
    created_at: Mapped[created_at]
