import logging
from typing import Dict, List, Optional, Set, Tuple

from sqlalchemy import select
from sqlalchemy.orm import Session

from twoprimeadic.core.database import connection
from twoprimeadic.models.base_model import ScanRecord
from twoprimeadic.schemas.params import CaseTag
from twoprimeadic.schemas.reports import ScanFilter, ScanRow

from .abstract_repo import BaseRepository


logger = logging.getLogger(__name__)


class ScanRepository(BaseRepository[ScanRecord]):
    """Строки скана гипотезы, ключ — упорядоченная пара (p, q)."""

    model = ScanRecord
    key_fields = ("p", "q")

    @classmethod
    @connection(commit=False)
    def existing_keys(cls, session: Session = None) -> Set[Tuple[int, int]]:
        """Пары (p, q), уже сохранённые в хранилище."""
        rows = session.execute(select(ScanRecord.p, ScanRecord.q)).all()
        logger.debug("В хранилище %d пар", len(rows))
        return {(p, q) for p, q in rows}

    @classmethod
    def row(cls, p: int, q: int) -> Optional[ScanRow]:
        record = cls.get_one(key=(p, q))
        return None if record is None else ScanRow.model_validate(record)

    @classmethod
    def rows_in_order(
        cls, filters: Optional[ScanFilter] = None, limit: Optional[int] = None
    ) -> List[ScanRow]:
        """Строки, отвечающие фильтру, в каноническом порядке (pq, p)."""
        fields = list(ScanRow.model_fields)
        records = cls.get_many(
            filters=filters, select_fields=fields, order_by=["pq", "p"], limit=limit
        )
        return [ScanRow.model_validate(record) for record in records]

    @classmethod
    def summary(cls) -> Dict[str, int]:
        """
        Сводка хранилища: всего строк, строк по каждому случаю CaseTag,
        найденных контрпримеров и несогласованных строк.
        """
        summary = {"total": cls.count()}
        for tag in CaseTag:
            summary[tag.value] = cls.count(filters=ScanFilter(case_tag=tag))
        summary["counterexamples"] = cls.count(
            filters=ScanFilter(candidate_prime=True, d_divides=True)
        )
        summary["inconsistent"] = cls.count(filters=ScanFilter(consistent=False))
        return summary
