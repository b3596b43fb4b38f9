import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import primerange

from twoprimeadic.core.config import settings
from twoprimeadic.core.database import init_db
from twoprimeadic.core.exc import InvalidParametersError
from twoprimeadic.core.utils import count_execute_time
from twoprimeadic.ntheory.adic import (
    complexity_report,
    conjecture_check,
    theorem_prediction,
)
from twoprimeadic.repositories.scan_repo import ScanRepository
from twoprimeadic.schemas.reports import ScanFilter, ScanRow


logger = logging.getLogger(__name__)


# Версия 1 набора колонок CSV
CSV_COLUMNS = (
    "p",
    "q",
    "pq",
    "case_tag",
    "candidate_d",
    "candidate_prime",
    "d_divides",
    "r1",
    "r2",
    "phi_exact",
    "consistent",
)

MIN_PQ_MAX = 25


def enumerate_pairs(pq_max: int) -> List[Tuple[int, int]]:
    """
    Все упорядоченные допустимые пары с pq ≤ pq_max в порядке (pq, p).

    Простое 3 не участвует: gcd(2, q-1) ≤ 2.
    """
    primes = list(primerange(5, pq_max // 5 + 1))
    pairs = [
        (p, q)
        for p in primes
        for q in primes
        if p != q and p * q <= pq_max and gcd(p - 1, q - 1) == 4
    ]
    return sorted(pairs, key=lambda pair: (pair[0] * pair[1], pair[0]))


def scan_pair(p: int, q: int, exact: bool = False, force_full: bool = False) -> ScanRow:
    """
    Строка скана для одной пары.

    Без exact сложность не вычисляется, а consistent ложно только когда
    составной кандидат делит E(4).
    """
    outcome = conjecture_check(p, q, force_full=force_full)
    if exact:
        report = complexity_report(p, q)
        phi_exact, consistent = report.phi_exact, report.consistent
    else:
        report = theorem_prediction(p, q)
        phi_exact = None
        consistent = not (outcome.d_divides and not outcome.candidate_prime)
    return ScanRow(
        p=p,
        q=q,
        pq=p * q,
        case_tag=report.case_tag,
        candidate_d=outcome.candidate_d,
        candidate_prime=outcome.candidate_prime,
        d_divides=outcome.d_divides,
        r1=report.r1,
        r2=report.r2,
        phi_exact=phi_exact,
        consistent=consistent,
    )


def _scan_task(task: Tuple[int, int, bool, bool]) -> ScanRow:
    return scan_pair(*task)


def _compute(
    tasks: Sequence[Tuple[int, int, bool, bool]], jobs: int, chunk_size: int
) -> Iterable[ScanRow]:
    if jobs <= 1 or len(tasks) <= 1:
        return map(_scan_task, tasks)
    executor = ProcessPoolExecutor(max_workers=jobs)
    return _drain(executor, tasks, chunk_size)


def _drain(
    executor: ProcessPoolExecutor,
    tasks: Sequence[Tuple[int, int, bool, bool]],
    chunk_size: int,
) -> Iterable[ScanRow]:
    with executor:
        yield from executor.map(_scan_task, tasks, chunksize=chunk_size)


def run_scan(
    pq_max: int,
    jobs: Optional[int] = None,
    exact: bool = False,
    force_full: Optional[bool] = None,
    store_url: Optional[str] = None,
    resume: bool = False,
    chunk_size: Optional[int] = None,
) -> List[ScanRow]:
    """
    Скан гипотезы по всем упорядоченным парам с pq ≤ pq_max.

    Args:
        pq_max: Верхняя граница pq (не меньше 25)
        jobs: Число процессов (по умолчанию settings.SCAN_JOBS)
        exact: Вычислять точную сложность для каждой пары
        force_full: Вычислять E(4) mod d и для составного кандидата
        store_url: URL хранилища (по умолчанию settings.SCAN_DB_URL)
        resume: Пропускать пары, уже сохранённые в хранилище
        chunk_size: Пар на одну задачу процесса

    Returns:
        List[ScanRow]: Строки в порядке (pq, p) независимо от jobs

    Raises:
        InvalidParametersError: Если pq_max < 25
    """
    if pq_max < MIN_PQ_MAX:
        raise InvalidParametersError(f"pq_max={pq_max} меньше {MIN_PQ_MAX}")
    start_time = time.time()
    jobs = jobs or settings.SCAN_JOBS
    chunk_size = chunk_size or settings.SCAN_CHUNK_SIZE
    if force_full is None:
        force_full = settings.FORCE_FULL_CHECK
    store_url = store_url or settings.SCAN_DB_URL

    pairs = enumerate_pairs(pq_max)
    todo = pairs
    if store_url:
        init_db(store_url)
        stored = ScanRepository.existing_keys()
        if resume:
            todo = [pair for pair in pairs if pair not in stored]
            logger.info("Продолжение скана: %d из %d пар уже есть", len(pairs) - len(todo), len(pairs))
        else:
            for p, q in (pair for pair in pairs if pair in stored):
                ScanRepository.delete(key=(p, q))

    tasks = [(p, q, exact, force_full) for p, q in todo]
    computed: List[ScanRow] = []
    batch: List[ScanRow] = []
    for row in _compute(tasks, jobs, chunk_size):
        computed.append(row)
        if row.d_divides and row.candidate_prime:
            logger.error("Кандидат d=%d делит E(4) для (%d, %d)", row.candidate_d, row.p, row.q)
        if store_url:
            batch.append(row)
            if len(batch) >= chunk_size:
                ScanRepository.create(batch)
                batch = []
    if store_url and batch:
        ScanRepository.create(batch)

    if store_url:
        wanted = set(pairs)
        rows = [row for row in ScanRepository.rows_in_order() if row.key in wanted]
    else:
        rows = sorted(computed, key=lambda row: (row.pq, row.p))
    logger.info(
        "Скан до pq=%d: %d пар за %.3f сек",
        pq_max,
        len(rows),
        count_execute_time(start_time=start_time),
    )
    return rows


def query_store(
    store_url: Optional[str] = None,
    key: Optional[Tuple[int, int]] = None,
    filters: Optional[ScanFilter] = None,
    limit: Optional[int] = None,
) -> Tuple[Dict[str, int], List[ScanRow]]:
    """
    Сводка хранилища скана и сохранённые строки.

    Args:
        store_url: URL хранилища (по умолчанию settings.SCAN_DB_URL)
        key: Пара (p, q); если задана, фильтр и limit не учитываются
        filters: Фильтр равенства по колонкам строки скана
        limit: Не больше limit строк

    Returns:
        Tuple[Dict[str, int], List[ScanRow]]: Сводка и строки в порядке (pq, p)

    Raises:
        EmptyValueError: Если URL хранилища не задан
    """
    init_db(store_url or settings.SCAN_DB_URL)
    summary = ScanRepository.summary()
    if key is not None:
        row = ScanRepository.row(*key)
        rows = [] if row is None else [row]
    else:
        rows = ScanRepository.rows_in_order(filters=filters, limit=limit)
    logger.info("Из хранилища выбрано %d строк из %d", len(rows), summary["total"])
    return summary, rows


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_rows(rows: Sequence[ScanRow], fmt: str = "csv") -> str:
    """Строки скана как CSV (колонки версии 1) или как JSON-массив."""
    if fmt == "json":
        records = [row.model_dump(mode="json") for row in rows]
        return json.dumps(records, sort_keys=True, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        record = row.model_dump(mode="json")
        writer.writerow([_csv_value(record[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()
