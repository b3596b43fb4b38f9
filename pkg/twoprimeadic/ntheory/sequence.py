import json
import logging
from collections import Counter
from enum import Enum
from typing import Optional, Tuple, Union

from pydantic import ValidationError

from twoprimeadic.core.exc import SequenceFormatError
from twoprimeadic.schemas.params import ClassLabel, ClassTable, TwoPrimeParams
from twoprimeadic.schemas.sequence import QuaternarySequence

from .cyclotomy import build_class_table


logger = logging.getLogger(__name__)


DIGIT_OF_LABEL = {
    ClassLabel.D0: 0,
    ClassLabel.D1: 1,
    ClassLabel.D2: 2,
    ClassLabel.D3: 3,
    ClassLabel.P: 0,
    ClassLabel.Q: 2,
    ClassLabel.R: 2,
}

STRUCTURED_KEYS = {"T", "p", "q", "digits"}


class SequenceFormat(str, Enum):
    DIGITS = "digits"
    STRUCTURED = "structured"


def generate(
    params: TwoPrimeParams, table: Optional[ClassTable] = None
) -> QuaternarySequence:
    """
    Строит период четверичной последовательности двух простых.

    Цифра 2 для Q ∪ R, 0 для P и i для D_i.

    Args:
        params: Параметры пары
        table: Готовая таблица классов (иначе строится заново)

    Returns:
        QuaternarySequence: Последовательность периода pq с происхождением (p, q)
    """
    table = table or build_class_table(params)
    lookup = [DIGIT_OF_LABEL[label] for label in ClassLabel]
    digits = tuple(lookup[label] for label in table.labels)
    return QuaternarySequence(
        period=params.pq, digits=digits, p=params.p, q=params.q
    )


def reverse(seq: QuaternarySequence) -> QuaternarySequence:
    """Обращает период: digit'[i] = digit[T-1-i]; происхождение сохраняется."""
    return QuaternarySequence(
        period=seq.period, digits=seq.digits[::-1], p=seq.p, q=seq.q
    )


def histogram(seq: QuaternarySequence) -> Tuple[int, int, int, int]:
    """Число вхождений цифр 0, 1, 2, 3 за период."""
    counts = Counter(seq.digits)
    return tuple(counts.get(digit, 0) for digit in range(4))


def serialize(
    seq: QuaternarySequence,
    fmt: Union[SequenceFormat, str] = SequenceFormat.DIGITS,
) -> bytes:
    """
    Сериализует последовательность в строку цифр или структурированную запись.

    Args:
        seq: Последовательность
        fmt: "digits" — одна строка символов '0'..'3';
            "structured" — JSON-запись {T, p, q, digits}

    Returns:
        bytes: Сериализованное представление с завершающим переводом строки
    """
    fmt = SequenceFormat(fmt)
    if fmt is SequenceFormat.DIGITS:
        return (seq.as_text() + "\n").encode("ascii")
    record = {"T": seq.period, "p": seq.p, "q": seq.q, "digits": seq.as_text()}
    return (json.dumps(record, sort_keys=True) + "\n").encode("ascii")


def parse(data: Union[bytes, str]) -> QuaternarySequence:
    """
    Разбирает последовательность из любого из двух форматов.

    Формат определяется по первому непробельному символу: '{' означает
    структурированную запись.

    Raises:
        SequenceFormatError: При недопустимых символах, несовпадении длины
            с объявленным T или повреждённой записи
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise SequenceFormatError("Последовательность не в ASCII") from exc
    text = data.strip()
    if not text:
        raise SequenceFormatError("Пустая последовательность")

    p = q = None
    if text.startswith("{"):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SequenceFormatError(f"Повреждённая запись: {exc}") from exc
        if not isinstance(record, dict) or set(record) - STRUCTURED_KEYS:
            raise SequenceFormatError(
                f"Ожидались только ключи {sorted(STRUCTURED_KEYS)}"
            )
        if "T" not in record or "digits" not in record:
            raise SequenceFormatError("Запись должна содержать T и digits")
        declared, line = record["T"], record["digits"]
        p, q = record.get("p"), record.get("q")
        if not isinstance(line, str) or not isinstance(declared, int):
            raise SequenceFormatError("T должно быть целым, digits — строкой")
    else:
        line = text
        declared = None

    if "\n" in line:
        raise SequenceFormatError("Период должен занимать одну строку")
    bad = sorted(set(line) - set("0123"))
    if bad:
        raise SequenceFormatError(f"Недопустимые символы {bad}")
    if declared is not None and declared != len(line):
        raise SequenceFormatError(
            f"Длина {len(line)} не совпадает с объявленным T={declared}"
        )

    try:
        return QuaternarySequence(
            period=len(line), digits=tuple(map(int, line)), p=p, q=q
        )
    except ValidationError as exc:
        raise SequenceFormatError(str(exc)) from exc
