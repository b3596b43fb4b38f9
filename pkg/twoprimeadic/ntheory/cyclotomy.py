import logging
import time
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from gmpy2 import isqrt
from pydantic import ValidationError
from sympy import is_primitive_root, isprime
from sympy.ntheory.modular import crt

from twoprimeadic.core.exc import (
    CalibrationError,
    InvalidParametersError,
    TheoryMismatchError,
)
from twoprimeadic.core.utils import count_execute_time
from twoprimeadic.schemas.params import (
    ClassLabel,
    ClassTable,
    CyclotomicTable,
    Matrix4,
    TwoPrimeParams,
    pair_problem,
)


logger = logging.getLogger(__name__)


UNASSIGNED = 255

# Раскладка констант по таблицам для чётного и нечётного (p-1)(q-1)/16
EVEN_LAYOUT = ("ABCD", "EEDB", "AEAE", "EDBE")
ODD_LAYOUT = ("FGHI", "GIJJ", "HJHJ", "IJJG")


class PairKind(str, Enum):
    """Вид правой части сравнения x + y ≡ target (mod pq)."""

    ZERO = "zero"
    MULTIPLE_OF_P = "multiple_of_p"
    MULTIPLE_OF_Q = "multiple_of_q"


def validate_pair(p: int, q: int) -> None:
    """
    Проверяет пару (p, q) и выбрасывает исключение для недопустимой пары.

    Raises:
        InvalidParametersError: Если p, q не различные нечётные простые
            с gcd(p-1, q-1) = 4
    """
    problem = pair_problem(p, q)
    if problem:
        raise InvalidParametersError(problem)


def find_common_primitive_root(p: int, q: int) -> int:
    """
    Находит наименьший общий первообразный корень g < pq по модулям p и q.

    Args:
        p: Нечётное простое
        q: Нечётное простое, отличное от p

    Returns:
        int: Наименьшее g с порядком p-1 по модулю p и q-1 по модулю q

    Raises:
        InvalidParametersError: Если p = q или одно из чисел не простое
    """
    if p == q:
        raise InvalidParametersError(f"Простые должны различаться: {p}")
    for value in (p, q):
        if value < 3 or not isprime(value):
            raise InvalidParametersError(f"{value} не является нечётным простым")

    for g in range(2, p * q):
        if g % p == 0 or g % q == 0:
            continue
        if is_primitive_root(g, p) and is_primitive_root(g, q):
            logger.debug("Общий первообразный корень для (%d, %d): %d", p, q, g)
            return g
    raise TheoryMismatchError(f"Не найден общий первообразный корень для ({p}, {q})")


def derive_h(p: int, q: int, g: int) -> int:
    """Решает h ≡ g (mod p), h ≡ 1 (mod q) по китайской теореме об остатках."""
    solution = crt([p, q], [g % p, 1])
    if solution is None:
        raise InvalidParametersError(f"КТО не имеет решения для ({p}, {q})")
    return int(solution[0]) % (p * q)


@lru_cache(maxsize=256)
def make_params(p: int, q: int) -> TwoPrimeParams:
    """
    Строит каноническую TwoPrimeParams для упорядоченной пары (p, q).

    Raises:
        InvalidParametersError: Если пара недопустима
    """
    validate_pair(p, q)
    g = find_common_primitive_root(p, q)
    h = derive_h(p, q, g)
    try:
        return TwoPrimeParams(p=p, q=q, g=g, h=h, e=(p - 1) * (q - 1) // 4)
    except ValidationError as exc:
        raise InvalidParametersError(str(exc)) from exc


@lru_cache(maxsize=32)
def build_class_table(params: TwoPrimeParams) -> ClassTable:
    """
    Строит полную таблицу меток вычетов 0..pq-1.

    D_i заполняются перебором g^s·h^i (mod pq), s = 0..e-1, i = 0..3;
    кратные p получают метку P, кратные q — Q, ноль — R.

    Raises:
        TheoryMismatchError: Если классы пересекаются или не покрывают Z*_pq
    """
    start_time = time.time()
    p, q, n = params.p, params.q, params.pq
    labels = bytearray([UNASSIGNED]) * n
    labels[0] = ClassLabel.R
    for u in range(p, n, p):
        labels[u] = ClassLabel.P
    for u in range(q, n, q):
        labels[u] = ClassLabel.Q

    power = 1
    for _ in range(params.e):
        x = power
        for i in range(4):
            if labels[x] != UNASSIGNED:
                raise TheoryMismatchError(
                    f"Вычет {x} попал в два класса для ({p}, {q})"
                )
            labels[x] = i
            x = x * params.h % n
        power = power * params.g % n

    if UNASSIGNED in labels:
        raise TheoryMismatchError(f"Классы не покрывают Z*_{n}")

    logger.debug(
        "Таблица классов для (%d, %d) построена за %.3f сек",
        p,
        q,
        count_execute_time(start_time=start_time),
    )
    return ClassTable(params=params, labels=tuple(labels))


def cyclotomic_numbers_bruteforce(table: ClassTable) -> Matrix4:
    """Считает (i,j)_4 = |(1+D_i) ∩ D_j| прямым перебором."""
    labels = table.labels
    n = len(labels)
    counts = [[0] * 4 for _ in range(4)]
    for x in range(n):
        i = labels[x]
        if i < 4:
            j = labels[(x + 1) % n]
            if j < 4:
                counts[i][j] += 1
    return tuple(tuple(row) for row in counts)


def cyclotomic_constants(
    params: TwoPrimeParams,
    a: int,
    b: int,
    offsets: Optional[Mapping[str, int]] = None,
) -> Dict[str, int]:
    """
    Вычисляет константы A..E (чётный случай) или F..J (нечётный случай).

    Args:
        params: Параметры пары
        a: Параметр разложения pq = a² + 4b²
        b: Параметр разложения pq = a² + 4b²
        offsets: Сдвиги отдельных констант (для мутационных самопроверок)

    Returns:
        Dict[str, int]: Значения констант используемой таблицы

    Raises:
        CalibrationError: Если числитель какой-либо константы не делится на 8
    """
    M2 = 2 * _m_value(params)
    if params.parity_even:
        numerators = {
            "A": -a + M2 + 3,
            "B": -a - 4 * b + M2 - 1,
            "C": 3 * a + M2 - 1,
            "D": -a + 4 * b + M2 - 1,
            "E": a + M2 + 1,
        }
    else:
        numerators = {
            "F": 3 * a + M2 + 5,
            "G": -a + 4 * b + M2 + 1,
            "H": -a + M2 + 1,
            "I": -a - 4 * b + M2 + 1,
            "J": a + M2 - 1,
        }
    constants = {}
    for letter, numerator in numerators.items():
        if numerator % 8:
            raise CalibrationError(
                f"Константа {letter} = {numerator}/8 не целая для a={a}, b={b}"
            )
        constants[letter] = numerator // 8 + (offsets or {}).get(letter, 0)
    return constants


def cyclotomic_numbers_formula(
    params: TwoPrimeParams,
    a: int,
    b: int,
    offsets: Optional[Mapping[str, int]] = None,
) -> Matrix4:
    """
    Раскладывает константы по таблице чётного или нечётного случая.

    Raises:
        InvalidParametersError: Если pq ≠ a² + 4b² или a ≢ 1 (mod 4)
        CalibrationError: Если формулы дают нецелые значения
    """
    if a * a + 4 * b * b != params.pq or a % 4 != 1:
        raise InvalidParametersError(
            f"(a, b)=({a}, {b}) не удовлетворяет pq=a²+4b², a≡1 (mod 4)"
        )
    constants = cyclotomic_constants(params, a, b, offsets)
    layout = EVEN_LAYOUT if params.parity_even else ODD_LAYOUT
    return tuple(tuple(constants[letter] for letter in row) for row in layout)


def partition_candidates(n: int) -> List[Tuple[int, int]]:
    """Все пары (a, b) с n = a² + 4b² и a ≡ 1 (mod 4)."""
    candidates = []
    b = 0
    while 4 * b * b <= n:
        rest = n - 4 * b * b
        root = int(isqrt(rest))
        if root * root == rest:
            for a in sorted({root, -root}):
                if a % 4 == 1:
                    for signed_b in sorted({b, -b}):
                        candidates.append((a, signed_b))
        b += 1
    return candidates


def quadratic_partition(
    params: TwoPrimeParams, brute_matrix: Matrix4
) -> Tuple[int, int]:
    """
    Подбирает (a, b), при которых формулы таблиц воспроизводят brute_matrix.

    Raises:
        CalibrationError: Если подходящих кандидатов ноль или больше одного
    """
    candidates = partition_candidates(params.pq)
    if not candidates:
        raise CalibrationError(f"pq={params.pq} не представимо как a²+4b²")
    logger.debug("Кандидаты (a, b) для pq=%d: %s", params.pq, candidates)

    matches = []
    for a, b in candidates:
        try:
            formula = cyclotomic_numbers_formula(params, a, b)
        except CalibrationError:
            continue
        if formula == tuple(tuple(row) for row in brute_matrix):
            matches.append((a, b))

    if len(matches) != 1:
        raise CalibrationError(
            f"Для ({params.p}, {params.q}) подошло {len(matches)} пар (a, b): "
            f"{matches} из {candidates}"
        )
    return matches[0]


def calibrate(
    params: TwoPrimeParams, table: Optional[ClassTable] = None
) -> CyclotomicTable:
    """
    Строит CyclotomicTable: перебор, подбор (a, b) и константы формул.

    Args:
        params: Параметры пары
        table: Готовая таблица классов (иначе строится заново)

    Returns:
        CyclotomicTable: Матрица, совпадающая и с перебором, и с формулами
    """
    table = table or build_class_table(params)
    brute = cyclotomic_numbers_bruteforce(table)
    a, b = quadratic_partition(params, brute)
    return CyclotomicTable(
        p=params.p,
        q=params.q,
        counts=brute,
        a=a,
        b=b,
        M=_m_value(params),
        parity_even=params.parity_even,
        constants=cyclotomic_constants(params, a, b),
    )


def is_special_shift(params: TwoPrimeParams, k: int) -> bool:
    """
    Признак «особого» сдвига k, для которого -y лежит в D_{l+k} при y ∈ D_l.

    Это k = 0 при нечётном (p-1)(q-1)/16 и k = 2 при чётном.
    """
    return k % 4 == (2 if params.parity_even else 0)


def expected_pair_solutions(
    params: TwoPrimeParams, k: int, kind: PairKind
) -> int:
    """Число решений x + y ≡ target по формулам для пар x ∈ D_l, y ∈ D_{l+k}."""
    p, q = params.p, params.q
    special = is_special_shift(params, k)
    if kind is PairKind.ZERO:
        return (p - 1) * (q - 1) // 4 if special else 0
    if kind is PairKind.MULTIPLE_OF_P:
        if special:
            return (p - 1) * (q - 5) // 16
        return (p - 1) * (q - 1) // 16
    if special:
        return (p - 5) * (q - 1) // 16
    return (p - 1) * (q - 1) // 16


def _check_target(params: TwoPrimeParams, kind: PairKind, target: int) -> None:
    p, q = params.p, params.q
    if kind is PairKind.ZERO:
        valid = target == 0
    elif kind is PairKind.MULTIPLE_OF_P:
        valid = target % p == 0 and 1 <= target // p <= q - 1
    else:
        valid = target % q == 0 and 1 <= target // q <= p - 1
    if not valid:
        raise InvalidParametersError(
            f"Недопустимая правая часть {target} для вида {kind.value}"
        )


def count_pair_solutions(
    table: ClassTable, l: int, k: int, kind: PairKind, target: int
) -> int:
    """
    Считает перебором пары x ∈ D_l, y ∈ D_{l+k} с x + y ≡ target (mod pq).

    Для кратных p дополнительно требуется x + y ≢ 0 (mod q), для кратных
    q — x + y ≢ 0 (mod p).

    Raises:
        InvalidParametersError: Если target не подходит к виду kind
    """
    kind = PairKind(kind)
    params = table.params
    _check_target(params, kind, target)
    p, q, n = params.p, params.q, params.pq
    labels = table.labels
    wanted = (l + k) % 4
    count = 0
    for x in table.members(ClassLabel(l % 4)):
        y = (target - x) % n
        if labels[y] != wanted:
            continue
        total = x + y
        if kind is PairKind.MULTIPLE_OF_P and total % q == 0:
            continue
        if kind is PairKind.MULTIPLE_OF_Q and total % p == 0:
            continue
        count += 1
    return count


def pair_solution_profile(
    table: ClassTable, l: int, kind: PairKind
) -> Dict[int, Tuple[int, int, int, int]]:
    """
    Числа решений сразу для всех допустимых target и всех сдвигов k.

    Returns:
        Dict[int, Tuple[int, int, int, int]]: target -> счётчики по k = 0..3
    """
    kind = PairKind(kind)
    params = table.params
    p, q, n = params.p, params.q, params.pq
    if kind is PairKind.ZERO:
        targets = [0]
    elif kind is PairKind.MULTIPLE_OF_P:
        targets = [u * p for u in range(1, q)]
    else:
        targets = [v * q for v in range(1, p)]

    labels = table.labels
    profile = {target: [0, 0, 0, 0] for target in targets}
    for x in table.members(ClassLabel(l % 4)):
        for target in targets:
            y_label = labels[(target - x) % n]
            if y_label < 4:
                profile[target][(y_label - l) % 4] += 1
    return {target: tuple(row) for target, row in profile.items()}


def _m_value(params: TwoPrimeParams) -> int:
    return ((params.p - 2) * (params.q - 2) - 1) // 4

