import logging
import time
from math import gcd
from typing import Optional, Tuple

import gmpy2
from gmpy2 import mpz
from sympy import isprime

from twoprimeadic.core.config import settings
from twoprimeadic.core.exc import InvalidParametersError, TheoryMismatchError
from twoprimeadic.core.utils import count_execute_time
from twoprimeadic.schemas.params import (
    CaseTag,
    ClassLabel,
    ClassTable,
    TwoPrimeParams,
)
from twoprimeadic.schemas.reports import (
    ComplexityReport,
    ConjectureOutcome,
    GcdDecomposition,
)
from twoprimeadic.schemas.sequence import QuaternarySequence

from .cyclotomy import build_class_table, make_params, validate_pair
from .sequence import generate, reverse


logger = logging.getLogger(__name__)


def _check_base(m: int) -> None:
    if m < 2:
        raise InvalidParametersError(f"Основание m={m} должно быть не меньше 2")


def evaluate_poly_big(seq: QuaternarySequence, m: int) -> int:
    """
    Точно вычисляет S(m) = Σ digits[i]·m^i схемой Горнера со старшего члена.

    Raises:
        InvalidParametersError: Если m < 2
    """
    _check_base(m)
    base = mpz(m)
    acc = mpz(0)
    for digit in reversed(seq.digits):
        acc = acc * base + digit
    return int(acc)


def evaluate_poly_mod(seq: QuaternarySequence, m: int, modulus: int) -> int:
    """
    Вычисляет S(m) mod N за O(T) умножений-сложений по модулю N.

    Raises:
        InvalidParametersError: Если m < 2 или N < 2
    """
    _check_base(m)
    if modulus < 2:
        raise InvalidParametersError(f"Модуль N={modulus} должен быть не меньше 2")
    base = mpz(m)
    n = mpz(modulus)
    acc = mpz(0)
    for digit in reversed(seq.digits):
        acc = (acc * base + digit) % n
    return int(acc)


def ceil_log_ratio(m: int, numerator: int, denominator: int) -> int:
    """
    Наименьшее k ≥ 0 с m^k · denominator ≥ numerator.

    Границы поиска берутся из битовых длин, ответ уточняется двоичным
    поиском с точными целочисленными сравнениями.

    Raises:
        InvalidParametersError: Если m < 2 или аргументы не положительны
    """
    _check_base(m)
    if numerator < 1 or denominator < 1:
        raise InvalidParametersError("Аргументы логарифма должны быть ≥ 1")
    if numerator <= denominator:
        return 0
    lo = max(
        0,
        (numerator.bit_length() - denominator.bit_length() - 1)
        // m.bit_length(),
    )
    hi = lo + 1
    while pow(m, hi) * denominator < numerator:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pow(m, mid) * denominator >= numerator:
            hi = mid
        else:
            lo = mid
    return hi


def ceil_log(m: int, x: int) -> int:
    """
    Наименьшее k с m^k ≥ x, без арифметики с плавающей точкой.

    Raises:
        InvalidParametersError: Если x < 1 или m < 2
    """
    if x < 1:
        raise InvalidParametersError(f"ceil_log не определён для X={x}")
    return ceil_log_ratio(m, x, 1)


def complexity_from_value(value: int, m: int, period: int) -> int:
    """Φ_m по уже вычисленному S(m) и периоду T."""
    modulus = mpz(m) ** period - 1
    divisor = gmpy2.gcd(mpz(value), modulus)
    return ceil_log(m, int(modulus // divisor))


def madic_complexity(seq: QuaternarySequence, m: int) -> int:
    """
    m-адическая сложность ⌈log_m((m^T - 1) / gcd(S(m), m^T - 1))⌉.

    Args:
        seq: Последовательность периода T
        m: Основание, m ≥ 2

    Returns:
        int: Длина кратчайшего FCSR, порождающего последовательность
    """
    start_time = time.time()
    phi = complexity_from_value(evaluate_poly_big(seq, m), m, seq.period)
    logger.debug(
        "Φ_%d для периода %d = %d за %.3f сек",
        m,
        seq.period,
        phi,
        count_execute_time(start_time=start_time),
    )
    return phi


def symmetric_complexity(seq: QuaternarySequence, m: int) -> int:
    """Минимум сложностей последовательности и её обращения."""
    return min(madic_complexity(seq, m), madic_complexity(reverse(seq), m))


def hall_eval_mod(
    table: ClassTable, j: int, exponent_base: int, modulus: int
) -> int:
    """
    Значение H_j(4^w) = Σ_{u ∈ D_j} 4^{u·w mod pq} по модулю N.

    Raises:
        InvalidParametersError: Если w не взаимно просто с pq или N < 2
    """
    n = table.params.pq
    if gcd(exponent_base, n) != 1:
        raise InvalidParametersError(
            f"Показатель {exponent_base} не взаимно прост с pq={n}"
        )
    if modulus < 2:
        raise InvalidParametersError(f"Модуль N={modulus} должен быть не меньше 2")
    big_n = mpz(modulus)
    four = mpz(4)
    acc = mpz(0)
    for u in table.members(ClassLabel(j % 4)):
        acc += gmpy2.powmod(four, u * exponent_base % n, big_n)
    return int(acc % big_n)


def special_candidate(p: int, q: int) -> Tuple[CaseTag, int]:
    """Случай прогноза и особый делитель 2pq+1 (mixed) или 6pq+1 (both5)."""
    if p % 8 == 5 and q % 8 == 5:
        return CaseTag.BOTH5, 6 * p * q + 1
    return CaseTag.MIXED, 2 * p * q + 1


def theorem_prediction(p: int, q: int) -> ComplexityReport:
    """
    Прогноз 4-адической сложности по r1, r2 и особому делителю.

    Raises:
        InvalidParametersError: Если пара недопустима
        TheoryMismatchError: Если одновременно r1 > 1 и r2 > 1
    """
    validate_pair(p, q)
    pq = p * q
    r1 = gcd(p + 3, 4**q - 1)
    raw = gcd(q - 1, 4**p - 1)
    r2 = raw // 3 if q % 3 == 1 else raw
    if min(r1, r2) != 1:
        raise TheoryMismatchError(
            f"Для ({p}, {q}) одновременно r1={r1} > 1 и r2={r2} > 1"
        )
    r_max = r1 * r2

    case_tag, candidate = special_candidate(p, q)
    candidate_prime = isprime(candidate)
    full = 4**pq - 1
    predicted = {ceil_log(4, full // r_max)}
    if candidate_prime:
        predicted.add(ceil_log_ratio(4, full, candidate * r_max))
    logger.debug(
        "Прогноз для (%d, %d): r1=%d, r2=%d, d=%d, Φ ∈ %s",
        p,
        q,
        r1,
        r2,
        candidate,
        sorted(predicted),
    )
    return ComplexityReport(
        p=p,
        q=q,
        r1=r1,
        r2=r2,
        case_tag=case_tag,
        candidate_d=candidate,
        candidate_prime=candidate_prime,
        phi_predicted=tuple(sorted(predicted)),
    )


def decomposition_moduli(p: int, q: int) -> Tuple[int, int, int]:
    """
    Попарно взаимно простые множители 4^pq - 1.

    Returns:
        Tuple[int, int, int]: 4^p - 1, (4^q - 1)/3 и кофактор
            3(4^pq - 1)/((4^p - 1)(4^q - 1))
    """
    four_p, four_q, full = 4**p - 1, 4**q - 1, 4 ** (p * q) - 1
    cofactor, rest = divmod(3 * full, four_p * four_q)
    if rest:
        raise TheoryMismatchError(f"Кофактор для ({p}, {q}) не целый")
    return four_p, four_q // 3, cofactor


def decompose_value(params: TwoPrimeParams, value: int) -> GcdDecomposition:
    """
    Раскладывает gcd(value, 4^pq - 1) по трём множителям 4^pq - 1.

    Raises:
        TheoryMismatchError: Если произведение множителей не равно полному
            gcd или множители не взаимно просты
    """
    moduli = decomposition_moduli(params.p, params.q)
    big = mpz(value)
    gcd_p, gcd_q, gcd_cofactor = (int(gmpy2.gcd(big, mod)) for mod in moduli)
    gcd_total = int(gmpy2.gcd(big, mpz(4) ** params.pq - 1))

    if gcd_total != gcd_p * gcd_q * gcd_cofactor:
        raise TheoryMismatchError(
            f"gcd={gcd_total} ≠ {gcd_p}·{gcd_q}·{gcd_cofactor} "
            f"для ({params.p}, {params.q})"
        )
    for left, right in ((gcd_p, gcd_q), (gcd_p, gcd_cofactor), (gcd_q, gcd_cofactor)):
        if gcd(left, right) != 1:
            raise TheoryMismatchError(
                f"Множители gcd {left} и {right} не взаимно просты"
            )
    return GcdDecomposition(
        gcd_p=gcd_p,
        gcd_q=gcd_q,
        gcd_cofactor=gcd_cofactor,
        gcd_total=gcd_total,
    )


def gcd_decomposition(
    params: TwoPrimeParams, seq: QuaternarySequence
) -> GcdDecomposition:
    """
    gcd(E(4), ·) для трёх множителей 4^pq - 1 и полного модуля.

    Raises:
        InvalidParametersError: Если seq построена не для этих параметров
        TheoryMismatchError: Если нарушено тождество произведения
    """
    if (seq.p, seq.q) != params.key:
        raise InvalidParametersError(
            f"Последовательность ({seq.p}, {seq.q}) не соответствует "
            f"параметрам ({params.p}, {params.q})"
        )
    return decompose_value(params, evaluate_poly_big(seq, 4))


def conjecture_check(
    p: int, q: int, force_full: Optional[bool] = None
) -> ConjectureOutcome:
    """
    Проверяет, делит ли особое простое 2pq+1 или 6pq+1 значение E(4).

    Для составного кандидата ответ «не делит» выдаётся без вычисления
    последовательности, если не задан force_full.
    """
    validate_pair(p, q)
    if force_full is None:
        force_full = settings.FORCE_FULL_CHECK
    _, candidate = special_candidate(p, q)
    candidate_prime = isprime(candidate)
    if not candidate_prime and not force_full:
        return ConjectureOutcome(
            candidate_d=candidate,
            candidate_prime=False,
            d_divides=False,
            evaluated=False,
        )
    seq = generate(make_params(p, q))
    divides = evaluate_poly_mod(seq, 4, candidate) == 0
    if divides:
        logger.error("Найден делитель d=%d значения E(4) для (%d, %d)", candidate, p, q)
    return ConjectureOutcome(
        candidate_d=candidate,
        candidate_prime=candidate_prime,
        d_divides=divides,
        evaluated=True,
    )


def lower_bound_holds(p: int, q: int, phi: int) -> bool:
    """Точная форма оценки Φ > pq - log_4(p·q²) - 1: 4^{Φ+1}·p·q² > 4^{pq}."""
    return 4 ** (phi + 1) * p * q * q > 4 ** (p * q)


def complexity_report(
    p: int, q: int, exact: bool = True
) -> ComplexityReport:
    """
    Прогноз сложности и, при exact=True, точная сложность с разложением gcd.

    Returns:
        ComplexityReport: Отчёт; consistent = (phi_exact ∈ phi_predicted)
    """
    start_time = time.time()
    prediction = theorem_prediction(p, q)
    if not exact:
        return prediction

    params = make_params(p, q)
    seq = generate(params, build_class_table(params))
    value = evaluate_poly_big(seq, 4)
    decomposition = decompose_value(params, value)
    phi = ceil_log(4, (4**params.pq - 1) // decomposition.gcd_total)
    consistent = phi in prediction.phi_predicted
    if not consistent:
        logger.error(
            "Φ=%d для (%d, %d) вне прогноза %s", phi, p, q, prediction.phi_predicted
        )
    logger.info(
        "Точная сложность для (%d, %d): Φ=%d за %.3f сек",
        p,
        q,
        phi,
        count_execute_time(start_time=start_time),
    )
    return prediction.model_copy(
        update={
            "d_divides": prediction.candidate_prime
            and value % prediction.candidate_d == 0,
            "gcd_p": decomposition.gcd_p,
            "gcd_q": decomposition.gcd_q,
            "gcd_cofactor": decomposition.gcd_cofactor,
            "gcd_total": decomposition.gcd_total,
            "phi_exact": phi,
            "lower_bound_ok": lower_bound_holds(p, q, phi) if p < q else None,
            "consistent": consistent,
        }
    )
