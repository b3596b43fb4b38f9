import logging
import time
from math import gcd
from typing import List, Mapping, Optional, Sequence

from sympy import isprime

from twoprimeadic.core.config import settings
from twoprimeadic.core.utils import count_execute_time
from twoprimeadic.schemas.params import (
    CaseTag,
    ClassLabel,
    ClassTable,
    CyclotomicTable,
    Matrix4,
    TwoPrimeParams,
)
from twoprimeadic.schemas.reports import LemmaCheck, LemmaId, LemmaReport
from twoprimeadic.schemas.sequence import QuaternarySequence

from .adic import (
    decompose_value,
    decomposition_moduli,
    evaluate_poly_big,
    hall_eval_mod,
    madic_complexity,
    symmetric_complexity,
    theorem_prediction,
)
from .cyclotomy import (
    PairKind,
    build_class_table,
    calibrate,
    cyclotomic_numbers_bruteforce,
    expected_pair_solutions,
    is_special_shift,
    pair_solution_profile,
    validate_pair,
)
from .sequence import generate, reverse


logger = logging.getLogger(__name__)


# Утверждения, проверяемые по модулям d₀ и потому допускающие вакуумный проход
MODULUS_LEMMAS = (LemmaId.L4, LemmaId.L5, LemmaId.L6)

# Элементов D_k, для которых образ u·D_j сравнивается целиком
SHIFT_SAMPLE = 8


def find_cofactor_prime_divisors(p: int, q: int, lambda_max: int) -> List[int]:
    """
    Ищет простые d₀ = 1 + 2λpq, 1 ≤ λ ≤ lambda_max, по модулю которых
    порядок 4 равен ровно pq.

    Порядок pq означает 4^pq ≡ 1, 4^p ≢ 1 и 4^q ≢ 1 (mod d₀); такие d₀
    делят кофактор 3(4^pq - 1)/((4^p - 1)(4^q - 1)).

    Args:
        p: Первое простое пары
        q: Второе простое пары
        lambda_max: Верхняя граница λ

    Returns:
        List[int]: Найденные d₀ в порядке возрастания
    """
    validate_pair(p, q)
    start_time = time.time()
    n = p * q
    found = []
    for lam in range(1, lambda_max + 1):
        d = 1 + 2 * lam * n
        if not isprime(d):
            continue
        if pow(4, n, d) != 1 or pow(4, p, d) == 1 or pow(4, q, d) == 1:
            continue
        found.append(d)
    logger.debug(
        "Делители кофактора для (%d, %d), λ ≤ %d: %s за %.3f сек",
        p,
        q,
        lambda_max,
        found,
        count_execute_time(start_time=start_time),
    )
    return found


def _hall_values(table: ClassTable, modulus: int) -> List[int]:
    return [hall_eval_mod(table, j, 1, modulus) for j in range(4)]


def check_class_structure(
    table: ClassTable, cyclotomic: Optional[CyclotomicTable] = None
) -> LemmaReport:
    """
    Проверяет строение классов: мощности, h⁴ ∈ D₀, класс -1,
    мультипликативный сдвиг и чётность b в случае p ≡ q ≡ 5 (mod 8).
    """
    params = table.params
    p, q, n, e = params.p, params.q, params.pq, params.e
    checks = []

    expected_sizes = {ClassLabel.P: q - 1, ClassLabel.Q: p - 1, ClassLabel.R: 1}
    for label in ClassLabel:
        size = len(table.members(label))
        wanted = expected_sizes.get(label, e)
        checks.append(
            LemmaCheck(
                name=f"|{label.name}|",
                passed=size == wanted,
                detail=f"{size} (ожидалось {wanted})",
            )
        )

    h4 = pow(params.h, 4, n)
    checks.append(
        LemmaCheck(
            name="h^4 in D0",
            passed=table.class_of(h4) is ClassLabel.D0,
            detail=f"h^4 = {h4} ∈ {table.class_of(h4).name}",
        )
    )

    minus_one = ClassLabel.D2 if params.parity_even else ClassLabel.D0
    checks.append(
        LemmaCheck(
            name="-1 class",
            passed=table.class_of(n - 1) is minus_one,
            detail=f"-1 ∈ {table.class_of(n - 1).name}, ожидалось {minus_one.name}",
        )
    )

    for k in range(4):
        shifters = table.members(ClassLabel(k))
        step = max(1, len(shifters) // SHIFT_SAMPLE)
        for j in range(4):
            sources = table.members(ClassLabel(j))
            target = ClassLabel((j + k) % 4)
            stray = [u for u in shifters if table.class_of(u * sources[0]) is not target]
            checks.append(
                LemmaCheck(
                    name=f"D{k}·{sources[0]} ⊂ D{int(target)}",
                    passed=not stray,
                    detail=f"нарушают: {stray[:5]}" if stray else f"{len(shifters)} элементов",
                )
            )
            for u in shifters[::step]:
                image = sorted(u * x % n for x in sources)
                checks.append(
                    LemmaCheck(
                        name=f"u={u}·D{j}",
                        passed=tuple(image) == table.members(target),
                        detail=f"ожидалось D{int(target)}",
                    )
                )

    if params.case_tag is CaseTag.BOTH5:
        cyclotomic = cyclotomic or calibrate(params, table)
        checks.append(
            LemmaCheck(
                name="b even",
                passed=cyclotomic.b % 2 == 0,
                detail=f"b = {cyclotomic.b}",
            )
        )
    return LemmaReport.from_checks(LemmaId.CLS, params, checks)


def check_residue_identities(
    params: TwoPrimeParams,
    seq: Optional[QuaternarySequence] = None,
    table: Optional[ClassTable] = None,
) -> LemmaReport:
    """
    Точные вычеты E(4) по модулям 3, 4^q - 1, 4^p - 1, вычеты H_j(4),
    сборка E(4) = U(4) + 2(4^pq - 1)/(4^q - 1) и совпадение множителей
    gcd с r1 и r2.
    """
    p, q, n = params.p, params.q, params.pq
    table = table or build_class_table(params)
    seq = seq or generate(params, table)
    value = evaluate_poly_big(seq, 4)
    four_p, four_q, full = 4**p - 1, 4**q - 1, 4**n - 1

    def residue(name: str, modulus: int, actual: int, expected: int) -> LemmaCheck:
        actual, expected = actual % modulus, expected % modulus
        return LemmaCheck(
            name=name,
            passed=actual == expected,
            modulus=modulus,
            detail=f"{actual} (ожидалось {expected})",
        )

    checks = [
        residue("E(4) mod 3", 3, value, 2 * p),
        LemmaCheck(name="3 does not divide E(4)", passed=value % 3 != 0),
        residue("E(4) mod 4^q-1", four_q, value, (p + 3) // 2),
        residue(
            "E(4) mod 4^p-1", four_p, value, -3 * (q - 1) // 2 + 2 * (four_p // 3)
        ),
        LemmaCheck(
            name="gcd(4^p-1, 4^q-1) = 3",
            passed=gcd(four_p, four_q) == 3,
            detail=f"gcd = {gcd(four_p, four_q)}",
        ),
        LemmaCheck(
            name="9 does not divide 4^p-1, 4^q-1",
            passed=four_p % 9 != 0 and four_q % 9 != 0,
        ),
    ]
    for j in range(4):
        checks.append(
            residue(
                f"H{j}(4) mod 4^q-1",
                four_q,
                hall_eval_mod(table, j, 1, four_q),
                (p - 1) // 4 * (four_q // 3 - 1),
            )
        )
        checks.append(
            residue(
                f"H{j}(4) mod 4^p-1",
                four_p,
                hall_eval_mod(table, j, 1, four_p),
                (q - 1) // 4 * (four_p // 3 - 1),
            )
        )

    exact = 4**n
    hall = _hall_values(table, exact)
    assembled = hall[1] + 2 * hall[2] + 3 * hall[3] + 2 * (full // four_q)
    checks.append(
        LemmaCheck(
            name="E(4) = U(4) + 2(4^pq-1)/(4^q-1)",
            passed=assembled == value,
        )
    )

    prediction = theorem_prediction(p, q)
    decomposition = decompose_value(params, value)
    checks.append(
        LemmaCheck(
            name="gcd(E(4), (4^q-1)/3) = r1",
            passed=decomposition.gcd_q == prediction.r1,
            detail=f"{decomposition.gcd_q} (r1 = {prediction.r1})",
        )
    )
    checks.append(
        LemmaCheck(
            name="gcd(E(4), 4^p-1) = r2",
            passed=decomposition.gcd_p == prediction.r2,
            detail=f"{decomposition.gcd_p} (r2 = {prediction.r2})",
        )
    )
    return LemmaReport.from_checks(
        LemmaId.RES, params, checks, moduli=(3, four_q, four_p)
    )


def check_lemma2(table: ClassTable) -> LemmaReport:
    """
    Сравнивает числа решений x + y ≡ target с формулами для всех l, k,
    всех видов правой части и всех допустимых target.
    """
    params = table.params
    checks = []
    for kind in PairKind:
        for l in range(4):
            profile = pair_solution_profile(table, l, kind)
            for k in range(4):
                expected = expected_pair_solutions(params, k, kind)
                wrong = [
                    target
                    for target, counts in profile.items()
                    if counts[k] != expected
                ]
                checks.append(
                    LemmaCheck(
                        name=f"{kind.value} l={l} k={k}",
                        passed=not wrong,
                        detail=(
                            f"ожидалось {expected}; расхождения при target={wrong[:5]}"
                            if wrong
                            else f"{expected} для {len(profile)} target"
                        ),
                    )
                )
    return LemmaReport.from_checks(LemmaId.L2, params, checks)


def lemma4_delta(
    params: TwoPrimeParams, k: int, offsets: Optional[Mapping[str, int]] = None
) -> int:
    """
    Свободный член Δ произведения H_l(4)·H_{l+k}(4).

    Ключи offsets: "special" и "generic" (сдвиги для самопроверок).
    """
    p, q = params.p, params.q
    offsets = offsets or {}
    if is_special_shift(params, k):
        return ((p + 1) * (q + 1) - 4) // 8 + offsets.get("special", 0)
    return -(p - 1) * (q - 1) // 8 + offsets.get("generic", 0)


def check_lemma4(
    table: ClassTable,
    moduli: Sequence[int],
    counts: Optional[Matrix4] = None,
    delta_offsets: Optional[Mapping[str, int]] = None,
) -> LemmaReport:
    """
    H_l(4)·H_{l+k}(4) ≡ Σ_f (k,f)₄·H_{f+l}(4) + Δ (mod d) для всех l, k.

    Args:
        table: Таблица классов
        moduli: Делители кофактора d (пустой список даёт вакуумный проход)
        counts: Циклотомические числа (по умолчанию перебором)
        delta_offsets: Сдвиги ветвей Δ для мутационных самопроверок
    """
    params = table.params
    counts = counts or cyclotomic_numbers_bruteforce(table)
    checks = []
    for d in moduli:
        hall = _hall_values(table, d)
        for k in range(4):
            delta = lemma4_delta(params, k, delta_offsets)
            for l in range(4):
                lhs = hall[l] * hall[(l + k) % 4] % d
                rhs = (
                    sum(counts[k][f] * hall[(f + l) % 4] for f in range(4)) + delta
                ) % d
                checks.append(
                    LemmaCheck(
                        name=f"l={l} k={k}",
                        passed=lhs == rhs,
                        modulus=d,
                        detail=f"Δ={delta}",
                    )
                )
    return LemmaReport.from_checks(LemmaId.L4, params, checks, moduli=moduli)


def check_lemma5(
    params: TwoPrimeParams,
    moduli: Sequence[int],
    cyclotomic: Optional[CyclotomicTable] = None,
    constant_offset: int = 0,
    table: Optional[ClassTable] = None,
) -> LemmaReport:
    """
    4U(4)U(4^{h²}) ≡ -2(4b+3)𝓗 + c (mod d), где c = 5pq+9 при чётном
    (p-1)(q-1)/16 и c = -3pq+9 при нечётном, 𝓗 = H₀+H₂-H₁-H₃.

    b берётся из калибровки: неверная калибровка проявится как провал.
    """
    table = table or build_class_table(params)
    if moduli and cyclotomic is None:
        cyclotomic = calibrate(params, table)
    n = params.pq
    h_squared = params.h * params.h % n
    free = (5 * n + 9 if params.parity_even else -3 * n + 9) + constant_offset
    checks = []
    for d in moduli:
        hall = _hall_values(table, d)
        shifted = [hall_eval_mod(table, j, h_squared, d) for j in range(4)]
        u_value = hall[1] + 2 * hall[2] + 3 * hall[3]
        u_shifted = shifted[1] + 2 * shifted[2] + 3 * shifted[3]
        big_h = hall[0] + hall[2] - hall[1] - hall[3]
        lhs = 4 * u_value * u_shifted % d
        rhs = (-2 * (4 * cyclotomic.b + 3) * big_h + free) % d
        checks.append(
            LemmaCheck(
                name="4U(4)U(4^h^2)",
                passed=lhs == rhs,
                modulus=d,
                detail=f"b={cyclotomic.b}, c={free}",
            )
        )
    return LemmaReport.from_checks(LemmaId.L5, params, checks, moduli=moduli)


def check_lemma6(
    params: TwoPrimeParams,
    moduli: Sequence[int],
    table: Optional[ClassTable] = None,
) -> LemmaReport:
    """𝓗² ≡ pq и H₀ + H₁ + H₂ + H₃ ≡ 1 по каждому модулю d."""
    table = table or build_class_table(params)
    checks = []
    for d in moduli:
        hall = _hall_values(table, d)
        big_h = hall[0] + hall[2] - hall[1] - hall[3]
        checks.append(
            LemmaCheck(
                name="H^2 = pq",
                passed=(big_h * big_h - params.pq) % d == 0,
                modulus=d,
            )
        )
        checks.append(
            LemmaCheck(
                name="H0+H1+H2+H3 = 1",
                passed=(sum(hall) - 1) % d == 0,
                modulus=d,
            )
        )
    return LemmaReport.from_checks(LemmaId.L6, params, checks, moduli=moduli)


def check_lemma7(
    params: TwoPrimeParams,
    table: Optional[ClassTable] = None,
    seq: Optional[QuaternarySequence] = None,
) -> LemmaReport:
    """
    Сравнение обращённой последовательности с исходной по модулю 4^pq - 1.

    При нечётном (p-1)(q-1)/16 проверяется 4Ẽ(4) ≡ E(4), при чётном
    4Ẽ(4) ≡ U(4^{h²}) + 2Σ_{u<p} 4^{uq}.
    """
    table = table or build_class_table(params)
    p, q, n = params.p, params.q, params.pq
    modulus = 4**n - 1
    seq = seq or generate(params, table)
    mirrored_value = evaluate_poly_big(reverse(seq), 4)

    if params.parity_even:
        h_squared = params.h * params.h % n
        shifted = [hall_eval_mod(table, j, h_squared, modulus) for j in range(4)]
        hall = _hall_values(table, modulus)
        u_shifted = shifted[1] + 2 * shifted[2] + 3 * shifted[3]
        u_rotated = 2 * hall[0] + 3 * hall[1] + hall[3]
        checks = [
            LemmaCheck(
                name="U(4^h^2) = 2H0+3H1+H3",
                passed=(u_shifted - u_rotated) % modulus == 0,
                modulus=modulus,
            )
        ]
        expected = u_shifted + 2 * sum(4 ** (u * q) for u in range(p))
        name = "4E~(4) = U(4^h^2) + 2Σ4^uq"
    else:
        expected = evaluate_poly_big(seq, 4)
        checks = []
        name = "4E~(4) = E(4)"
    checks.append(
        LemmaCheck(
            name=name,
            passed=(4 * mirrored_value - expected) % modulus == 0,
            modulus=modulus,
        )
    )
    return LemmaReport.from_checks(LemmaId.L7, params, checks, moduli=(modulus,))


def check_theorem2(
    params: TwoPrimeParams, seq: Optional[QuaternarySequence] = None
) -> LemmaReport:
    """Равенство 4-адических сложностей обращённой и исходной последовательностей."""
    seq = seq or generate(params)
    mirrored = reverse(seq)
    phi = madic_complexity(seq, 4)
    phi_mirrored = madic_complexity(mirrored, 4)
    symmetric = symmetric_complexity(seq, 4)
    checks = [
        LemmaCheck(
            name="Φ(reverse) = Φ",
            passed=phi == phi_mirrored,
            detail=f"{phi_mirrored} и {phi}",
        ),
        LemmaCheck(
            name="reverse(reverse) = identity",
            passed=reverse(mirrored) == seq,
        ),
        LemmaCheck(
            name="symmetric Φ = Φ",
            passed=symmetric == phi,
            detail=f"{symmetric}",
        ),
    ]
    return LemmaReport.from_checks(LemmaId.T2, params, checks)


def check_lemma7_and_theorem2(
    params: TwoPrimeParams, table: Optional[ClassTable] = None
) -> LemmaReport:
    """
    Сравнение для обращения и равенство сложностей одним отчётом T2.

    verify_all выдаёт эти части раздельно, как L7 и T2.
    """
    table = table or build_class_table(params)
    seq = generate(params, table)
    congruence = check_lemma7(params, table, seq)
    complexity = check_theorem2(params, seq)
    return LemmaReport.from_checks(
        LemmaId.T2,
        params,
        congruence.checks + complexity.checks,
        moduli=congruence.moduli,
    )


def check_divisor_square(
    params: TwoPrimeParams,
    moduli: Sequence[int],
    seq: Optional[QuaternarySequence] = None,
) -> LemmaReport:
    """
    Для каждого d₀, делящего E(4), проверяет, что d₀² не делит E(4).

    Делящие d₀ не ожидаются, поэтому отчёт обычно вакуумный.
    """
    seq = seq or generate(params)
    value = evaluate_poly_big(seq, 4)
    checks = []
    for d in moduli:
        if value % d:
            continue
        logger.error("d₀=%d делит E(4) для (%d, %d)", d, params.p, params.q)
        checks.append(
            LemmaCheck(
                name="d0^2 does not divide E(4)",
                passed=value % (d * d) != 0,
                modulus=d,
            )
        )
    return LemmaReport.from_checks(LemmaId.SQ, params, checks, moduli=moduli)


def verify_all(
    params: TwoPrimeParams,
    lambda_max: Optional[int] = None,
    include_cofactor: bool = False,
) -> List[LemmaReport]:
    """
    Прогоняет все проверки для пары: CLS, RES, L2, L4, L5, L6, L7, T2, SQ.

    Args:
        params: Параметры пары
        lambda_max: Граница поиска d₀ (по умолчанию settings.LAMBDA_MAX)
        include_cofactor: Добавить сам кофактор к модулям L4–L6

    Returns:
        List[LemmaReport]: Отчёты в фиксированном порядке
    """
    start_time = time.time()
    if lambda_max is None:
        lambda_max = settings.LAMBDA_MAX
    table = build_class_table(params)
    cyclotomic = calibrate(params, table)
    seq = generate(params, table)

    divisors = find_cofactor_prime_divisors(params.p, params.q, lambda_max)
    moduli = list(divisors)
    if include_cofactor:
        moduli.append(decomposition_moduli(params.p, params.q)[2])

    reports = [
        check_class_structure(table, cyclotomic),
        check_residue_identities(params, seq, table),
        check_lemma2(table),
        check_lemma4(table, moduli, cyclotomic.counts),
        check_lemma5(params, moduli, cyclotomic, table=table),
        check_lemma6(params, moduli, table),
        check_lemma7(params, table, seq),
        check_theorem2(params, seq),
        check_divisor_square(params, divisors, seq),
    ]
    for report in reports:
        if report.lemma_id in MODULUS_LEMMAS and report.vacuous:
            logger.warning(
                "%s для (%d, %d): модуль не найден (λ ≤ %d), проверка вакуумна",
                report.lemma_id.value,
                params.p,
                params.q,
                lambda_max,
            )
        elif not report.passed:
            logger.error(
                "%s для (%d, %d) не пройдена: %s",
                report.lemma_id.value,
                params.p,
                params.q,
                [check.name for check in report.failures],
            )
    logger.info(
        "Проверки для (%d, %d) завершены за %.3f сек",
        params.p,
        params.q,
        count_execute_time(start_time=start_time),
    )
    return reports
