import random

import pytest

from twoprimeadic.cli.scan import enumerate_pairs
from twoprimeadic.core.exc import InvalidParametersError
from twoprimeadic.ntheory.adic import (
    ceil_log,
    ceil_log_ratio,
    complexity_report,
    conjecture_check,
    decomposition_moduli,
    evaluate_poly_big,
    evaluate_poly_mod,
    gcd_decomposition,
    hall_eval_mod,
    lower_bound_holds,
    madic_complexity,
    symmetric_complexity,
    theorem_prediction,
)
from twoprimeadic.ntheory.sequence import generate
from twoprimeadic.schemas.params import CaseTag, ClassLabel
from twoprimeadic.schemas.sequence import QuaternarySequence


def _seq(digits):
    return QuaternarySequence(period=len(digits), digits=tuple(digits))


class TestPolynomialEvaluation:
    def test_small_value(self):
        """(1, 0, 1) при m = 4 даёт 1 + 16 = 17."""
        assert evaluate_poly_big(_seq([1, 0, 1]), 4) == 17

    def test_all_zero(self):
        """Нулевая последовательность даёт 0."""
        assert evaluate_poly_big(_seq([0] * 9), 4) == 0

    def test_base_must_be_at_least_two(self):
        """m < 2 отвергается."""
        with pytest.raises(InvalidParametersError):
            evaluate_poly_big(_seq([1]), 1)

    def test_modulus_must_be_at_least_two(self):
        """N < 2 отвергается."""
        with pytest.raises(InvalidParametersError):
            evaluate_poly_mod(_seq([1]), 4, 1)

    def test_mod_agrees_with_big(self):
        """Модульная схема совпадает с точным значением на 100 случайных входах."""
        rng = random.Random(20240601)
        for _ in range(100):
            digits = [rng.randrange(4) for _ in range(rng.randrange(1, 40))]
            m = rng.choice([2, 3, 4, 7])
            modulus = rng.randrange(2, 10**12)
            seq = _seq(digits)
            assert evaluate_poly_mod(seq, m, modulus) == evaluate_poly_big(seq, m) % modulus

    def test_residues_5_13(self, seq_5_13):
        """
        Тестирует точные вычеты E(4) для (5, 13).
        Проверяет E ≡ 2p (mod 3), (p+3)/2 (mod 4¹³-1) и -3(q-1)/2 + 2(4⁵-1)/3 (mod 4⁵-1).
        """
        assert evaluate_poly_big(seq_5_13, 4) % 3 == 1
        assert evaluate_poly_mod(seq_5_13, 4, 4**13 - 1) == 4
        assert evaluate_poly_mod(seq_5_13, 4, 4**5 - 1) == 664


class TestCeilLog:
    @pytest.mark.parametrize(
        "m, x, expected",
        [(4, 1, 0), (4, 16, 2), (4, 17, 3), (2, 2, 1), (4, 4**200, 200), (4, 4**200 + 1, 201)],
    )
    def test_values(self, m, x, expected):
        """Граничные значения m^k и чуть выше."""
        assert ceil_log(m, x) == expected

    def test_zero_rejected(self):
        """X = 0 отвергается."""
        with pytest.raises(InvalidParametersError):
            ceil_log(4, 0)

    def test_ratio(self):
        """Наименьшее k с 4^k · 11 ≥ 4^205 - 1 равно 204."""
        assert ceil_log_ratio(4, 4**205 - 1, 11) == 204
        assert ceil_log_ratio(4, 5, 7) == 0

    def test_bracketing_property(self):
        """m^Φ ≥ X и m^(Φ-1) < X для случайных больших X."""
        rng = random.Random(7)
        for _ in range(50):
            x = rng.randrange(2, 2**3000)
            k = ceil_log(4, x)
            assert 4**k >= x > 4 ** (k - 1)


class TestMadicComplexity:
    def test_all_zero(self):
        """Нулевая последовательность имеет сложность 0."""
        assert madic_complexity(_seq([0] * 11), 4) == 0

    def test_single_one(self):
        """«1000…0»: S(4) = 1, gcd = 1, сложность T."""
        assert madic_complexity(_seq([1] + [0] * 12), 4) == 13

    def test_generated_5_13(self, seq_5_13):
        """Сложность последовательности (5, 13) равна pq = 65."""
        assert madic_complexity(seq_5_13, 4) == 65

    def test_symmetric(self, seq_5_13):
        """Симметричная сложность совпадает с обычной."""
        assert symmetric_complexity(seq_5_13, 4) == 65

    def test_binary_base(self):
        """m = 2: «1110» даёт 4, «1010» (истинный период 2) даёт 2."""
        assert madic_complexity(_seq([1, 1, 1, 0]), 2) == 4
        assert madic_complexity(_seq([1, 0, 1, 0]), 2) == 2


class TestHallPolynomials:
    def test_geometric_sum(self, table_5_13):
        """
        Тестирует полное покрытие вычетов.
        Проверяет Σ_j H_j(4) + Σ_{P∪Q} 4^u + 1 ≡ (4^pq - 1)/3 по нескольким модулям.
        """
        others = table_5_13.members(ClassLabel.P) + table_5_13.members(ClassLabel.Q)
        for modulus in (131, 4**13 - 1, 10**9 + 7, 4**65 - 1):
            total = sum(hall_eval_mod(table_5_13, j, 1, modulus) for j in range(4))
            total += sum(pow(4, u, modulus) for u in others) + 1
            assert total % modulus == (4**65 - 1) // 3 % modulus

    def test_residue_mod_four_q(self, table_5_13):
        """H_j(4) mod (4¹³-1) = 22369620 для всех j."""
        for j in range(4):
            assert hall_eval_mod(table_5_13, j, 1, 4**13 - 1) == 22369620

    def test_shift_by_h_squared(self, params_5_13, table_5_13):
        """H_j(4^{h²}) ≡ H_{j+2}(4) (mod 4^pq - 1)."""
        modulus = 4**65 - 1
        for j in range(4):
            assert hall_eval_mod(table_5_13, j, 14, modulus) == hall_eval_mod(
                table_5_13, (j + 2) % 4, 1, modulus
            )

    def test_non_coprime_exponent(self, table_5_13):
        """Показатель 5 не взаимно прост с 65."""
        with pytest.raises(InvalidParametersError):
            hall_eval_mod(table_5_13, 0, 5, 1000)


class TestPrediction:
    def test_5_13(self):
        """r1 = r2 = 1, кандидат 391 = 17·23 составной, прогноз {65}."""
        report = theorem_prediction(5, 13)
        assert (report.r1, report.r2) == (1, 1)
        assert report.case_tag is CaseTag.BOTH5
        assert report.candidate_d == 391
        assert report.candidate_prime is False
        assert report.phi_predicted == (65,)

    def test_41_5(self):
        """r1 = gcd(44, 1023) = 11, r2 = 1, прогноз содержит 204."""
        report = theorem_prediction(41, 5)
        assert (report.r1, report.r2) == (11, 1)
        assert report.case_tag is CaseTag.MIXED
        assert report.candidate_d == 411
        assert 204 in report.phi_predicted

    def test_5_1117(self):
        """r2 = gcd(1116, 1023)/3 = 31, прогноз pq-2."""
        report = theorem_prediction(5, 1117)
        assert (report.r1, report.r2) == (1, 31)
        assert 5 * 1117 - 2 in report.phi_predicted

    def test_prime_candidate_adds_branch(self):
        """(5, 61): 6pq+1 = 1831 простое, прогноз из двух значений."""
        report = theorem_prediction(5, 61)
        assert report.candidate_d == 1831
        assert report.candidate_prime is True
        assert len(report.phi_predicted) == 2
        assert max(report.phi_predicted) == 305

    def test_min_of_r_is_one(self):
        """Одно из r1, r2 всегда равно 1."""
        for p, q in enumerate_pairs(3000):
            report = theorem_prediction(p, q)
            assert min(report.r1, report.r2) == 1


class TestGcdDecomposition:
    def test_5_13(self, params_5_13, seq_5_13):
        """Все три множителя gcd равны 1, полный gcd тоже."""
        decomposition = gcd_decomposition(params_5_13, seq_5_13)
        assert decomposition.gcd_q == 1
        assert decomposition.gcd_p == 1
        assert decomposition.gcd_total == 1

    def test_41_5(self, params_41_5):
        """gcd(E(4), (4⁵-1)/3) = r1 = 11."""
        decomposition = gcd_decomposition(params_41_5, generate(params_41_5))
        assert decomposition.gcd_q == 11
        assert decomposition.gcd_total == 11

    def test_moduli_multiply_to_full(self):
        """(4^p-1) · (4^q-1)/3 · кофактор = 4^pq - 1."""
        for p, q in [(5, 13), (13, 5), (5, 41)]:
            a, b, c = decomposition_moduli(p, q)
            assert a * b * c == 4 ** (p * q) - 1

    def test_foreign_sequence_rejected(self, params_5_13, params_13_5):
        """Последовательность другой пары отвергается."""
        with pytest.raises(InvalidParametersError):
            gcd_decomposition(params_5_13, generate(params_13_5))


class TestConjecture:
    def test_composite_short_circuit(self):
        """(41, 5): 411 = 3·137 составное, E(4) не вычисляется."""
        outcome = conjecture_check(41, 5)
        assert outcome.candidate_d == 411
        assert outcome.candidate_prime is False
        assert outcome.d_divides is False
        assert outcome.evaluated is False

    def test_force_full(self):
        """force_full вычисляет E(4) mod d и для составного кандидата."""
        outcome = conjecture_check(5, 13, force_full=True)
        assert outcome.evaluated is True
        assert outcome.candidate_d == 391

    @pytest.mark.parametrize("p, q, d", [(5, 61, 1831), (5, 97, 971)])
    def test_prime_candidate_does_not_divide(self, p, q, d):
        """Простой кандидат проверяется и не делит E(4)."""
        outcome = conjecture_check(p, q)
        assert outcome.candidate_d == d
        assert outcome.candidate_prime is True
        assert outcome.evaluated is True
        assert outcome.d_divides is False

    def test_mixed_candidate_for_5_89(self):
        """89 ≡ 1 (mod 8): смешанный случай, 2pq+1 = 891 = 81·11."""
        outcome = conjecture_check(5, 89)
        assert outcome.candidate_d == 891
        assert outcome.candidate_prime is False


class TestComplexityReport:
    def test_5_13(self):
        """Φ = 65 совпадает с прогнозом; нижняя оценка выполнена."""
        report = complexity_report(5, 13)
        assert report.phi_exact == 65
        assert report.consistent is True
        assert report.lower_bound_ok is True
        assert report.gcd_total == report.gcd_p * report.gcd_q * report.gcd_cofactor

    def test_41_5(self):
        """Φ = 204 = pq-1; для p > q нижняя оценка не применяется."""
        report = complexity_report(41, 5)
        assert report.phi_exact == 204
        assert report.consistent is True
        assert report.lower_bound_ok is None

    def test_predict_only(self):
        """exact=False оставляет точные поля пустыми."""
        report = complexity_report(5, 13, exact=False)
        assert report.phi_exact is None
        assert report.consistent is None

    def test_lower_bound_exact_form(self):
        """4^{Φ+1}·p·q² > 4^pq: Φ = pq-4 проходит для (5, 13), Φ = 50 нет."""
        assert lower_bound_holds(5, 13, 61) is True
        assert lower_bound_holds(5, 13, 50) is False

    def test_consistency_up_to_1000(self):
        """Φ ∈ прогнозу и gcd раскладывается на три множителя для pq ≤ 1000."""
        for p, q in enumerate_pairs(1000):
            report = complexity_report(p, q)
            assert report.consistent is True
            assert report.gcd_total == report.gcd_p * report.gcd_q * report.gcd_cofactor
            if p < q:
                assert report.lower_bound_ok is True


@pytest.mark.slow
class TestLargePairs:
    @pytest.mark.parametrize(
        "p, q, r1, r2, drop",
        [
            (41, 5, 11, 1, 1),
            (617, 5, 31, 1, 2),
            (1361, 5, 341, 1, 4),
            (233, 29, 59, 1, 2),
            (5, 89, 1, 11, 1),
            (5, 1117, 1, 31, 2),
            (5, 2729, 1, 341, 4),
        ],
    )
    def test_known_drops(self, p, q, r1, r2, drop):
        """
        Тестирует сложность для больших пар.
        Проверяет r1, r2 и Φ = pq - drop точным равенством.
        """
        report = complexity_report(p, q)
        assert (report.r1, report.r2) == (r1, r2)
        assert report.phi_exact == p * q - drop
        assert report.consistent is True

    def test_consistency_sample_up_to_20000(self):
        """Выборка из 60 пар с pq ≤ 20000, оба случая по модулю 8."""
        pairs = enumerate_pairs(20000)
        sample = pairs[:: max(1, len(pairs) // 60)]
        cases = set()
        for p, q in sample:
            report = complexity_report(p, q)
            cases.add(report.case_tag)
            assert report.consistent is True
            if p < q:
                assert report.lower_bound_ok is True
        assert cases == {CaseTag.MIXED, CaseTag.BOTH5}
