import pytest
from pydantic import ValidationError

from twoprimeadic.cli.scan import enumerate_pairs
from twoprimeadic.core.exc import CalibrationError, InvalidParametersError
from twoprimeadic.ntheory.cyclotomy import (
    PairKind,
    build_class_table,
    calibrate,
    count_pair_solutions,
    cyclotomic_numbers_bruteforce,
    cyclotomic_numbers_formula,
    derive_h,
    expected_pair_solutions,
    find_common_primitive_root,
    make_params,
    pair_solution_profile,
    partition_candidates,
    quadratic_partition,
)
from twoprimeadic.schemas.params import CaseTag, ClassLabel, TwoPrimeParams


EVEN_PAIRS = [(5, 17), (17, 5), (5, 41), (41, 5), (5, 73), (13, 17)]
ODD_PAIRS = [(5, 13), (13, 5), (5, 29), (29, 5), (5, 37), (5, 53)]


class TestParams:
    def test_derived_frame_5_13(self, params_5_13):
        """
        Тестирует вывод параметров для (5, 13).
        Проверяет g = 2, h = 27, e = 12.
        """
        assert (params_5_13.g, params_5_13.h, params_5_13.e) == (2, 27, 12)

    def test_parity_and_case(self, params_5_13, params_5_41):
        """(5,13): (4·12)/16 = 3 нечётно; (5,41): 10 чётно."""
        assert params_5_13.parity_even is False
        assert params_5_41.parity_even is True
        assert params_5_13.case_tag is CaseTag.BOTH5
        assert params_5_41.case_tag is CaseTag.MIXED

    def test_smallest_primitive_root(self):
        """Наименьший общий первообразный корень 5 и 13 равен 2."""
        assert find_common_primitive_root(5, 13) == 2

    def test_derive_h(self):
        """h ≡ g (mod p), h ≡ 1 (mod q)."""
        assert derive_h(5, 13, 2) == 27

    @pytest.mark.parametrize(
        "p, q",
        [(7, 11), (7, 13), (5, 5), (5, 15), (3, 13), (1, 13)],
    )
    def test_invalid_pairs(self, p, q):
        """
        Тестирует отказ для недопустимых пар.
        Проверяет, что выбрасывается InvalidParametersError.
        """
        with pytest.raises(InvalidParametersError):
            make_params(p, q)

    def test_wrong_root_rejected(self):
        """3 не первообразный корень по модулю 13 (порядок 3)."""
        with pytest.raises(ValidationError):
            TwoPrimeParams(p=5, q=13, g=3, h=53, e=12)

    def test_wrong_h_rejected(self):
        """h должно быть ≡ 1 (mod q)."""
        with pytest.raises(ValidationError):
            TwoPrimeParams(p=5, q=13, g=2, h=2, e=12)

    def test_order_is_not_normalized(self, params_5_13, params_13_5):
        """(p, q) и (q, p) остаются разными параметрами."""
        assert params_13_5.key == (13, 5)
        assert params_5_13 != params_13_5


class TestClassTable:
    def test_cardinalities(self, table_5_13):
        """Мощности: |D_i| = 12, |P| = 12, |Q| = 4, |R| = 1."""
        for i in range(4):
            assert len(table_5_13.members(ClassLabel(i))) == 12
        assert len(table_5_13.members(ClassLabel.P)) == 12
        assert len(table_5_13.members(ClassLabel.Q)) == 4
        assert table_5_13.members(ClassLabel.R) == (0,)

    def test_labels_of_special_residues(self, table_5_13):
        """Метки 0, кратных p и q, а также 1, h и h²."""
        assert table_5_13.class_of(0) is ClassLabel.R
        assert table_5_13.class_of(5) is ClassLabel.P
        assert table_5_13.class_of(13) is ClassLabel.Q
        assert table_5_13.class_of(1) is ClassLabel.D0
        assert table_5_13.class_of(27) is ClassLabel.D1
        assert table_5_13.class_of(14) is ClassLabel.D2

    def test_h_fourth_power(self, params_5_13, table_5_13):
        """h⁴ ≡ 1 (mod 65), т.е. лежит в D₀."""
        assert pow(params_5_13.h, 4, 65) == 1
        assert table_5_13.class_of(pow(params_5_13.h, 4, 65)) is ClassLabel.D0

    def test_minus_one_by_parity(self, table_5_13, table_5_41):
        """-1 ∈ D₀ при нечётном случае и -1 ∈ D₂ при чётном."""
        assert table_5_13.class_of(64) is ClassLabel.D0
        assert table_5_41.class_of(204) is ClassLabel.D2

    def test_multiplicative_shift(self, table_5_41):
        """u ∈ D_k переводит D_j в D_{j+k}."""
        n = table_5_41.params.pq
        for k in range(4):
            u = table_5_41.members(ClassLabel(k))[-1]
            for j in range(4):
                image = sorted(u * x % n for x in table_5_41.members(ClassLabel(j)))
                assert tuple(image) == table_5_41.members(ClassLabel((j + k) % 4))


class TestCyclotomicNumbers:
    def test_m_value(self, params_5_13):
        """M = ((p-2)(q-2)-1)/4 = 8 для (5, 13)."""
        assert calibrate(params_5_13).M == 8

    def test_partition_candidates_65(self):
        """65 = 49 + 16 = 1 + 64 даёт четыре кандидата с a ≡ 1 (mod 4)."""
        assert partition_candidates(65) == [(-7, -2), (-7, 2), (1, -4), (1, 4)]

    def test_partition_candidates_205(self):
        """205 = 169 + 36 = 9 + 196."""
        assert partition_candidates(205) == [(13, -3), (13, 3), (-3, -7), (-3, 7)]

    def test_calibration_selects_candidate(self, params_5_13):
        """Калибровка выбирает ровно одного кандидата из списка."""
        calibrated = calibrate(params_5_13)
        assert (calibrated.a, calibrated.b) in partition_candidates(65)

    @pytest.mark.parametrize("p, q", EVEN_PAIRS + ODD_PAIRS)
    def test_formula_matches_bruteforce(self, p, q):
        """
        Тестирует совпадение формул с перебором.
        Проверяет равенство матриц поэлементно в обоих случаях чётности.
        """
        params = make_params(p, q)
        brute = cyclotomic_numbers_bruteforce(build_class_table(params))
        calibrated = calibrate(params)
        assert cyclotomic_numbers_formula(params, calibrated.a, calibrated.b) == brute

    def test_row_sums(self, params_5_13, table_5_13):
        """Σ_j (i,j)₄ = число x ∈ D_i с x+1 ∈ Z*_pq."""
        brute = cyclotomic_numbers_bruteforce(table_5_13)
        for i in range(4):
            units = sum(
                1
                for x in table_5_13.members(ClassLabel(i))
                if table_5_13.class_of(x + 1) < ClassLabel.P
            )
            assert sum(brute[i]) == units

    def test_perturbed_constant_changes_table(self, params_5_13):
        """Сдвиг константы F на +1 ломает совпадение с перебором."""
        calibrated = calibrate(params_5_13)
        mutated = cyclotomic_numbers_formula(
            params_5_13, calibrated.a, calibrated.b, offsets={"F": 1}
        )
        assert mutated != calibrated.counts

    def test_no_candidate_reproduces_perturbed_matrix(self, params_5_13, table_5_13):
        """Испорченная матрица не калибруется: CalibrationError."""
        brute = cyclotomic_numbers_bruteforce(table_5_13)
        broken = (tuple(v + 1 for v in brute[0]),) + brute[1:]
        with pytest.raises(CalibrationError):
            quadratic_partition(params_5_13, broken)

    def test_formula_rejects_bad_partition(self, params_5_13):
        """(a, b) = (7, 2) не удовлетворяет a ≡ 1 (mod 4)."""
        with pytest.raises(InvalidParametersError):
            cyclotomic_numbers_formula(params_5_13, 7, 2)


class TestPairSolutions:
    def test_zero_target_special_shift(self, table_5_13):
        """k = 0, нечётный случай: (p-1)(q-1)/4 = 12 решений."""
        assert count_pair_solutions(table_5_13, 0, 0, PairKind.ZERO, 0) == 12

    def test_zero_target_other_shift(self, table_5_13):
        """k = 1: решений нет."""
        assert count_pair_solutions(table_5_13, 0, 1, PairKind.ZERO, 0) == 0

    @pytest.mark.parametrize("u", [1, 6, 12])
    def test_multiple_of_p(self, table_5_13, u):
        """k = 0, правая часть u·p: (p-1)(q-5)/16 = 2 решения."""
        assert count_pair_solutions(table_5_13, 2, 0, PairKind.MULTIPLE_OF_P, 5 * u) == 2

    def test_invalid_target(self, table_5_13):
        """13 не кратно p = 5."""
        with pytest.raises(InvalidParametersError):
            count_pair_solutions(table_5_13, 0, 0, PairKind.MULTIPLE_OF_P, 13)

    def test_profile_agrees_with_counts(self, table_5_41):
        """Профиль по всем target совпадает с поштучным подсчётом и формулой."""
        params = table_5_41.params
        for kind in PairKind:
            profile = pair_solution_profile(table_5_41, 1, kind)
            for target, counts in list(profile.items())[:3]:
                for k in range(4):
                    assert counts[k] == count_pair_solutions(table_5_41, 1, k, kind, target)
                    assert counts[k] == expected_pair_solutions(params, k, kind)


@pytest.mark.slow
class TestSweeps:
    def test_formula_matches_bruteforce_up_to_5000(self):
        """Формулы совпадают с перебором для всех пар pq ≤ 5000."""
        for p, q in enumerate_pairs(5000):
            params = make_params(p, q)
            brute = cyclotomic_numbers_bruteforce(build_class_table(params))
            assert calibrate(params).counts == brute

    def test_b_even_when_both_five_mod_eight(self):
        """b чётно для всех пар p ≡ q ≡ 5 (mod 8) с pq ≤ 5000."""
        for p, q in enumerate_pairs(5000):
            params = make_params(p, q)
            if params.case_tag is CaseTag.BOTH5:
                assert calibrate(params).b % 2 == 0
