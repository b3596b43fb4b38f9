from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from .params import CaseTag, TwoPrimeParams


class GcdDecomposition(BaseModel):
    """Три взаимно простых множителя gcd(E(4), 4^pq - 1) и их произведение."""

    model_config = ConfigDict(frozen=True)

    gcd_p: int
    gcd_q: int
    gcd_cofactor: int
    gcd_total: int


class ConjectureOutcome(BaseModel):
    """Результат проверки: делит ли особое простое 2pq+1 или 6pq+1 значение E(4)."""

    model_config = ConfigDict(frozen=True)

    candidate_d: int
    candidate_prime: bool
    d_divides: bool
    evaluated: bool


class ComplexityReport(BaseModel):
    """
    Отчёт о 4-адической сложности для пары (p, q).

    Поля точного вычисления (gcd_*, phi_exact, consistent) равны None,
    если построен только прогноз.
    """

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    r1: int
    r2: int
    case_tag: CaseTag
    candidate_d: int
    candidate_prime: bool
    phi_predicted: Tuple[int, ...]
    d_divides: Optional[bool] = None
    gcd_p: Optional[int] = None
    gcd_q: Optional[int] = None
    gcd_cofactor: Optional[int] = None
    gcd_total: Optional[int] = None
    phi_exact: Optional[int] = None
    lower_bound_ok: Optional[bool] = None
    consistent: Optional[bool] = None


class LemmaId(str, Enum):
    CLS = "CLS"
    RES = "RES"
    L2 = "L2"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"
    T2 = "T2"
    SQ = "SQ"


class LemmaCheck(BaseModel):
    """Одна точная проверка сравнения."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    modulus: Optional[int] = None
    detail: str = ""


class LemmaReport(BaseModel):
    """
    Сводка проверок одного утверждения для пары (p, q).

    passed — конъюнкция всех проверок; при пустом списке проверок
    отчёт считается пройденным вакуумно (vacuous=True).
    """

    model_config = ConfigDict(frozen=True)

    lemma_id: LemmaId
    p: int
    q: int
    moduli: Tuple[int, ...] = ()
    passed: bool
    vacuous: bool
    checks: Tuple[LemmaCheck, ...] = ()

    @classmethod
    def from_checks(
        cls,
        lemma_id: LemmaId,
        params: TwoPrimeParams,
        checks: Iterable[LemmaCheck],
        moduli: Sequence[int] = (),
    ) -> "LemmaReport":
        checks = tuple(checks)
        return cls(
            lemma_id=lemma_id,
            p=params.p,
            q=params.q,
            moduli=tuple(moduli),
            passed=all(check.passed for check in checks),
            vacuous=not checks,
            checks=checks,
        )

    @property
    def failures(self) -> Tuple[LemmaCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)


class ScanRow(BaseModel):
    """Строка скана гипотезы для одной упорядоченной пары."""

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    pq: int
    case_tag: CaseTag
    candidate_d: int
    candidate_prime: bool
    d_divides: bool
    r1: int
    r2: int
    phi_exact: Optional[int] = None
    consistent: bool

    @property
    def key(self) -> Tuple[int, int]:
        return (self.p, self.q)


class ScanFilter(BaseModel):
    """Фильтр равенства по сохранённым строкам скана; учитываются заданные поля."""

    p: Optional[int] = None
    q: Optional[int] = None
    pq: Optional[int] = None
    case_tag: Optional[CaseTag] = None
    candidate_prime: Optional[bool] = None
    d_divides: Optional[bool] = None
    consistent: Optional[bool] = None
