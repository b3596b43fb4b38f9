from enum import Enum, IntEnum
from functools import cached_property
from math import gcd
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import isprime, n_order


class ClassLabel(IntEnum):
    """Метка вычета по модулю pq: классы D0..D3, множества P, Q и R={0}."""

    D0 = 0
    D1 = 1
    D2 = 2
    D3 = 3
    P = 4
    Q = 5
    R = 6


class CaseTag(str, Enum):
    """Случай прогноза: p ≡ q+4 (mod 8) или p ≡ q ≡ 5 (mod 8)."""

    MIXED = "mixed"
    BOTH5 = "both5"


def pair_problem(p: int, q: int) -> Optional[str]:
    """
    Проверяет пару простых на пригодность для конструкции.

    Args:
        p: Первое простое
        q: Второе простое

    Returns:
        Optional[str]: Текст проблемы или None, если пара допустима
    """
    if p == q:
        return f"Простые должны различаться: p = q = {p}"
    for name, value in (("p", p), ("q", q)):
        if value < 3 or not isprime(value):
            return f"{name}={value} не является нечётным простым"
    if gcd(p - 1, q - 1) != 4:
        return f"gcd(p-1, q-1) = {gcd(p - 1, q - 1)}, ожидалось 4"
    return None


class TwoPrimeParams(BaseModel):
    """
    Арифметический каркас (p, q, g, h, e) обобщённой циклотомии порядка 4.

    Несимметричен по (p, q): пары (p, q) и (q, p) задают разные
    последовательности и никогда не нормализуются.
    """

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    g: int
    h: int
    e: int

    @model_validator(mode="after")
    def _check_frame(self) -> "TwoPrimeParams":
        problem = pair_problem(self.p, self.q)
        if problem:
            raise ValueError(problem)
        p, q, n = self.p, self.q, self.p * self.q
        if self.e != (p - 1) * (q - 1) // 4:
            raise ValueError(f"e={self.e} не равно (p-1)(q-1)/4")
        if not (0 < self.g < n and 0 < self.h < n):
            raise ValueError("g и h должны быть вычетами из 1..pq-1")
        if self.g % p == 0 or self.g % q == 0:
            raise ValueError(f"g={self.g} не взаимно прост с pq")
        if n_order(self.g, p) != p - 1 or n_order(self.g, q) != q - 1:
            raise ValueError(f"g={self.g} не общий первообразный корень")
        if self.h % p != self.g % p or self.h % q != 1:
            raise ValueError(f"h={self.h} не удовлетворяет h≡g (p), h≡1 (q)")
        if n_order(self.g, n) != self.e:
            raise ValueError(f"Порядок g по модулю pq не равен e={self.e}")
        return self

    @property
    def pq(self) -> int:
        return self.p * self.q

    @property
    def parity_even(self) -> bool:
        """Чётность (p-1)(q-1)/16, выбирающая таблицу циклотомических чисел."""
        return ((self.p - 1) * (self.q - 1) // 16) % 2 == 0

    @property
    def case_tag(self) -> CaseTag:
        if self.p % 8 == 5 and self.q % 8 == 5:
            return CaseTag.BOTH5
        return CaseTag.MIXED

    @property
    def key(self) -> Tuple[int, int]:
        return (self.p, self.q)


class ClassTable(BaseModel):
    """Полная таблица меток вычетов 0..pq-1."""

    model_config = ConfigDict(frozen=True)

    params: TwoPrimeParams
    labels: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_labels(self) -> "ClassTable":
        if len(self.labels) != self.params.pq:
            raise ValueError(
                f"Длина таблицы {len(self.labels)} не равна pq={self.params.pq}"
            )
        if set(self.labels) - {int(label) for label in ClassLabel}:
            raise ValueError("Таблица содержит неизвестные метки")
        return self

    def class_of(self, u: int) -> ClassLabel:
        """Метка класса для вычета u (берётся по модулю pq)."""
        return ClassLabel(self.labels[u % self.params.pq])

    @cached_property
    def member_index(self) -> Dict[int, Tuple[int, ...]]:
        buckets: Dict[int, list] = {int(label): [] for label in ClassLabel}
        for u, label in enumerate(self.labels):
            buckets[label].append(u)
        return {label: tuple(items) for label, items in buckets.items()}

    def members(self, label: ClassLabel) -> Tuple[int, ...]:
        """Элементы класса в порядке возрастания."""
        return self.member_index[int(label)]


Matrix4 = Tuple[
    Tuple[int, int, int, int],
    Tuple[int, int, int, int],
    Tuple[int, int, int, int],
    Tuple[int, int, int, int],
]


class CyclotomicTable(BaseModel):
    """Матрица циклотомических чисел (i,j)_4 вместе с параметрами (a, b, M)."""

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    counts: Matrix4
    a: int
    b: int
    M: int
    parity_even: bool
    constants: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_partition(self) -> "CyclotomicTable":
        pq = self.p * self.q
        if self.a * self.a + 4 * self.b * self.b != pq or self.a % 4 != 1:
            raise ValueError(
                f"(a, b)=({self.a}, {self.b}) не даёт pq=a²+4b², a≡1 (mod 4)"
            )
        if self.M != ((self.p - 2) * (self.q - 2) - 1) // 4:
            raise ValueError(f"M={self.M} не равно ((p-2)(q-2)-1)/4")
        if any(value < 0 for row in self.counts for value in row):
            raise ValueError("Циклотомические числа не могут быть отрицательными")
        return self
