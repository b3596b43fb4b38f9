from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


QUATERNARY_DIGITS = frozenset((0, 1, 2, 3))


class QuaternarySequence(BaseModel):
    """
    Один период четверичной последовательности над Z_4.

    Происхождение (p, q) необязательно; если оно задано, период равен pq.
    """

    model_config = ConfigDict(frozen=True)

    period: int = Field(gt=0)
    digits: Tuple[int, ...]
    p: Optional[int] = None
    q: Optional[int] = None

    @model_validator(mode="after")
    def _check_digits(self) -> "QuaternarySequence":
        if len(self.digits) != self.period:
            raise ValueError(
                f"Длина {len(self.digits)} не совпадает с периодом {self.period}"
            )
        if not QUATERNARY_DIGITS.issuperset(self.digits):
            bad = sorted(set(self.digits) - QUATERNARY_DIGITS)
            raise ValueError(f"Недопустимые цифры {bad}, ожидались 0..3")
        if (self.p is None) != (self.q is None):
            raise ValueError("Происхождение задаётся парой (p, q) целиком")
        if self.p is not None and self.p * self.q != self.period:
            raise ValueError(
                f"Период {self.period} не равен pq={self.p * self.q}"
            )
        return self

    @property
    def has_provenance(self) -> bool:
        return self.p is not None

    def as_text(self) -> str:
        """Цифры периода одной строкой символов '0'..'3'."""
        return "".join(map(str, self.digits))
