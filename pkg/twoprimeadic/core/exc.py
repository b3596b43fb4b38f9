class TwoPrimeError(Exception):
    """Базовое исключение для всех ошибок пакета twoprimeadic."""

    pass


class InvalidParametersError(TwoPrimeError):
    """Исключение возникает при недопустимых входных параметрах (p, q, m, модуль)."""

    pass


class SequenceFormatError(TwoPrimeError):
    """Исключение возникает когда сериализованную последовательность не удаётся разобрать."""

    pass


class CalibrationError(TwoPrimeError):
    """Исключение возникает когда не удаётся однозначно подобрать пару (a, b)."""

    pass


class TheoryMismatchError(TwoPrimeError):
    """Исключение возникает когда нарушено структурное тождество конструкции."""

    pass


class NotFoundError(TwoPrimeError):
    """Исключение возникает когда запрашиваемые строки не найдены в хранилище скана."""

    pass


class EmptyFilterError(TwoPrimeError):
    """Исключение возникает когда переданы пустые фильтры для запроса."""

    pass


class InvalidFieldError(TwoPrimeError):
    """Исключение возникает когда указано невалидное или несуществующее поле."""

    pass


class EmptyValueError(TwoPrimeError):
    """Исключение возникает когда передано пустое значение для обязательного поля."""

    pass
