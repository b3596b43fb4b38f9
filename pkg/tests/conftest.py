import pytest
from pydantic import create_model

from twoprimeadic.core.database import dispose_db, init_db
from twoprimeadic.ntheory.cyclotomy import build_class_table, make_params
from twoprimeadic.ntheory.sequence import generate
from twoprimeadic.schemas.reports import ScanFilter


@pytest.hookimpl(tryfirst=True)
def pytest_exception_interact(node, call, report):
    """
    Перехватывает и фильтрует трассировку исключений в отчетах pytest.
    Удаляет из трассировки записи, относящиеся к файлам в site-packages, чтобы упростить чтение стека вызовов.
    """
    longrepr = report.longrepr

    if isinstance(longrepr, str):
        return

    if hasattr(longrepr, "reprtraceback"):
        tb = longrepr.reprtraceback
        tb.reprentries = [
            entry
            for entry in tb.reprentries
            if "site-packages" not in entry.reprfileloc.path
        ]


@pytest.fixture(scope="session")
def params_5_13():
    """Пара (5, 13): нечётный случай, p ≡ q ≡ 5 (mod 8)."""
    return make_params(5, 13)


@pytest.fixture(scope="session")
def params_13_5():
    """Пара (13, 5): та же pq, обратный порядок."""
    return make_params(13, 5)


@pytest.fixture(scope="session")
def params_5_41():
    """Пара (5, 41): чётный случай, смешанные вычеты по модулю 8."""
    return make_params(5, 41)


@pytest.fixture(scope="session")
def params_41_5():
    """Пара (41, 5): r1 = 11, сложность pq - 1."""
    return make_params(41, 5)


@pytest.fixture(scope="session")
def table_5_13(params_5_13):
    return build_class_table(params_5_13)


@pytest.fixture(scope="session")
def table_5_41(params_5_41):
    return build_class_table(params_5_41)


@pytest.fixture(scope="session")
def seq_5_13(params_5_13, table_5_13):
    return generate(params_5_13, table_5_13)


@pytest.fixture
def scan_store(tmp_path):
    """
    Временное SQLite-хранилище скана.
    Инициализирует движок и таблицы, отдаёт URL и закрывает движок после теста.
    """
    dispose_db()
    url = f"sqlite:///{tmp_path / 'scan.db'}"
    init_db(url, use_create_all=True)
    yield url
    dispose_db()


@pytest.fixture
def empty_filter():
    """Пустой фильтр для сценариев с EmptyFilterError."""
    return ScanFilter()


@pytest.fixture
def schema_invalid_field():
    """Схема с полем, которого нет в модели ScanRecord."""
    InvalidFieldSchema = create_model("InvalidField", invalid_field=(str, ...))
    return InvalidFieldSchema(invalid_field="invalid")
