from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class TwoPrimeSettings(BaseSettings):
    """
    Настройки вычислений и скана, загружаемые из окружения или .env файла.

    Пример .env файла:
    LAMBDA_MAX=10000
    SCAN_JOBS=4
    SCAN_CHUNK_SIZE=8
    SCAN_DB_URL=sqlite:///scan.db
    SCAN_DB_ECHO=False
    LOG_LEVEL=INFO
    FORCE_FULL_CHECK=False
    """

    LAMBDA_MAX: int = Field(10_000, ge=1)
    SCAN_JOBS: int = Field(1, ge=1)
    SCAN_CHUNK_SIZE: int = Field(8, ge=1)
    SCAN_DB_URL: Optional[str] = Field(default=None)
    SCAN_DB_ECHO: bool = Field(False)
    LOG_LEVEL: str = Field("WARNING")
    FORCE_FULL_CHECK: bool = Field(False)

    model_config = SettingsConfigDict(
        env_file=Path(".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @property
    def store_enabled(self) -> bool:
        """Признак того, что строки скана нужно сохранять в БД."""
        return bool(self.SCAN_DB_URL)


settings = TwoPrimeSettings()
