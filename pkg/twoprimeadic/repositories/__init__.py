from .abstract_repo import BaseRepository
from .scan_repo import ScanRepository

__all__ = ["BaseRepository", "ScanRepository"]
