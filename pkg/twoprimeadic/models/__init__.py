from .base_model import Base, ScanRecord, created_at, id_field

__all__ = ["Base", "ScanRecord", "created_at", "id_field"]
