from .config import settings
from .database import connection, dispose_db, get_session, init_db

__all__ = ["settings", "connection", "dispose_db", "get_session", "init_db"]
