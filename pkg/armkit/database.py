import logging
import os
from typing import Any, Dict

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from armkit import config

logger = logging.getLogger(__name__)


def engine_options(url: str) -> Dict[str, Any]:
    """Pool settings per backend: SQLite locally, Postgres on Lambda or a server."""
    if url.startswith("sqlite"):
        # FastAPI runs sync endpoints on worker threads
        return {"connect_args": {"check_same_thread": False}}
    if os.getenv("AWS_LAMBDA_FUNCTION_NAME") is not None:
        return {
            "pool_size": 1,
            "max_overflow": 0,
            "pool_timeout": 10,
            "pool_recycle": 300,
            "pool_pre_ping": True,
            "connect_args": {"connect_timeout": 10, "application_name": "armkit-lambda", "sslmode": "require"},
        }
    return {"pool_size": 5, "max_overflow": 10, "pool_timeout": 30, "pool_recycle": 1800, "pool_pre_ping": True}


engine = create_engine(config.DATABASE_URL, **engine_options(config.DATABASE_URL))

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def get_db():
    """One session per request, closed afterwards."""
    db = SessionLocal()
    try:
        yield db
    except Exception as e:
        logger.error(f"Database error: {e}")
        raise
    finally:
        db.close()
