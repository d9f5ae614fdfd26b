#!/usr/bin/env python3
"""
Profile store migration runner
"""
import logging
import sys

from alembic import command
from alembic.config import Config

from armkit import config

logger = logging.getLogger(__name__)


def run_migrations(url: str = config.DATABASE_URL) -> None:
    """Upgrade the profile store at url to head."""
    alembic_cfg = Config("alembic.ini")
    alembic_cfg.set_main_option("sqlalchemy.url", url)
    logger.info("Using database: %s", url)
    command.upgrade(alembic_cfg, "head")
    logger.info("Migrations completed")


# alembic revision --autogenerate -m "description of change"
# python migrate.py

if __name__ == "__main__":
    config.configure_logging()
    try:
        run_migrations()
    except Exception as e:
        logger.error(f"Migration failed: {e}")
        sys.exit(1)
