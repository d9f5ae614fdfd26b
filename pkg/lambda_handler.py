import os
import logging
import json
from mangum import Mangum

from armkit import config

config.configure_logging()
logger = logging.getLogger(__name__)

from armkit.main import app  # noqa: E402


def run_migrations():
    """Bring the profile store to the latest schema on cold start."""
    try:
        from alembic.config import Config
        from alembic import command

        logger.info("Running database migrations...")
        alembic_cfg = Config("alembic.ini")
        alembic_cfg.set_main_option("sqlalchemy.url", config.DATABASE_URL)
        command.upgrade(alembic_cfg, "head")
        logger.info("Database migrations completed")
    except Exception as e:
        logger.error(f"Migration failed: {e}")


if os.getenv("RUN_MIGRATIONS_ON_START", "false").lower() == "true":
    run_migrations()

mangum_handler = Mangum(app, lifespan="off")


def _json_response(status: int, body: dict) -> dict:
    return {"statusCode": status, "headers": {"Content-Type": "application/json"}, "body": json.dumps(body)}


def handler(event, context):
    """Answers warm-up pings directly and hands everything else to the FastAPI app."""
    logger.debug(f"Received event: {json.dumps(event, default=str)}")

    if event.get("source") == "aws.events" and event.get("detail-type") == "Scheduled Event":
        logger.info("Handling scheduled warm-up event")
        return _json_response(200, {"message": "warm", "requestId": getattr(context, "aws_request_id", None)})

    if event.get("httpMethod") == "GET" and event.get("path") == "/ping":
        return _json_response(200, {"status": "warm", "requestId": getattr(context, "aws_request_id", None)})

    try:
        return mangum_handler(event, context)
    except Exception as e:
        logger.error(f"Error handling event with Mangum: {e}")
        return _json_response(500, {"error": "Internal server error", "message": str(e)})
