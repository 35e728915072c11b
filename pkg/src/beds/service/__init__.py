"""Live scheduling service: durable booking store plus the HTTP app."""

from .app import create_app
from .store import ScheduleStore, ServiceConfig

__all__ = ["ScheduleStore", "ServiceConfig", "create_app"]
