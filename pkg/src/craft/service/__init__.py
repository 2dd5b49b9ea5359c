from .app import ServiceConfig, create_app, run

__all__ = ["ServiceConfig", "create_app", "run"]
