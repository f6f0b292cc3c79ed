"""False-positive annotation service: task store, leases, HTTP API."""

from .store import (
    AnnotationTask,
    AnnotatorProfile,
    AuthError,
    ConflictError,
    LeaseExpiredError,
    TaskStore,
    import_fps,
    load_annotators,
    load_tasks,
    save_tasks,
)
from .service import create_app

__all__ = [
    "AnnotationTask",
    "AnnotatorProfile",
    "AuthError",
    "ConflictError",
    "LeaseExpiredError",
    "TaskStore",
    "create_app",
    "import_fps",
    "load_annotators",
    "load_tasks",
    "save_tasks",
]
