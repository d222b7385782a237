"""In-memory session store for the correction workflow.

Each session keeps the uploaded scan, a stack of result snapshots (the
undo history), and a lock serializing mutations for that session.
Segmentation for distinct sessions may run concurrently.
"""

import secrets
import threading
from dataclasses import dataclass, field

from ..scan_io import GrayImage


@dataclass
class Session:
    scan_bytes: bytes
    media_type: str
    image: GrayImage
    results: list = field(default_factory=list)  # result dicts, newest last
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> dict:
        return self.results[-1]


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, session: Session) -> str:
        session_id = secrets.token_urlsafe(16)
        with self._lock:
            self._sessions[session_id] = session
        return session_id

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(session_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
