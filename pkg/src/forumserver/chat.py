"""Open-discussion chat: one ephemeral room, cursor-based polling delivery.

Nothing here ever touches the storage journal; a server restart empties the
room by design.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from datetime import datetime

from .auth import AuthSessions
from .domain import ValidationCode, ValidationError

CHAT_BUFFER_SIZE = 500
CHAT_BODY_MAX = 500


@dataclass(frozen=True)
class ChatMessage:
    cursor: int
    sender: str
    body: str
    sent_at: datetime


@dataclass(frozen=True)
class ChatPoll:
    messages: list[ChatMessage]
    next_after: int
    truncated: bool


def validate_chat_body(raw: str) -> str:
    body = raw.strip()
    if not body:
        raise ValidationError("body", ValidationCode.EMPTY)
    if len(body) > CHAT_BODY_MAX:
        raise ValidationError("body", ValidationCode.TOO_LONG, CHAT_BODY_MAX)
    return body


class ChatRoom:
    """Ring of the most recent messages; cursors expose a total order of posts."""

    def __init__(self, buffer_size: int = CHAT_BUFFER_SIZE):
        self._buffer: deque[ChatMessage] = deque(maxlen=buffer_size)
        self._next_cursor = 1
        self._lock = threading.Lock()

    def post(self, sender: str, body: str, *, now: datetime) -> ChatMessage:
        body = validate_chat_body(body)
        with self._lock:
            message = ChatMessage(
                cursor=self._next_cursor, sender=sender, body=body, sent_at=now
            )
            self._next_cursor += 1
            self._buffer.append(message)  # deque evicts the oldest at capacity
            return message

    def poll(self, after_cursor: int) -> ChatPoll:
        """Everything newer than after_cursor, in cursor order.

        truncated flags that the caller fell behind the ring: messages between
        its cursor and the buffer floor are gone.
        """
        if after_cursor < 0:
            raise ValueError("after_cursor must be >= 0")
        with self._lock:
            floor = self._buffer[0].cursor if self._buffer else self._next_cursor
            messages = [m for m in self._buffer if m.cursor > after_cursor]
            next_after = messages[-1].cursor if messages else after_cursor
            truncated = after_cursor < floor - 1
            return ChatPoll(messages=messages, next_after=next_after, truncated=truncated)


def online_members(sessions: AuthSessions) -> list[str]:
    """Distinct names of members holding at least one live session, ascending."""
    return sorted({s.member for s in sessions.live_sessions()})
