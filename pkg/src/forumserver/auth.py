"""Registration, login and session upkeep.

Sessions are opaque 64-hex tokens with a sliding idle expiry. Every public
operation first purges expired sessions, so after any call a member's presence
handle is online exactly when they hold at least one live session (unless
unsubscribed, which is terminal).
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Callable

from .domain import (
    Member,
    PBKDF2_ITERATIONS,
    PresenceStatus,
    ValidationCode,
    ValidationError,
    hash_password,
    validate_member_dob,
    validate_member_name,
    validate_password,
    verify_password,
)
from .storage import Store, StoreError, StoreErrorCode

SESSION_IDLE_MINUTES = 30
TOKEN_BYTES = 32


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class AuthErrorCode(str, Enum):
    BAD_CREDENTIALS = "bad_credentials"
    DUPLICATE_MEMBER = "duplicate_member"
    INVALID_SESSION = "invalid_session"
    VALIDATION_FAILED = "validation_failed"
    UNSUBSCRIBED_ACCOUNT = "unsubscribed_account"


class AuthError(Exception):
    def __init__(self, code: AuthErrorCode, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code.value}: {detail}")


@dataclass
class Session:
    token: str
    member: str
    created_at: datetime
    last_seen_at: datetime


class AuthSessions:
    """Session table bound to a store; all operations are atomic w.r.t. each other."""

    def __init__(
        self,
        store: Store,
        *,
        idle_minutes: int = SESSION_IDLE_MINUTES,
        clock: Callable[[], datetime] = utc_now,
        hash_iterations: int = PBKDF2_ITERATIONS,
    ):
        self._store = store
        self._sessions: dict[str, Session] = {}
        self._idle = timedelta(minutes=idle_minutes)
        self._clock = clock
        self._hash_iterations = hash_iterations
        self._lock = threading.RLock()

    # -- account lifecycle -------------------------------------------------

    def register(self, name_raw: str, password_raw: str, dob_raw: str) -> Member:
        """Validate, hash and create a member; they can log in immediately.

        Raises ValidationError for bad fields, AuthError(duplicate_member) for a
        taken name.
        """
        name = validate_member_name(name_raw)
        password = validate_password(password_raw)
        dob = validate_member_dob(dob_raw)
        joined = self._clock().date()
        if dob > joined:
            raise ValidationError("memberDOB", ValidationCode.BAD_DATE)
        member = Member(
            name=name,
            password=hash_password(password, iterations=self._hash_iterations),
            handle=PresenceStatus.OFFLINE,
            member_dob=dob,
            member_doj=joined,
        )
        try:
            return self._store.create_member(member)
        except StoreError as exc:
            if exc.code is StoreErrorCode.DUPLICATE_MEMBER:
                raise AuthError(
                    AuthErrorCode.DUPLICATE_MEMBER, f"member {name!r} already exists"
                ) from None
            raise

    def login(self, name_raw: str, password_raw: str) -> Session:
        """Check credentials and open a session; unknown name and wrong password
        return the same error code so names cannot be probed."""
        with self._lock:
            now = self._purge()
            name = name_raw.strip()
            try:
                member = self._store.get_member(name)
            except StoreError:
                raise AuthError(AuthErrorCode.BAD_CREDENTIALS, "bad name or password") from None
            if not verify_password(password_raw, member.password):
                raise AuthError(AuthErrorCode.BAD_CREDENTIALS, "bad name or password")
            if member.handle is PresenceStatus.UNSUBSCRIBED:
                raise AuthError(AuthErrorCode.UNSUBSCRIBED_ACCOUNT, "account is unsubscribed")
            token = secrets.token_hex(TOKEN_BYTES)
            session = Session(token=token, member=name, created_at=now, last_seen_at=now)
            self._sessions[token] = session
            if member.handle is not PresenceStatus.ONLINE:
                self._store.update_member(name, handle=PresenceStatus.ONLINE)
            return session

    def change_password(self, token: str, old_raw: str, new_raw: str) -> None:
        """Requires a valid session and the current password; revokes the
        member's other sessions so stolen cookies die with the old password."""
        with self._lock:
            member_name = self.validate(token)
            member = self._store.get_member(member_name)
            if not verify_password(old_raw, member.password):
                raise AuthError(AuthErrorCode.BAD_CREDENTIALS, "old password does not match")
            new_password = validate_password(new_raw)
            self._store.update_member(
                member_name,
                password=hash_password(new_password, iterations=self._hash_iterations),
            )
            for other in [
                s.token
                for s in self._sessions.values()
                if s.member == member_name and s.token != token
            ]:
                del self._sessions[other]

    def unsubscribe(self, token: str) -> None:
        """Irreversible soft-deactivation; authored content stays visible."""
        with self._lock:
            member_name = self.validate(token)
            self._store.update_member(member_name, handle=PresenceStatus.UNSUBSCRIBED)
            for stale in [
                s.token for s in self._sessions.values() if s.member == member_name
            ]:
                del self._sessions[stale]

    # -- session table -----------------------------------------------------

    def validate(self, token: str) -> str:
        """Return the member name for a live token and slide its expiry window."""
        with self._lock:
            now = self._purge()
            session = self._sessions.get(token)
            if session is None:
                raise AuthError(AuthErrorCode.INVALID_SESSION, "unknown or expired session")
            session.last_seen_at = now
            return session.member

    def logout(self, token: str) -> None:
        """Drop the token; absent tokens are fine (logout is idempotent)."""
        with self._lock:
            self._purge()
            session = self._sessions.pop(token, None)
            if session is not None:
                self._sync_presence(session.member)

    def sweep_expired(self) -> int:
        """Remove every idle-expired session; returns how many were dropped."""
        with self._lock:
            before = len(self._sessions)
            self._purge()
            return before - len(self._sessions)

    def live_sessions(self) -> list[Session]:
        with self._lock:
            self._purge()
            return list(self._sessions.values())

    def session_count(self) -> int:
        with self._lock:
            return len(self._sessions)

    def _purge(self) -> datetime:
        """Drop expired sessions and fix presence; returns the current instant."""
        now = self._clock()
        expired = [
            s for s in self._sessions.values() if now - s.last_seen_at > self._idle
        ]
        for session in expired:
            del self._sessions[session.token]
        for member_name in {s.member for s in expired}:
            self._sync_presence(member_name)
        return now

    def _sync_presence(self, member_name: str) -> None:
        if any(s.member == member_name for s in self._sessions.values()):
            return
        try:
            member = self._store.get_member(member_name)
        except StoreError:
            return
        if member.handle is PresenceStatus.ONLINE:
            self._store.update_member(member_name, handle=PresenceStatus.OFFLINE)
