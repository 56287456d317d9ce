"""Durable store for members, messages and admin credentials.

Two engines behind one interface: ephemeral (in-memory only) and file-backed,
where every mutation is appended to a checksummed journal before it is applied,
so an acknowledged write survives a crash at any point.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from datetime import date, datetime, timezone
from enum import Enum
from pathlib import Path

from .domain import (
    AdminCredential,
    Member,
    Message,
    MessageStatus,
    PasswordHash,
    PresenceStatus,
    ReplyType,
)
from .journal import Journal, JournalRecord

PAGE_DEFAULT = 20
PAGE_MAX = 100


class StoreErrorCode(str, Enum):
    DUPLICATE_MEMBER = "duplicate_member"
    UNKNOWN_MEMBER = "unknown_member"
    UNKNOWN_MESSAGE = "unknown_message"
    CONSTRAINT_VIOLATION = "constraint_violation"
    IO_FAILURE = "io_failure"
    CORRUPT_RECORD = "corrupt_record"


class StoreError(Exception):
    def __init__(self, code: StoreErrorCode, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code.value}: {detail}")


class ParticipationRole(str, Enum):
    AUTHOR = "author"
    REPLIER = "replier"


@dataclass(frozen=True)
class ParticipationEdge:
    """One member-participates-in-message fact, derived from stored messages."""

    member: str
    message_id: int
    role: ParticipationRole


def rfc3339(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).isoformat(timespec="microseconds").replace(
        "+00:00", "Z"
    )


def parse_rfc3339(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


def _hash_payload(pw: PasswordHash) -> dict:
    return {"algorithm_id": pw.algorithm_id, "salt": pw.salt.hex(), "digest": pw.digest.hex()}


def _hash_from_payload(data: dict) -> PasswordHash:
    return PasswordHash(
        algorithm_id=data["algorithm_id"],
        salt=bytes.fromhex(data["salt"]),
        digest=bytes.fromhex(data["digest"]),
    )


def _member_payload(member: Member) -> dict:
    return {
        "name": member.name,
        "password": _hash_payload(member.password),
        "handle": member.handle.value,
        "member_dob": member.member_dob.isoformat(),
        "member_doj": member.member_doj.isoformat(),
    }


def _member_from_payload(data: dict) -> Member:
    return Member(
        name=data["name"],
        password=_hash_from_payload(data["password"]),
        handle=PresenceStatus(data["handle"]),
        member_dob=date.fromisoformat(data["member_dob"]),
        member_doj=date.fromisoformat(data["member_doj"]),
    )


def _message_payload(message: Message) -> dict:
    return {
        "message_id": message.message_id,
        "subject": message.subject,
        "handler": message.handler.value,
        "description": message.description,
        "replytype": message.replytype.value,
        "author": message.author,
        "posted_at": rfc3339(message.posted_at),
        "parent_id": message.parent_id,
    }


def _message_from_payload(data: dict) -> Message:
    return Message(
        message_id=data["message_id"],
        subject=data["subject"],
        handler=MessageStatus(data["handler"]),
        description=data["description"],
        replytype=ReplyType(data["replytype"]),
        author=data["author"],
        posted_at=parse_rfc3339(data["posted_at"]),
        parent_id=data["parent_id"],
    )


def _admin_payload(credential: AdminCredential) -> dict:
    return {
        "member_name": credential.member_name,
        "password": _hash_payload(credential.password),
    }


class Store:
    """Single-logical-writer store; mutations serialize on an internal lock."""

    def __init__(self, journal: Journal | None = None):
        self._members: dict[str, Member] = {}
        self._messages: dict[int, Message] = {}
        self._admin_credentials: dict[str, AdminCredential] = {}
        self._next_message_id = 1
        self._journal = journal
        self._lock = threading.RLock()

    @classmethod
    def open(cls, path: Path | str | None = None) -> "Store":
        """Open an ephemeral store (path=None) or rebuild one from its journal.

        Replay re-applies every record through the same guarded mutators used at
        runtime, so all invariants are re-checked; the first record that fails is
        quarantined along with everything after it.
        """
        if path is None:
            return cls()
        journal = Journal(path)
        store = cls(journal=None)  # replay populates memory without re-journaling
        try:
            records = journal.replay()
            for record in records:
                try:
                    store._apply(record)
                except (StoreError, KeyError, ValueError, TypeError):
                    journal.truncate_to(record)
                    break
            journal.open_for_append()
        except OSError as exc:
            raise StoreError(StoreErrorCode.IO_FAILURE, str(exc)) from exc
        store._journal = journal
        return store

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()

    # -- replay ----------------------------------------------------------

    def _apply(self, record: JournalRecord) -> None:
        if record.type == "member":
            self._commit_member(_member_from_payload(record.payload))
        elif record.type == "member_patch":
            self._commit_patch(record.payload)
        elif record.type == "message":
            self._commit_message(_message_from_payload(record.payload))
        elif record.type == "admin":
            payload = record.payload
            self._commit_admin(
                AdminCredential(payload["member_name"], _hash_from_payload(payload["password"]))
            )
        elif record.type == "chat_noop":
            pass  # chat is ephemeral; the type exists only so readers tolerate it

    # -- journaling ------------------------------------------------------

    def _journal_append(self, record_type: str, payload: dict) -> None:
        if self._journal is None:
            return
        try:
            self._journal.append(record_type, payload)
        except OSError as exc:
            raise StoreError(StoreErrorCode.IO_FAILURE, str(exc)) from exc

    # -- members ---------------------------------------------------------

    def create_member(self, member: Member) -> Member:
        with self._lock:
            if member.name in self._members:
                raise StoreError(
                    StoreErrorCode.DUPLICATE_MEMBER, f"member {member.name!r} already exists"
                )
            self._journal_append("member", _member_payload(member))
            self._commit_member(member)
            return member

    def _commit_member(self, member: Member) -> None:
        if member.name in self._members:
            raise StoreError(StoreErrorCode.DUPLICATE_MEMBER, member.name)
        self._members[member.name] = member

    def get_member(self, name: str) -> Member:
        with self._lock:
            member = self._members.get(name)
            if member is None:
                raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, f"no member named {name!r}")
            return member

    def update_member(
        self,
        name: str,
        *,
        handle: PresenceStatus | None = None,
        password: PasswordHash | None = None,
        member_dob: date | None = None,
    ) -> Member:
        """Patch the mutable member fields; name and member_doj never change."""
        with self._lock:
            patch: dict = {"name": name}
            if handle is not None:
                patch["handle"] = handle.value
            if password is not None:
                patch["password"] = _hash_payload(password)
            if member_dob is not None:
                patch["member_dob"] = member_dob.isoformat()
            updated = self._patched_member(patch)
            self._journal_append("member_patch", patch)
            self._members[name] = updated
            return updated

    def _patched_member(self, patch: dict) -> Member:
        name = patch["name"]
        current = self._members.get(name)
        if current is None:
            raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, f"no member named {name!r}")
        changes: dict = {}
        if "handle" in patch:
            new_handle = PresenceStatus(patch["handle"])
            if current.handle is PresenceStatus.UNSUBSCRIBED and new_handle is not current.handle:
                raise StoreError(
                    StoreErrorCode.CONSTRAINT_VIOLATION, "unsubscribed is a terminal status"
                )
            changes["handle"] = new_handle
        if "password" in patch:
            changes["password"] = _hash_from_payload(patch["password"])
        if "member_dob" in patch:
            new_dob = date.fromisoformat(patch["member_dob"])
            if new_dob > current.member_doj:
                raise StoreError(
                    StoreErrorCode.CONSTRAINT_VIOLATION,
                    "member_dob must not follow member_doj",
                )
            changes["member_dob"] = new_dob
        return replace(current, **changes)

    def _commit_patch(self, patch: dict) -> None:
        self._members[patch["name"]] = self._patched_member(patch)

    def member_names(self) -> list[str]:
        with self._lock:
            return sorted(self._members)

    def member_count(self) -> int:
        with self._lock:
            return len(self._members)

    # -- messages --------------------------------------------------------

    def insert_message(
        self,
        *,
        author: str,
        subject: str,
        description: str,
        replytype: ReplyType,
        posted_at: datetime,
        parent_id: int | None = None,
    ) -> Message:
        """Assign the next message id and store the message durably."""
        with self._lock:
            if author not in self._members:
                raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, f"no member named {author!r}")
            if (replytype is ReplyType.REPLY) != (parent_id is not None):
                raise StoreError(
                    StoreErrorCode.CONSTRAINT_VIOLATION,
                    "parent_id is required for replies and forbidden otherwise",
                )
            if parent_id is not None:
                parent = self._messages.get(parent_id)
                if parent is None:
                    raise StoreError(
                        StoreErrorCode.UNKNOWN_MESSAGE, f"no message with id {parent_id}"
                    )
                if parent.replytype is ReplyType.REPLY:
                    raise StoreError(
                        StoreErrorCode.CONSTRAINT_VIOLATION, "cannot reply to a reply"
                    )
            message = Message(
                message_id=self._next_message_id,
                subject=subject,
                handler=MessageStatus.ACTIVE,
                description=description,
                replytype=replytype,
                author=author,
                posted_at=posted_at,
                parent_id=parent_id,
            )
            self._journal_append("message", _message_payload(message))
            self._commit_message(message)
            return message

    def _commit_message(self, message: Message) -> None:
        # A record for an existing id is an upsert (status changes re-emit the
        # full message); a fresh id is an insert and advances the counter.
        if message.author not in self._members:
            raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, message.author)
        if message.parent_id is not None and message.parent_id not in self._messages:
            raise StoreError(StoreErrorCode.UNKNOWN_MESSAGE, str(message.parent_id))
        self._messages[message.message_id] = message
        if message.message_id >= self._next_message_id:
            self._next_message_id = message.message_id + 1

    def get_message(self, message_id: int) -> Message:
        with self._lock:
            message = self._messages.get(message_id)
            if message is None:
                raise StoreError(StoreErrorCode.UNKNOWN_MESSAGE, f"no message with id {message_id}")
            return message

    def set_message_status(self, message_id: int, status: MessageStatus) -> Message:
        """Soft delete / restore; messages are never physically removed."""
        with self._lock:
            updated = replace(self.get_message(message_id), handler=status)
            self._journal_append("message", _message_payload(updated))
            self._messages[message_id] = updated
            return updated

    def list_messages(self, *, offset: int = 0, limit: int = PAGE_DEFAULT) -> list[Message]:
        """Active originals and forwards, newest first by (posted_at, message_id)."""
        offset = max(0, offset)
        limit = max(0, min(limit, PAGE_MAX))
        with self._lock:
            visible = [
                m
                for m in self._messages.values()
                if m.handler is MessageStatus.ACTIVE and m.replytype is not ReplyType.REPLY
            ]
            visible.sort(key=lambda m: (m.posted_at, m.message_id), reverse=True)
            return visible[offset : offset + limit]

    def list_replies(self, parent_id: int) -> list[Message]:
        """Replies of a parent, oldest first by (posted_at, message_id)."""
        with self._lock:
            if parent_id not in self._messages:
                raise StoreError(StoreErrorCode.UNKNOWN_MESSAGE, f"no message with id {parent_id}")
            replies = [m for m in self._messages.values() if m.parent_id == parent_id]
            replies.sort(key=lambda m: (m.posted_at, m.message_id))
            return replies

    def reply_counts(self, message_ids: list[int]) -> dict[int, int]:
        """Stored-reply count per requested id, in one scan."""
        wanted = set(message_ids)
        counts = {message_id: 0 for message_id in message_ids}
        with self._lock:
            for message in self._messages.values():
                if message.parent_id in wanted:
                    counts[message.parent_id] += 1
        return counts

    def message_count(self) -> int:
        with self._lock:
            return len(self._messages)

    def all_messages(self) -> list[Message]:
        with self._lock:
            return sorted(self._messages.values(), key=lambda m: m.message_id)

    @property
    def next_message_id(self) -> int:
        with self._lock:
            return self._next_message_id

    # -- participation ---------------------------------------------------

    def participation_edges(
        self, *, member: str | None = None, message_id: int | None = None
    ) -> list[ParticipationEdge]:
        """The member-to-message participation view, derived from stored messages.

        Author edges come from non-reply messages; each reply yields a replier
        edge against its parent. Edges are a deduplicated set, sorted for
        deterministic output.
        """
        if member is not None and message_id is not None:
            raise ValueError("at most one selector may be given")
        with self._lock:
            if member is not None and member not in self._members:
                raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, f"no member named {member!r}")
            if message_id is not None and message_id not in self._messages:
                raise StoreError(
                    StoreErrorCode.UNKNOWN_MESSAGE, f"no message with id {message_id}"
                )
            edges: set[ParticipationEdge] = set()
            for message in self._messages.values():
                if message.replytype is ReplyType.REPLY:
                    edge = ParticipationEdge(
                        message.author, message.parent_id, ParticipationRole.REPLIER
                    )
                else:
                    edge = ParticipationEdge(
                        message.author, message.message_id, ParticipationRole.AUTHOR
                    )
                edges.add(edge)
            if member is not None:
                edges = {e for e in edges if e.member == member}
            if message_id is not None:
                edges = {e for e in edges if e.message_id == message_id}
            return sorted(edges, key=lambda e: (e.member, e.message_id, e.role.value))

    # -- admin credentials -------------------------------------------------

    def create_admin_credential(self, credential: AdminCredential) -> AdminCredential:
        with self._lock:
            if credential.member_name not in self._members:
                raise StoreError(
                    StoreErrorCode.UNKNOWN_MEMBER, f"no member named {credential.member_name!r}"
                )
            if credential.member_name in self._admin_credentials:
                raise StoreError(
                    StoreErrorCode.CONSTRAINT_VIOLATION,
                    "at most one admin credential per member",
                )
            self._journal_append("admin", _admin_payload(credential))
            self._commit_admin(credential)
            return credential

    def _commit_admin(self, credential: AdminCredential) -> None:
        if credential.member_name not in self._members:
            raise StoreError(StoreErrorCode.UNKNOWN_MEMBER, credential.member_name)
        if credential.member_name in self._admin_credentials:
            raise StoreError(StoreErrorCode.CONSTRAINT_VIOLATION, credential.member_name)
        self._admin_credentials[credential.member_name] = credential

    def get_admin_credential(self, name: str) -> AdminCredential:
        with self._lock:
            credential = self._admin_credentials.get(name)
            if credential is None:
                raise StoreError(
                    StoreErrorCode.UNKNOWN_MEMBER, f"no admin credential for {name!r}"
                )
            return credential

    def admin_names(self) -> list[str]:
        with self._lock:
            return sorted(self._admin_credentials)
