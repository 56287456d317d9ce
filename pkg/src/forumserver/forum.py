"""Message-board operations: posting, listing, replying and forwarding."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime

from .domain import (
    DESCRIPTION_MAX,
    Message,
    MessageStatus,
    ReplyType,
    SUBJECT_MAX,
    validate_description,
    validate_message_fields,
)
from .storage import Store, StoreError, StoreErrorCode

REPLY_SUBJECT_PREFIX = "Re: "
FORWARD_SUBJECT_PREFIX = "Fwd: "
FORWARD_ATTRIBUTION = "Forwarded from {author}:\n"


@dataclass(frozen=True)
class AuthorContact:
    """The contact fields exposed alongside a message: name and joining date only."""

    name: str
    member_doj: date


@dataclass(frozen=True)
class MessageHeadline:
    message_id: int
    subject: str
    author: str
    posted_at: datetime
    reply_count: int


@dataclass(frozen=True)
class MessageWithContact:
    message: Message
    author_contact: AuthorContact


@dataclass(frozen=True)
class MessageDetail:
    message: Message
    author_contact: AuthorContact
    replies: list[MessageWithContact]


def _contact(store: Store, member_name: str) -> AuthorContact:
    member = store.get_member(member_name)
    return AuthorContact(name=member.name, member_doj=member.member_doj)


def _active_message(store: Store, message_id: int) -> Message:
    """Fetch a message, treating soft-deleted ones as absent."""
    message = store.get_message(message_id)
    if message.handler is not MessageStatus.ACTIVE:
        raise StoreError(StoreErrorCode.UNKNOWN_MESSAGE, f"no message with id {message_id}")
    return message


def post_message(
    store: Store, author: str, subject: str, description: str, *, now: datetime
) -> Message:
    subject, description = validate_message_fields(subject, description)
    return store.insert_message(
        author=author,
        subject=subject,
        description=description,
        replytype=ReplyType.ORIGINAL,
        posted_at=now,
    )


def list_headlines(store: Store, *, offset: int = 0, limit: int = 20) -> list[MessageHeadline]:
    messages = store.list_messages(offset=offset, limit=limit)
    counts = store.reply_counts([m.message_id for m in messages])
    return [
        MessageHeadline(
            message_id=m.message_id,
            subject=m.subject,
            author=m.author,
            posted_at=m.posted_at,
            reply_count=counts[m.message_id],
        )
        for m in messages
    ]


def get_message_detail(store: Store, message_id: int) -> MessageDetail:
    message = _active_message(store, message_id)
    replies = [
        MessageWithContact(message=reply, author_contact=_contact(store, reply.author))
        for reply in store.list_replies(message_id)
    ]
    return MessageDetail(
        message=message,
        author_contact=_contact(store, message.author),
        replies=replies,
    )


def list_replies(store: Store, message_id: int) -> list[MessageWithContact]:
    _active_message(store, message_id)
    return [
        MessageWithContact(message=reply, author_contact=_contact(store, reply.author))
        for reply in store.list_replies(message_id)
    ]


def post_reply(
    store: Store, author: str, parent_id: int, description: str, *, now: datetime
) -> Message:
    """Reply to a non-reply message; the subject is derived from the parent."""
    parent = _active_message(store, parent_id)
    if parent.replytype is ReplyType.REPLY:
        raise StoreError(StoreErrorCode.CONSTRAINT_VIOLATION, "cannot reply to a reply")
    description = validate_description(description)
    subject = (REPLY_SUBJECT_PREFIX + parent.subject)[:SUBJECT_MAX]
    return store.insert_message(
        author=author,
        subject=subject,
        description=description,
        replytype=ReplyType.REPLY,
        posted_at=now,
        parent_id=parent_id,
    )


def forward_message(store: Store, forwarder: str, message_id: int, *, now: datetime) -> Message:
    """Copy a message into the public list under the forwarder's name, with a
    one-line attribution to the original author; the source is left untouched."""
    source = _active_message(store, message_id)
    subject = (FORWARD_SUBJECT_PREFIX + source.subject)[:SUBJECT_MAX]
    description = (FORWARD_ATTRIBUTION.format(author=source.author) + source.description)[
        :DESCRIPTION_MAX
    ]
    return store.insert_message(
        author=forwarder,
        subject=subject,
        description=description,
        replytype=ReplyType.FORWARD,
        posted_at=now,
    )
