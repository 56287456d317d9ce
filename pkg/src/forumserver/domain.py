"""Core domain types and the validation rules applied to every inbound value."""

from __future__ import annotations

import hashlib
import hmac
import re
import secrets
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum

MEMBER_NAME_MIN = 3
MEMBER_NAME_MAX = 32
PASSWORD_MIN = 8
SUBJECT_MAX = 120
DESCRIPTION_MAX = 10_000

SALT_BYTES = 16
PBKDF2_ALGORITHM = "pbkdf2-sha256"
PBKDF2_ITERATIONS = 100_000

_MEMBER_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class ValidationCode(str, Enum):
    EMPTY = "empty"
    TOO_SHORT = "too_short"
    TOO_LONG = "too_long"
    BAD_CHARSET = "bad_charset"
    BAD_DATE = "bad_date"
    WEAK_PASSWORD = "weak_password"


_DETAIL_TEMPLATES = {
    ValidationCode.EMPTY: "{field} must not be empty",
    ValidationCode.TOO_SHORT: "{field} must be at least {limit} characters",
    ValidationCode.TOO_LONG: "{field} must be at most {limit} characters",
    ValidationCode.BAD_CHARSET: "{field} may only contain ASCII letters, digits and underscore",
    ValidationCode.BAD_DATE: "{field} must be a calendar date in YYYY-MM-DD form",
    ValidationCode.WEAK_PASSWORD: (
        "{field} must be at least {limit} characters and contain a letter and a digit"
    ),
}


class ValidationError(ValueError):
    """Rejects a single inbound field; the code selects the detail template."""

    def __init__(self, field: str, code: ValidationCode, limit: int | None = None):
        self.field = field
        self.code = code
        self.detail = _DETAIL_TEMPLATES[code].format(field=field, limit=limit)
        super().__init__(self.detail)


class PresenceStatus(str, Enum):
    OFFLINE = "offline"
    ONLINE = "online"
    UNSUBSCRIBED = "unsubscribed"  # terminal: no transition out


class MessageStatus(str, Enum):
    ACTIVE = "active"
    DELETED = "deleted"  # hidden from listings, retained in storage


class ReplyType(str, Enum):
    ORIGINAL = "original"
    REPLY = "reply"
    FORWARD = "forward"


def validate_member_name(raw: str) -> str:
    """Return the trimmed member name, or raise the first violated rule.

    Rule order: empty, too_short, too_long, bad_charset.
    """
    name = raw.strip()
    if not name:
        raise ValidationError("memberName", ValidationCode.EMPTY)
    if len(name) < MEMBER_NAME_MIN:
        raise ValidationError("memberName", ValidationCode.TOO_SHORT, MEMBER_NAME_MIN)
    if len(name) > MEMBER_NAME_MAX:
        raise ValidationError("memberName", ValidationCode.TOO_LONG, MEMBER_NAME_MAX)
    if not _MEMBER_NAME_RE.match(name):
        raise ValidationError("memberName", ValidationCode.BAD_CHARSET)
    return name


def validate_password(raw: str) -> str:
    """Accept passwords of 8+ characters containing at least one letter and one digit."""
    if (
        len(raw) < PASSWORD_MIN
        or not any(c.isalpha() for c in raw)
        or not any(c.isdigit() for c in raw)
    ):
        raise ValidationError("password", ValidationCode.WEAK_PASSWORD, PASSWORD_MIN)
    return raw


def validate_subject(raw: str) -> str:
    subject = raw.strip()
    if not subject:
        raise ValidationError("subject", ValidationCode.EMPTY)
    if len(subject) > SUBJECT_MAX:
        raise ValidationError("subject", ValidationCode.TOO_LONG, SUBJECT_MAX)
    return subject


def validate_description(raw: str) -> str:
    description = raw.strip()
    if not description:
        raise ValidationError("description", ValidationCode.EMPTY)
    if len(description) > DESCRIPTION_MAX:
        raise ValidationError("description", ValidationCode.TOO_LONG, DESCRIPTION_MAX)
    return description


def validate_message_fields(subject: str, description: str) -> tuple[str, str]:
    """Validate subject then description; the first violation wins."""
    return validate_subject(subject), validate_description(description)


def validate_member_dob(raw: str) -> date:
    try:
        return date.fromisoformat(raw.strip())
    except ValueError:
        raise ValidationError("memberDOB", ValidationCode.BAD_DATE) from None


@dataclass(frozen=True, repr=False)
class PasswordHash:
    """Salted one-way hash; the plaintext is never stored anywhere."""

    algorithm_id: str
    salt: bytes
    digest: bytes

    def __repr__(self) -> str:  # never leak salt or digest
        return f"PasswordHash(algorithm_id={self.algorithm_id!r})"


def hash_password(raw: str, *, iterations: int = PBKDF2_ITERATIONS) -> PasswordHash:
    """Hash with a fresh random salt; the iteration count travels in algorithm_id."""
    salt = secrets.token_bytes(SALT_BYTES)
    digest = hashlib.pbkdf2_hmac("sha256", raw.encode("utf-8"), salt, iterations)
    return PasswordHash(f"{PBKDF2_ALGORITHM}${iterations}", salt, digest)


def verify_password(raw: str, stored: PasswordHash) -> bool:
    """True iff raw is the plaintext that produced stored; digest compare is constant-time."""
    algorithm, _, iterations = stored.algorithm_id.partition("$")
    if algorithm != PBKDF2_ALGORITHM or not iterations.isdigit():
        return False
    candidate = hashlib.pbkdf2_hmac("sha256", raw.encode("utf-8"), stored.salt, int(iterations))
    return hmac.compare_digest(candidate, stored.digest)


@dataclass(frozen=True)
class Member:
    """A registered forum member; name is the unique key and never changes."""

    name: str
    password: PasswordHash
    handle: PresenceStatus
    member_dob: date
    member_doj: date

    def __post_init__(self):
        if self.member_doj < self.member_dob:
            raise ValueError("member_doj must not precede member_dob")


@dataclass(frozen=True)
class Message:
    """A forum message; replies carry parent_id, originals and forwards never do."""

    message_id: int
    subject: str
    handler: MessageStatus
    description: str
    replytype: ReplyType
    author: str
    posted_at: datetime
    parent_id: int | None = None

    def __post_init__(self):
        if self.message_id <= 0:
            raise ValueError("message_id must be positive")
        if (self.replytype is ReplyType.REPLY) != (self.parent_id is not None):
            raise ValueError("parent_id is required for replies and forbidden otherwise")
        if self.posted_at.tzinfo is None:
            raise ValueError("posted_at must be timezone-aware")


@dataclass(frozen=True)
class AdminCredential:
    """Privileged-member record; at most one per member."""

    member_name: str
    password: PasswordHash
