"""HTTP surface: route table, session cookie plumbing and the JSON error envelope.

Every non-2xx response body is a single envelope ``{"error": {"code", "message",
"field"?}}``. Only register, signin and the info pages are reachable without a
session cookie; every other route answers 401 first.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable

from fastapi import Depends, FastAPI, Request, Response
from fastapi.concurrency import run_in_threadpool
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from . import __version__
from .auth import AuthError, AuthErrorCode, AuthSessions, SESSION_IDLE_MINUTES, utc_now
from .chat import ChatMessage, ChatRoom, online_members
from .domain import (
    AdminCredential,
    Member,
    Message,
    PBKDF2_ITERATIONS,
    PresenceStatus,
    ValidationError,
    hash_password,
    validate_member_dob,
    validate_member_name,
    validate_password,
)
from .forum import (
    MessageDetail,
    MessageHeadline,
    MessageWithContact,
    forward_message,
    get_message_detail,
    list_headlines,
    list_replies,
    post_message,
    post_reply,
)
from .storage import Store, StoreError, StoreErrorCode, rfc3339

SESSION_COOKIE = "FORUMSESSION"
INFO_PAGES = ("introduction", "contact", "about")

DEFAULT_INFO_PAGES = {
    "introduction": {
        "title": "Introduction",
        "body": (
            "This forum connects current and former students. Register an "
            "account, sign in, and you can read and post messages, reply to "
            "other members, and talk in the open discussion room."
        ),
    },
    "contact": {
        "title": "Contact Us",
        "body": (
            "Questions or problems with the forum? Reach the operators at "
            "forum-admin@example.edu and include your member name."
        ),
    },
    "about": {
        "title": "About Us",
        "body": (
            "The forum is run by students, for students: a simple message "
            "board plus a live chat, kept deliberately small and durable."
        ),
    },
}

SWEEP_INTERVAL_SECONDS = 60.0


@dataclass
class ServerConfig:
    """Runtime configuration; defaults apply when a field is left unset."""

    bind_address: str = "127.0.0.1:8080"
    data_path: Path | None = None  # None means ephemeral
    session_idle_minutes: int = SESSION_IDLE_MINUTES
    admin_seed: tuple[str, str] | None = None  # (name, password), first boot only
    info_dir: Path | None = None
    ui_dir: Path | None = None
    sweep_interval_seconds: float = SWEEP_INTERVAL_SECONDS


class ConfigError(Exception):
    """Startup configuration the server refuses to run with."""


class ApiError(Exception):
    """An HTTP-level failure rendered as the error envelope."""

    def __init__(self, status: int, code: str, message: str, field_name: str | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.field_name = field_name
        super().__init__(message)


def _envelope(status: int, code: str, message: str, field_name: str | None = None) -> JSONResponse:
    error: dict = {"code": code, "message": message}
    if field_name is not None:
        error["field"] = field_name
    return JSONResponse({"error": error}, status_code=status)


_STORE_ERROR_STATUS = {
    StoreErrorCode.DUPLICATE_MEMBER: 409,
    StoreErrorCode.UNKNOWN_MEMBER: 404,
    StoreErrorCode.UNKNOWN_MESSAGE: 404,
    StoreErrorCode.CONSTRAINT_VIOLATION: 422,
    StoreErrorCode.IO_FAILURE: 500,
    StoreErrorCode.CORRUPT_RECORD: 500,
}

_AUTH_ERROR_STATUS = {
    AuthErrorCode.BAD_CREDENTIALS: 401,
    AuthErrorCode.DUPLICATE_MEMBER: 409,
    AuthErrorCode.INVALID_SESSION: 401,
    AuthErrorCode.VALIDATION_FAILED: 422,
    AuthErrorCode.UNSUBSCRIBED_ACCOUNT: 403,
}


# -- JSON projections ------------------------------------------------------


def public_member(member: Member) -> dict:
    """Member fields safe to put on the wire; the password hash never leaves."""
    return {
        "memberName": member.name,
        "handle": member.handle.value,
        "memberDOB": member.member_dob.isoformat(),
        "memberDOJ": member.member_doj.isoformat(),
    }


def message_json(message: Message) -> dict:
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


def headline_json(headline: MessageHeadline) -> dict:
    return {
        "message_id": headline.message_id,
        "subject": headline.subject,
        "author": headline.author,
        "posted_at": rfc3339(headline.posted_at),
        "reply_count": headline.reply_count,
    }


def _with_contact_json(item: MessageWithContact) -> dict:
    return {
        "message": message_json(item.message),
        "author_contact": {
            "name": item.author_contact.name,
            "member_doj": item.author_contact.member_doj.isoformat(),
        },
    }


def detail_json(detail: MessageDetail) -> dict:
    return {
        "message": message_json(detail.message),
        "author_contact": {
            "name": detail.author_contact.name,
            "member_doj": detail.author_contact.member_doj.isoformat(),
        },
        "replies": [_with_contact_json(reply) for reply in detail.replies],
    }


def chat_message_json(message: ChatMessage) -> dict:
    return {
        "cursor": message.cursor,
        "sender": message.sender,
        "body": message.body,
        "sent_at": rfc3339(message.sent_at),
    }


# -- request plumbing --------------------------------------------------------


async def _json_body(request: Request) -> dict:
    try:
        payload = await request.json()
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise ApiError(400, "bad_request", "request body must be valid JSON") from None
    if not isinstance(payload, dict):
        raise ApiError(400, "bad_request", "request body must be a JSON object")
    return payload


def _body_field(payload: dict, name: str) -> str:
    value = payload.get(name, "")
    if value is None:
        value = ""
    if not isinstance(value, str):
        raise ApiError(400, "bad_request", f"{name} must be a string", field_name=name)
    return value


def _load_info_pages(info_dir: Path | None) -> dict[str, dict]:
    pages = {name: dict(content) for name, content in DEFAULT_INFO_PAGES.items()}
    if info_dir is None:
        return pages
    for name in INFO_PAGES:
        candidate = Path(info_dir) / f"{name}.json"
        if not candidate.exists():
            continue
        try:
            loaded = json.loads(candidate.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read info page {candidate}: {exc}") from exc
        if (
            not isinstance(loaded, dict)
            or not isinstance(loaded.get("title"), str)
            or not isinstance(loaded.get("body"), str)
        ):
            raise ConfigError(f"info page {candidate} must be a JSON object with title and body")
        pages[name] = {"title": loaded["title"], "body": loaded["body"]}
    return pages


def _seed_admin(
    store: Store, seed: tuple[str, str] | None, hash_iterations: int, clock: Callable[[], datetime]
) -> None:
    """Create the admin member plus credential, on first boot of an empty store only."""
    if seed is None or store.member_count() > 0:
        return
    name_raw, password_raw = seed
    try:
        name = validate_member_name(name_raw)
        password = validate_password(password_raw)
    except ValidationError as exc:
        raise ConfigError(f"admin seed rejected: {exc.detail}") from exc
    today = clock().date()
    member = Member(
        name=name,
        password=hash_password(password, iterations=hash_iterations),
        handle=PresenceStatus.OFFLINE,
        member_dob=today,
        member_doj=today,
    )
    store.create_member(member)
    store.create_admin_credential(
        AdminCredential(member_name=name, password=hash_password(password, iterations=hash_iterations))
    )


def create_app(
    config: ServerConfig | None = None,
    *,
    clock: Callable[[], datetime] = utc_now,
    hash_iterations: int = PBKDF2_ITERATIONS,
) -> FastAPI:
    """Build the application: open the store, seed, and wire the route table."""
    config = config or ServerConfig()
    store = Store.open(config.data_path)
    sessions = AuthSessions(
        store,
        idle_minutes=config.session_idle_minutes,
        clock=clock,
        hash_iterations=hash_iterations,
    )
    room = ChatRoom()
    _seed_admin(store, config.admin_seed, hash_iterations, clock)
    info_pages = _load_info_pages(config.info_dir)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        stop = threading.Event()

        def sweeper():
            while not stop.wait(config.sweep_interval_seconds):
                sessions.sweep_expired()

        thread = threading.Thread(target=sweeper, name="session-sweeper", daemon=True)
        thread.start()
        try:
            yield
        finally:
            stop.set()
            thread.join(timeout=5)
            store.close()

    app = FastAPI(
        title="forum-server",
        version=__version__,
        lifespan=lifespan,
        openapi_url=None,
        docs_url=None,
        redoc_url=None,
    )
    app.state.store = store
    app.state.sessions = sessions
    app.state.room = room
    app.state.config = config

    def require_member(request: Request) -> str:
        token = request.cookies.get(SESSION_COOKIE)
        if token is None:
            raise ApiError(401, "unauthorized", "authentication required")
        try:
            return sessions.validate(token)
        except AuthError:
            raise ApiError(401, "invalid_session", "unknown or expired session") from None

    # -- error envelope -----------------------------------------------------

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return _envelope(exc.status, exc.code, exc.message, exc.field_name)

    @app.exception_handler(ValidationError)
    async def _validation_error(request: Request, exc: ValidationError):
        return _envelope(422, exc.code.value, exc.detail, exc.field)

    @app.exception_handler(AuthError)
    async def _auth_error(request: Request, exc: AuthError):
        return _envelope(_AUTH_ERROR_STATUS[exc.code], exc.code.value, exc.detail)

    @app.exception_handler(StoreError)
    async def _store_error(request: Request, exc: StoreError):
        return _envelope(_STORE_ERROR_STATUS[exc.code], exc.code.value, exc.detail)

    @app.exception_handler(RequestValidationError)
    async def _request_validation_error(request: Request, exc: RequestValidationError):
        return _envelope(400, "bad_request", "malformed request parameters")

    @app.exception_handler(StarletteHTTPException)
    async def _http_exception(request: Request, exc: StarletteHTTPException):
        if exc.status_code == 404:
            return _envelope(404, "not_found", "no such resource")
        if exc.status_code == 401:
            return _envelope(401, "unauthorized", str(exc.detail))
        code = "bad_request" if exc.status_code < 500 else "internal"
        return _envelope(exc.status_code, code, str(exc.detail))

    @app.exception_handler(Exception)
    async def _unhandled(request: Request, exc: Exception):
        return _envelope(500, "internal", "internal server error")

    # -- public routes --------------------------------------------------------

    @app.post("/api/register", status_code=201)
    async def register(request: Request):
        payload = await _json_body(request)
        member = await run_in_threadpool(
            sessions.register,
            _body_field(payload, "memberName"),
            _body_field(payload, "password"),
            _body_field(payload, "memberDOB"),
        )
        return JSONResponse(public_member(member), status_code=201)

    @app.post("/api/signin")
    async def signin(request: Request):
        payload = await _json_body(request)
        session = await run_in_threadpool(
            sessions.login, _body_field(payload, "memberName"), _body_field(payload, "password")
        )
        response = JSONResponse({"memberName": session.member, "handle": "online"})
        response.set_cookie(
            SESSION_COOKIE,
            session.token,
            httponly=True,
            samesite="strict",
            path="/",
        )
        return response

    @app.post("/api/signout", status_code=204)
    async def signout(request: Request):
        token = request.cookies.get(SESSION_COOKIE)
        if token is None:
            raise ApiError(401, "unauthorized", "authentication required")
        await run_in_threadpool(sessions.logout, token)
        response = Response(status_code=204)
        response.delete_cookie(SESSION_COOKIE, path="/", httponly=True, samesite="strict")
        return response

    @app.get("/api/info/{page}")
    async def info(page: str):
        content = info_pages.get(page)
        if content is None:
            raise ApiError(404, "not_found", f"no info page named {page!r}")
        return content

    # -- profile ------------------------------------------------------------

    @app.get("/api/profile")
    async def get_profile(member: str = Depends(require_member)):
        return public_member(store.get_member(member))

    @app.put("/api/profile")
    async def update_profile(request: Request, member: str = Depends(require_member)):
        payload = await _json_body(request)
        updated = store.get_member(member)
        if "memberDOB" in payload:
            dob = validate_member_dob(_body_field(payload, "memberDOB"))
            if dob > updated.member_doj:
                raise ApiError(
                    422, "bad_date", "memberDOB must not follow the joining date", "memberDOB"
                )
            updated = await run_in_threadpool(store.update_member, member, member_dob=dob)
        return public_member(updated)

    @app.put("/api/profile/password", status_code=204)
    async def change_password(request: Request, member: str = Depends(require_member)):
        payload = await _json_body(request)
        token = request.cookies[SESSION_COOKIE]
        try:
            await run_in_threadpool(
                sessions.change_password,
                token,
                _body_field(payload, "old"),
                _body_field(payload, "new"),
            )
        except AuthError as exc:
            if exc.code is AuthErrorCode.BAD_CREDENTIALS:
                # valid session, wrong proof: refusing is not a sign-in problem
                raise ApiError(403, exc.code.value, exc.detail) from None
            raise
        return Response(status_code=204)

    @app.delete("/api/profile", status_code=204)
    async def unsubscribe(request: Request, member: str = Depends(require_member)):
        token = request.cookies[SESSION_COOKIE]
        await run_in_threadpool(sessions.unsubscribe, token)
        return Response(status_code=204)

    # -- messages -------------------------------------------------------------

    @app.get("/api/messages")
    async def messages_index(
        offset: int = 0, limit: int = 20, member: str = Depends(require_member)
    ):
        headlines = await run_in_threadpool(
            list_headlines, store, offset=max(0, offset), limit=limit
        )
        return [headline_json(h) for h in headlines]

    @app.post("/api/messages", status_code=201)
    async def create_message(request: Request, member: str = Depends(require_member)):
        payload = await _json_body(request)
        message = await run_in_threadpool(
            post_message,
            store,
            member,
            _body_field(payload, "subject"),
            _body_field(payload, "description"),
            now=clock(),
        )
        return JSONResponse(message_json(message), status_code=201)

    @app.get("/api/messages/{message_id}")
    async def message_detail(message_id: int, member: str = Depends(require_member)):
        detail = await run_in_threadpool(get_message_detail, store, message_id)
        return detail_json(detail)

    @app.get("/api/messages/{message_id}/replies")
    async def replies_index(message_id: int, member: str = Depends(require_member)):
        replies = await run_in_threadpool(list_replies, store, message_id)
        return [_with_contact_json(reply) for reply in replies]

    @app.post("/api/messages/{message_id}/replies", status_code=201)
    async def create_reply(
        request: Request, message_id: int, member: str = Depends(require_member)
    ):
        payload = await _json_body(request)
        reply = await run_in_threadpool(
            post_reply,
            store,
            member,
            message_id,
            _body_field(payload, "description"),
            now=clock(),
        )
        return JSONResponse(message_json(reply), status_code=201)

    @app.post("/api/messages/{message_id}/forward", status_code=201)
    async def create_forward(message_id: int, member: str = Depends(require_member)):
        forwarded = await run_in_threadpool(
            forward_message, store, member, message_id, now=clock()
        )
        return JSONResponse(message_json(forwarded), status_code=201)

    # -- chat -----------------------------------------------------------------

    @app.get("/api/chat")
    async def chat_poll(after: int = 0, member: str = Depends(require_member)):
        poll = await run_in_threadpool(room.poll, max(0, after))
        return {
            "messages": [chat_message_json(m) for m in poll.messages],
            "next_after": poll.next_after,
            "truncated": poll.truncated,
        }

    @app.post("/api/chat", status_code=201)
    async def chat_post(request: Request, member: str = Depends(require_member)):
        payload = await _json_body(request)
        message = await run_in_threadpool(
            room.post, member, _body_field(payload, "body"), now=clock()
        )
        return JSONResponse(chat_message_json(message), status_code=201)

    @app.get("/api/chat/online")
    async def chat_online(member: str = Depends(require_member)):
        return await run_in_threadpool(online_members, sessions)

    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
