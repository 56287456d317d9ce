"""Account lifecycle and session behavior under an injected clock."""

from __future__ import annotations

import random
import re
from datetime import date, timedelta

import pytest

from forumserver.auth import AuthError, AuthErrorCode, AuthSessions
from forumserver.domain import PresenceStatus, ReplyType, ValidationCode, ValidationError
from forumserver.storage import Store
from conftest import FAST_HASH, MutableClock


@pytest.fixture
def store():
    return Store.open()


@pytest.fixture
def sessions(store, clock):
    return AuthSessions(store, clock=clock, hash_iterations=FAST_HASH)


@pytest.fixture
def alice(sessions):
    return sessions.register("alice", "Secret12", "1990-01-01")


class TestRegister:
    def test_creates_offline_member_joined_today(self, sessions, clock):
        member = sessions.register("alice_01", "Secret12", "1990-01-01")
        assert member.handle is PresenceStatus.OFFLINE
        assert member.member_doj == clock().date()
        assert member.member_dob == date(1990, 1, 1)

    def test_duplicate_name(self, sessions, alice):
        with pytest.raises(AuthError) as err:
            sessions.register("alice", "Other123", "1991-01-01")
        assert err.value.code is AuthErrorCode.DUPLICATE_MEMBER

    def test_short_name_rejected(self, sessions):
        with pytest.raises(ValidationError) as err:
            sessions.register("al", "Secret12", "1990-01-01")
        assert err.value.code is ValidationCode.TOO_SHORT

    def test_weak_password_rejected(self, sessions):
        with pytest.raises(ValidationError) as err:
            sessions.register("alice", "short", "1990-01-01")
        assert err.value.code is ValidationCode.WEAK_PASSWORD

    def test_future_dob_rejected(self, sessions, clock):
        future = (clock().date() + timedelta(days=1)).isoformat()
        with pytest.raises(ValidationError) as err:
            sessions.register("alice", "Secret12", future)
        assert err.value.code is ValidationCode.BAD_DATE

    def test_can_login_immediately(self, sessions, alice):
        assert sessions.login("alice", "Secret12").member == "alice"


class TestLogin:
    def test_success_creates_session_and_goes_online(self, store, sessions, alice):
        session = sessions.login("alice", "Secret12")
        assert re.fullmatch(r"[0-9a-f]{64}", session.token)
        assert store.get_member("alice").handle is PresenceStatus.ONLINE

    def test_wrong_password_and_unknown_name_same_code(self, sessions, alice):
        with pytest.raises(AuthError) as wrong:
            sessions.login("alice", "Wrong456")
        with pytest.raises(AuthError) as unknown:
            sessions.login("nobody", "Secret12")
        assert wrong.value.code is unknown.value.code is AuthErrorCode.BAD_CREDENTIALS

    def test_unsubscribed_account(self, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        sessions.unsubscribe(token)
        with pytest.raises(AuthError) as err:
            sessions.login("alice", "Secret12")
        assert err.value.code is AuthErrorCode.UNSUBSCRIBED_ACCOUNT

    def test_tokens_from_ten_thousand_logins_are_distinct(self, sessions, alice):
        tokens = {sessions.login("alice", "Secret12").token for _ in range(10_000)}
        assert len(tokens) == 10_000


class TestValidate:
    def test_sliding_window_boundaries(self, sessions, clock, alice):
        token = sessions.login("alice", "Secret12").token
        clock.advance(minutes=29)
        assert sessions.validate(token) == "alice"  # refreshed here
        clock.advance(minutes=30)
        assert sessions.validate(token) == "alice"  # exactly at the limit
        clock.advance(minutes=31)
        with pytest.raises(AuthError) as err:
            sessions.validate(token)
        assert err.value.code is AuthErrorCode.INVALID_SESSION

    def test_expiry_is_sliding_not_absolute(self, sessions, clock, alice):
        token = sessions.login("alice", "Secret12").token
        for _ in range(5):  # 145 minutes of use in 29-minute steps
            clock.advance(minutes=29)
            assert sessions.validate(token) == "alice"

    def test_never_issued_token(self, sessions):
        with pytest.raises(AuthError) as err:
            sessions.validate("ab" * 32)
        assert err.value.code is AuthErrorCode.INVALID_SESSION

    def test_event_script_matches_window_oracle(self, sessions, clock, alice):
        # Replay a random timestamped script against an independent
        # last-seen + 30min window simulation.
        rng = random.Random(5)
        token = sessions.login("alice", "Secret12").token
        oracle_last_seen = clock()
        for _ in range(200):
            clock.advance(minutes=rng.randint(1, 40))
            now = clock()
            expect_valid = (now - oracle_last_seen) <= timedelta(minutes=30)
            try:
                sessions.validate(token)
                valid = True
            except AuthError:
                valid = False
            assert valid == expect_valid
            if not valid:
                token = sessions.login("alice", "Secret12").token
            oracle_last_seen = now


class TestLogout:
    def test_invalidates_token(self, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        sessions.logout(token)
        with pytest.raises(AuthError):
            sessions.validate(token)

    def test_idempotent(self, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        sessions.logout(token)
        sessions.logout(token)
        sessions.logout("never-issued")

    def test_goes_offline_only_after_last_session(self, store, sessions, alice):
        first = sessions.login("alice", "Secret12").token
        second = sessions.login("alice", "Secret12").token
        sessions.logout(first)
        assert store.get_member("alice").handle is PresenceStatus.ONLINE
        sessions.logout(second)
        assert store.get_member("alice").handle is PresenceStatus.OFFLINE


class TestChangePassword:
    def test_rotates_password(self, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        sessions.change_password(token, "Secret12", "Fresh456")
        assert sessions.login("alice", "Fresh456")
        with pytest.raises(AuthError):
            sessions.login("alice", "Secret12")

    def test_wrong_old_password_keeps_hash(self, store, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        before = store.get_member("alice").password
        with pytest.raises(AuthError) as err:
            sessions.change_password(token, "Wrong456", "Fresh456")
        assert err.value.code is AuthErrorCode.BAD_CREDENTIALS
        assert store.get_member("alice").password == before

    def test_weak_new_password(self, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        with pytest.raises(ValidationError):
            sessions.change_password(token, "Secret12", "weak")

    def test_requires_valid_session(self, sessions, alice):
        with pytest.raises(AuthError) as err:
            sessions.change_password("ab" * 32, "Secret12", "Fresh456")
        assert err.value.code is AuthErrorCode.INVALID_SESSION

    def test_revokes_other_sessions_only(self, sessions, alice):
        here = sessions.login("alice", "Secret12").token
        elsewhere = sessions.login("alice", "Secret12").token
        sessions.change_password(here, "Secret12", "Fresh456")
        assert sessions.validate(here) == "alice"
        with pytest.raises(AuthError) as err:
            sessions.validate(elsewhere)
        assert err.value.code is AuthErrorCode.INVALID_SESSION


class TestUnsubscribe:
    def test_terminal_and_revokes_all_sessions(self, store, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        other = sessions.login("alice", "Secret12").token
        sessions.unsubscribe(token)
        assert store.get_member("alice").handle is PresenceStatus.UNSUBSCRIBED
        for stale in (token, other):
            with pytest.raises(AuthError):
                sessions.validate(stale)

    def test_expired_token_rejected(self, sessions, clock, alice):
        token = sessions.login("alice", "Secret12").token
        clock.advance(minutes=31)
        with pytest.raises(AuthError) as err:
            sessions.unsubscribe(token)
        assert err.value.code is AuthErrorCode.INVALID_SESSION

    def test_messages_remain_visible(self, store, sessions, alice):
        token = sessions.login("alice", "Secret12").token
        store.insert_message(
            author="alice",
            subject="stays",
            description="body",
            replytype=ReplyType.ORIGINAL,
            posted_at=sessions._clock(),
        )
        sessions.unsubscribe(token)
        [headline] = store.list_messages()
        assert headline.author == "alice"


class TestSweep:
    def test_empty_table(self, sessions):
        assert sessions.sweep_expired() == 0

    def test_removes_only_expired(self, sessions, clock, alice):
        stale_one = sessions.login("alice", "Secret12").token
        stale_two = sessions.login("alice", "Secret12").token
        clock.advance(minutes=20)
        fresh = sessions.login("alice", "Secret12").token
        clock.advance(minutes=15)  # stale pair now idle 35 min, fresh only 15
        assert sessions.sweep_expired() == 2
        assert sessions.validate(fresh) == "alice"
        for gone in (stale_one, stale_two):
            with pytest.raises(AuthError):
                sessions.validate(gone)

    def test_sweep_matches_filter_oracle(self, store, clock):
        sessions = AuthSessions(store, clock=clock, hash_iterations=FAST_HASH)
        rng = random.Random(77)
        for i in range(10):
            sessions.register(f"member_{i}", "Secret12", "1990-01-01")
        tokens = []
        for i in range(40):
            tokens.append(sessions.login(f"member_{rng.randint(0, 9)}", "Secret12").token)
            clock.advance(minutes=rng.randint(0, 8))
            if tokens and rng.random() < 0.3:
                try:
                    sessions.validate(rng.choice(tokens))
                except AuthError:
                    pass
        clock.advance(minutes=rng.randint(0, 40))
        # Oracle: independent filter over a snapshot of the session table.
        now = clock()
        snapshot = dict(sessions._sessions)
        expired_oracle = {
            token
            for token, session in snapshot.items()
            if now - session.last_seen_at > timedelta(minutes=30)
        }
        assert sessions.sweep_expired() == len(expired_oracle)
        for token in snapshot:
            alive_in_table = token in sessions._sessions
            assert alive_in_table == (token not in expired_oracle)


class TestPresenceInvariant:
    def test_fuzz_interleaved_operations(self, store, clock):
        sessions = AuthSessions(store, clock=clock, hash_iterations=FAST_HASH)
        rng = random.Random(2026)
        names = [f"member_{i}" for i in range(6)]
        for name in names:
            sessions.register(name, "Secret12", "1990-01-01")
        tokens: list[str] = []
        for _ in range(400):
            action = rng.random()
            if action < 0.35:
                tokens.append(sessions.login(rng.choice(names), "Secret12").token)
            elif action < 0.55 and tokens:
                sessions.logout(tokens.pop(rng.randrange(len(tokens))))
            elif action < 0.7:
                sessions.sweep_expired()
            elif action < 0.9:
                clock.advance(minutes=rng.randint(1, 20))
            else:
                clock.advance(minutes=35)  # everything expires
            live_members = {s.member for s in sessions.live_sessions()}
            for name in names:
                member = store.get_member(name)
                if member.handle is PresenceStatus.UNSUBSCRIBED:
                    continue
                expected = (
                    PresenceStatus.ONLINE if name in live_members else PresenceStatus.OFFLINE
                )
                assert member.handle is expected, name

    def test_no_plaintext_in_any_result(self, sessions, alice):
        session = sessions.login("alice", "Secret12")
        assert "Secret12" not in repr(session)
        assert "Secret12" not in repr(alice)
