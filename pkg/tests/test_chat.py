"""Chat room: cursors, eviction, truncation flag, exactly-once polling."""

from __future__ import annotations

import random
import threading
from datetime import datetime, timedelta, timezone

import pytest

from forumserver.auth import AuthSessions
from forumserver.chat import ChatRoom, online_members, validate_chat_body
from forumserver.domain import ValidationCode, ValidationError
from forumserver.storage import Store
from conftest import FAST_HASH

NOW = datetime(2026, 3, 14, 12, 0, 0, tzinfo=timezone.utc)


@pytest.fixture
def room():
    return ChatRoom()


class TestBodyValidation:
    def test_trims(self):
        assert validate_chat_body("  hi  ") == "hi"

    def test_empty(self):
        with pytest.raises(ValidationError) as err:
            validate_chat_body("   ")
        assert err.value.code is ValidationCode.EMPTY

    def test_too_long(self):
        assert validate_chat_body("x" * 500) == "x" * 500
        with pytest.raises(ValidationError) as err:
            validate_chat_body("x" * 501)
        assert err.value.code is ValidationCode.TOO_LONG


class TestPost:
    def test_first_cursor_is_one(self, room):
        assert room.post("alice", "hello", now=NOW).cursor == 1

    def test_cursors_are_consecutive(self, room):
        cursors = [room.post("alice", f"m{i}", now=NOW).cursor for i in range(10)]
        assert cursors == list(range(1, 11))

    def test_eviction_after_buffer_fills(self, room):
        for i in range(501):
            room.post("alice", f"m{i}", now=NOW)
        poll = room.poll(0)
        assert poll.messages[0].cursor == 2
        assert poll.messages[-1].cursor == 501
        assert len(poll.messages) == 500
        assert poll.truncated  # cursor 1 is gone

    def test_concurrent_posters_no_gaps(self):
        # Oracle: a sequential run yields the same cursor count and no gaps.
        room = ChatRoom()
        posters, each = 8, 25

        def worker(name):
            for i in range(each):
                room.post(name, f"m{i}", now=NOW)

        threads = [threading.Thread(target=worker, args=(f"p{k}",)) for k in range(posters)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        cursors = [m.cursor for m in room.poll(0).messages]
        assert cursors == list(range(1, posters * each + 1))


class TestPoll:
    def test_fresh_room(self, room):
        poll = room.poll(0)
        assert (poll.messages, poll.next_after, poll.truncated) == ([], 0, False)

    def test_returns_everything_after_cursor(self, room):
        a = room.post("alice", "A", now=NOW)
        b = room.post("bob", "B", now=NOW)
        poll = room.poll(0)
        assert [m.body for m in poll.messages] == ["A", "B"]
        assert poll.next_after == b.cursor
        assert not poll.truncated
        assert room.poll(a.cursor).messages == [b]

    def test_next_after_sticks_when_empty(self, room):
        room.post("alice", "A", now=NOW)
        poll = room.poll(10)
        assert poll.messages == []
        assert poll.next_after == 10

    def test_negative_cursor_rejected(self, room):
        with pytest.raises(ValueError):
            room.poll(-1)

    def test_truncation_against_shadow_log(self):
        # Oracle: an unbounded shadow log decides which cursors are gone.
        room = ChatRoom(buffer_size=10)
        shadow = []
        for i in range(25):
            shadow.append(room.post("alice", f"m{i}", now=NOW))
        floor = shadow[-10].cursor
        for after in range(0, 26):
            poll = room.poll(after)
            expected = [m for m in shadow if m.cursor > after][-10:]
            expected = [m for m in expected if m.cursor >= floor]
            assert poll.messages == expected
            missed = any(m.cursor > after and m.cursor < floor for m in shadow)
            assert poll.truncated == missed, f"after={after}"


class TestExactlyOnceDelivery:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_clients_with_saved_cursors_see_everything_once(self, seed):
        rng = random.Random(seed)
        room = ChatRoom(buffer_size=40)
        shadow = []
        clients = [{"after": 0, "seen": [], "truncated": False} for _ in range(10)]
        for step in range(400):
            if rng.random() < 0.55:
                shadow.append(room.post("alice", f"m{step}", now=NOW))
            else:
                client = rng.choice(clients)
                poll = room.poll(client["after"])
                if poll.truncated:
                    client["truncated"] = True
                client["seen"].extend(m.cursor for m in poll.messages)
                client["after"] = poll.next_after
        for client in clients:
            seen = client["seen"]
            assert seen == sorted(set(seen)), "duplicates or disorder"
            if not client["truncated"]:
                # Never flagged: the client saw a gap-free prefix of the log.
                assert seen == [m.cursor for m in shadow[: len(seen)]]


class TestOnlineMembers:
    @pytest.fixture
    def world(self, clock):
        store = Store.open()
        sessions = AuthSessions(store, clock=clock, hash_iterations=FAST_HASH)
        for name in ("alice", "bob", "carol"):
            sessions.register(name, "Secret12", "1990-01-01")
        return store, sessions

    def test_empty(self, world):
        _, sessions = world
        assert online_members(sessions) == []

    def test_deduplicates_and_sorts(self, world):
        _, sessions = world
        sessions.login("carol", "Secret12")
        sessions.login("alice", "Secret12")
        sessions.login("alice", "Secret12")
        assert online_members(sessions) == ["alice", "carol"]

    def test_matches_session_table_snapshot(self, world, clock):
        _, sessions = world
        rng = random.Random(8)
        tokens = []
        for _ in range(30):
            roll = rng.random()
            if roll < 0.5:
                tokens.append(sessions.login(rng.choice(["alice", "bob", "carol"]), "Secret12").token)
            elif roll < 0.7 and tokens:
                sessions.logout(tokens.pop())
            else:
                clock.advance(minutes=rng.randint(0, 12))
            oracle = sorted(
                {
                    s.member
                    for s in sessions._sessions.values()
                    if clock() - s.last_seen_at <= timedelta(minutes=30)
                }
            )
            assert online_members(sessions) == oracle


class TestEphemerality:
    def test_chat_never_touches_the_journal(self, tmp_path, clock):
        path = tmp_path / "forum.journal"
        store = Store.open(path)
        sessions = AuthSessions(store, clock=clock, hash_iterations=FAST_HASH)
        sessions.register("alice", "Secret12", "1990-01-01")
        size_before = path.stat().st_size
        room = ChatRoom()
        for i in range(20):
            room.post("alice", f"m{i}", now=NOW)
        assert path.stat().st_size == size_before
        store.close()
        Store.open(path).close()  # replays fine; no chat records exist
        assert ChatRoom().poll(0).messages == []
