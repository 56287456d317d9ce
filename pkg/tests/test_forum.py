"""Message board operations: posting, headlines, detail, replies, forwarding."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from forumserver.domain import MessageStatus, ReplyType, ValidationError
from forumserver.forum import (
    AuthorContact,
    forward_message,
    get_message_detail,
    list_headlines,
    list_replies,
    post_message,
    post_reply,
)
from forumserver.storage import Store, StoreError, StoreErrorCode
from conftest import make_member

NOW = datetime(2026, 3, 14, 12, 0, 0, tzinfo=timezone.utc)


def at(minutes: int) -> datetime:
    return NOW + timedelta(minutes=minutes)


@pytest.fixture
def store():
    s = Store.open()
    s.create_member(make_member("alice"))
    s.create_member(make_member("bob"))
    return s


class TestPostMessage:
    def test_posts_active_original(self, store):
        message = post_message(store, "alice", "Hello", "First post", now=NOW)
        assert message.replytype is ReplyType.ORIGINAL
        assert message.handler is MessageStatus.ACTIVE
        assert message.posted_at == NOW
        assert message.parent_id is None

    def test_new_post_heads_the_list(self, store):
        post_message(store, "alice", "First", "one", now=at(0))
        fresh = post_message(store, "bob", "Second", "two", now=at(1))
        assert list_headlines(store)[0].message_id == fresh.message_id

    def test_validation_and_trimming(self, store):
        with pytest.raises(ValidationError):
            post_message(store, "alice", " ", "body", now=NOW)
        message = post_message(store, "alice", "  padded  ", "  body  ", now=NOW)
        assert message.subject == "padded"
        assert message.description == "body"


class TestHeadlines:
    def test_empty_forum(self, store):
        assert list_headlines(store) == []

    def test_reply_count(self, store):
        parent = post_message(store, "alice", "Q", "question", now=at(0))
        post_reply(store, "bob", parent.message_id, "answer one", now=at(1))
        post_reply(store, "alice", parent.message_id, "answer two", now=at(2))
        [headline] = list_headlines(store)
        assert headline.reply_count == 2
        assert headline.subject == "Q"

    def test_counts_match_brute_force_recount(self, store):
        rng = random.Random(11)
        for n in range(30):
            parents = [
                m.message_id for m in store.all_messages() if m.replytype is not ReplyType.REPLY
            ]
            if parents and rng.random() < 0.5:
                post_reply(store, "bob", rng.choice(parents), f"reply {n}", now=at(n))
            else:
                post_message(store, "alice", f"subject {n}", "body", now=at(n))
        everything = store.all_messages()
        for headline in list_headlines(store, limit=100):
            brute = sum(1 for m in everything if m.parent_id == headline.message_id)
            assert headline.reply_count == brute


class TestDetail:
    def test_no_replies(self, store):
        message = post_message(store, "alice", "Solo", "body", now=NOW)
        detail = get_message_detail(store, message.message_id)
        assert detail.message == message
        assert detail.replies == []
        assert detail.author_contact == AuthorContact("alice", store.get_member("alice").member_doj)

    def test_deleted_message_hidden(self, store):
        message = post_message(store, "alice", "Gone", "body", now=NOW)
        store.set_message_status(message.message_id, MessageStatus.DELETED)
        with pytest.raises(StoreError) as err:
            get_message_detail(store, message.message_id)
        assert err.value.code is StoreErrorCode.UNKNOWN_MESSAGE

    def test_absent_message(self, store):
        with pytest.raises(StoreError) as err:
            get_message_detail(store, 999)
        assert err.value.code is StoreErrorCode.UNKNOWN_MESSAGE

    def test_recomposes_from_storage_primitives(self, store):
        parent = post_message(store, "alice", "Topic", "body", now=at(0))
        post_reply(store, "bob", parent.message_id, "first", now=at(1))
        post_reply(store, "alice", parent.message_id, "second", now=at(2))
        detail = get_message_detail(store, parent.message_id)
        # Oracle: zip list_replies with member lookups independently.
        expected = [
            (reply, store.get_member(reply.author).member_doj)
            for reply in store.list_replies(parent.message_id)
        ]
        assert [(r.message, r.author_contact.member_doj) for r in detail.replies] == expected

    def test_contact_exposes_only_name_and_doj(self, store):
        message = post_message(store, "alice", "s", "d", now=NOW)
        detail = get_message_detail(store, message.message_id)
        assert set(vars(detail.author_contact)) == {"name", "member_doj"}


class TestReply:
    def test_reply_links_and_derives_subject(self, store):
        parent = post_message(store, "alice", "Weather", "snowing", now=at(0))
        reply = post_reply(store, "bob", parent.message_id, "still snowing", now=at(1))
        assert reply.replytype is ReplyType.REPLY
        assert reply.parent_id == parent.message_id
        assert reply.subject == "Re: Weather"

    def test_reply_to_reply_rejected(self, store):
        parent = post_message(store, "alice", "Topic", "body", now=at(0))
        reply = post_reply(store, "bob", parent.message_id, "reply", now=at(1))
        with pytest.raises(StoreError) as err:
            post_reply(store, "alice", reply.message_id, "nested", now=at(2))
        assert err.value.code is StoreErrorCode.CONSTRAINT_VIOLATION

    def test_subject_truncation_across_lengths(self, store):
        # Oracle: the derived subject is "Re: " + parent, hard-capped at 120,
        # over every creatable parent-subject length.
        for n in range(1, 121):
            fresh = Store.open()
            fresh.create_member(make_member("alice"))
            parent = post_message(fresh, "alice", "s" * n, "body", now=at(0))
            reply = post_reply(fresh, "alice", parent.message_id, "body", now=at(1))
            assert reply.subject == ("Re: " + "s" * n)[:120]
            assert len(reply.subject) <= 120

    def test_119_char_parent_subject_truncates_to_exactly_120(self, store):
        parent = post_message(store, "alice", "s" * 119, "body", now=at(0))
        reply = post_reply(store, "bob", parent.message_id, "body", now=at(1))
        assert len(reply.subject) == 120
        assert reply.subject == "Re: " + "s" * 116

    def test_reply_to_deleted_parent(self, store):
        parent = post_message(store, "alice", "Gone", "body", now=at(0))
        store.set_message_status(parent.message_id, MessageStatus.DELETED)
        with pytest.raises(StoreError) as err:
            post_reply(store, "bob", parent.message_id, "too late", now=at(1))
        assert err.value.code is StoreErrorCode.UNKNOWN_MESSAGE

    def test_reply_description_validated(self, store):
        parent = post_message(store, "alice", "Topic", "body", now=at(0))
        with pytest.raises(ValidationError):
            post_reply(store, "bob", parent.message_id, "  ", now=at(1))


class TestForward:
    def test_copies_with_attribution(self, store):
        source = post_message(store, "alice", "News", "big news", now=at(0))
        forwarded = forward_message(store, "bob", source.message_id, now=at(1))
        assert forwarded.replytype is ReplyType.FORWARD
        assert forwarded.author == "bob"
        assert forwarded.subject == "Fwd: News"
        assert forwarded.description == "Forwarded from alice:\nbig news"
        assert forwarded.parent_id is None
        assert store.get_message(source.message_id) == source  # source untouched

    def test_forward_deleted_source(self, store):
        source = post_message(store, "alice", "Gone", "body", now=at(0))
        store.set_message_status(source.message_id, MessageStatus.DELETED)
        with pytest.raises(StoreError) as err:
            forward_message(store, "bob", source.message_id, now=at(1))
        assert err.value.code is StoreErrorCode.UNKNOWN_MESSAGE

    def test_template_is_byte_exact(self, store):
        # Oracle: independent template expansion over several bodies.
        for body in ["x", "two\nlines", "unicode påst", "a" * 400]:
            source = post_message(store, "alice", "s", body, now=at(0))
            forwarded = forward_message(store, "bob", source.message_id, now=at(1))
            assert forwarded.description == f"Forwarded from alice:\n{body}"

    def test_forward_appears_in_listing(self, store):
        source = post_message(store, "alice", "News", "body", now=at(0))
        forwarded = forward_message(store, "bob", source.message_id, now=at(1))
        ids = [h.message_id for h in list_headlines(store)]
        assert ids == [forwarded.message_id, source.message_id]

    def test_forward_of_max_length_body_stays_within_cap(self, store):
        source = post_message(store, "alice", "s", "d" * 10_000, now=at(0))
        forwarded = forward_message(store, "bob", source.message_id, now=at(1))
        assert len(forwarded.description) == 10_000
        assert forwarded.description.startswith("Forwarded from alice:\n")


class TestListReplies:
    def test_replies_with_contacts(self, store):
        parent = post_message(store, "alice", "Topic", "body", now=at(0))
        post_reply(store, "bob", parent.message_id, "hi", now=at(1))
        [entry] = list_replies(store, parent.message_id)
        assert entry.author_contact.name == "bob"

    def test_absent_parent(self, store):
        with pytest.raises(StoreError):
            list_replies(store, 404)


class TestConservation:
    def test_totals_never_decrease(self, store):
        rng = random.Random(3)
        seen = 0
        for n in range(40):
            roll = rng.random()
            originals = [
                m.message_id
                for m in store.all_messages()
                if m.replytype is not ReplyType.REPLY and m.handler is MessageStatus.ACTIVE
            ]
            if roll < 0.5 or not originals:
                post_message(store, "alice", f"s{n}", "d", now=at(n))
            elif roll < 0.8:
                post_reply(store, "bob", rng.choice(originals), "r", now=at(n))
            elif roll < 0.9:
                forward_message(store, "bob", rng.choice(originals), now=at(n))
            else:
                store.set_message_status(rng.choice(originals), MessageStatus.DELETED)
            everything = store.all_messages()
            by_type = {
                kind: sum(1 for m in everything if m.replytype is kind) for kind in ReplyType
            }
            assert len(everything) == sum(by_type.values())
            assert len(everything) >= seen
            seen = len(everything)
