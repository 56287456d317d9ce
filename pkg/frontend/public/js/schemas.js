// Runtime guards for every API shape the client consumes. A response that
// does not match its documented schema raises SchemaError so the UI renders
// an error instead of silently mis-rendering.
export class SchemaError extends Error {
    constructor(path, expected) {
        super(`unexpected API shape at ${path}: expected ${expected}`);
        this.name = "SchemaError";
    }
}
function record(value, path) {
    if (typeof value !== "object" || value === null || Array.isArray(value)) {
        throw new SchemaError(path, "object");
    }
    return value;
}
function str(value, path) {
    if (typeof value !== "string")
        throw new SchemaError(path, "string");
    return value;
}
function num(value, path) {
    if (typeof value !== "number" || !Number.isFinite(value))
        throw new SchemaError(path, "number");
    return value;
}
function bool(value, path) {
    if (typeof value !== "boolean")
        throw new SchemaError(path, "boolean");
    return value;
}
function arr(value, path) {
    if (!Array.isArray(value))
        throw new SchemaError(path, "array");
    return value;
}
export function asPublicMember(value, path = "member") {
    const body = record(value, path);
    return {
        memberName: str(body.memberName, `${path}.memberName`),
        handle: str(body.handle, `${path}.handle`),
        memberDOB: str(body.memberDOB, `${path}.memberDOB`),
        memberDOJ: str(body.memberDOJ, `${path}.memberDOJ`),
    };
}
export function asSigninReply(value) {
    const body = record(value, "signin");
    return {
        memberName: str(body.memberName, "signin.memberName"),
        handle: str(body.handle, "signin.handle"),
    };
}
export function asMessage(value, path = "message") {
    const body = record(value, path);
    const parent = body.parent_id;
    if (parent !== null && typeof parent !== "number") {
        throw new SchemaError(`${path}.parent_id`, "number or null");
    }
    return {
        message_id: num(body.message_id, `${path}.message_id`),
        subject: str(body.subject, `${path}.subject`),
        handler: str(body.handler, `${path}.handler`),
        description: str(body.description, `${path}.description`),
        replytype: str(body.replytype, `${path}.replytype`),
        author: str(body.author, `${path}.author`),
        posted_at: str(body.posted_at, `${path}.posted_at`),
        parent_id: parent,
    };
}
export function asHeadlines(value) {
    return arr(value, "headlines").map((item, i) => {
        const body = record(item, `headlines[${i}]`);
        return {
            message_id: num(body.message_id, `headlines[${i}].message_id`),
            subject: str(body.subject, `headlines[${i}].subject`),
            author: str(body.author, `headlines[${i}].author`),
            posted_at: str(body.posted_at, `headlines[${i}].posted_at`),
            reply_count: num(body.reply_count, `headlines[${i}].reply_count`),
        };
    });
}
function asContact(value, path) {
    const body = record(value, path);
    return { name: str(body.name, `${path}.name`), member_doj: str(body.member_doj, `${path}.member_doj`) };
}
export function asMessageDetail(value) {
    const body = record(value, "detail");
    return {
        message: asMessage(body.message, "detail.message"),
        author_contact: asContact(body.author_contact, "detail.author_contact"),
        replies: arr(body.replies, "detail.replies").map((item, i) => {
            const entry = record(item, `detail.replies[${i}]`);
            return {
                message: asMessage(entry.message, `detail.replies[${i}].message`),
                author_contact: asContact(entry.author_contact, `detail.replies[${i}].author_contact`),
            };
        }),
    };
}
export function asChatMessage(value, path = "chat") {
    const body = record(value, path);
    return {
        cursor: num(body.cursor, `${path}.cursor`),
        sender: str(body.sender, `${path}.sender`),
        body: str(body.body, `${path}.body`),
        sent_at: str(body.sent_at, `${path}.sent_at`),
    };
}
export function asChatPoll(value) {
    const body = record(value, "poll");
    return {
        messages: arr(body.messages, "poll.messages").map((m, i) => asChatMessage(m, `poll.messages[${i}]`)),
        next_after: num(body.next_after, "poll.next_after"),
        truncated: bool(body.truncated, "poll.truncated"),
    };
}
export function asOnlineList(value) {
    return arr(value, "online").map((name, i) => str(name, `online[${i}]`));
}
export function asInfoPage(value) {
    const body = record(value, "info");
    return { title: str(body.title, "info.title"), body: str(body.body, "info.body") };
}
export function asErrorEnvelope(value) {
    const body = record(value, "error");
    const error = record(body.error, "error.error");
    const envelope = {
        code: str(error.code, "error.code"),
        message: str(error.message, "error.message"),
    };
    if (typeof error.field === "string")
        envelope.field = error.field;
    return envelope;
}
