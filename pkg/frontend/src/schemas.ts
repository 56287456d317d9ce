// Runtime guards for every API shape the client consumes. A response that
// does not match its documented schema raises SchemaError so the UI renders
// an error instead of silently mis-rendering.

export class SchemaError extends Error {
  constructor(path: string, expected: string) {
    super(`unexpected API shape at ${path}: expected ${expected}`);
    this.name = "SchemaError";
  }
}

function record(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SchemaError(path, "object");
  }
  return value as Record<string, unknown>;
}

function str(value: unknown, path: string): string {
  if (typeof value !== "string") throw new SchemaError(path, "string");
  return value;
}

function num(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) throw new SchemaError(path, "number");
  return value;
}

function bool(value: unknown, path: string): boolean {
  if (typeof value !== "boolean") throw new SchemaError(path, "boolean");
  return value;
}

function arr(value: unknown, path: string): unknown[] {
  if (!Array.isArray(value)) throw new SchemaError(path, "array");
  return value;
}

export interface PublicMember {
  memberName: string;
  handle: string;
  memberDOB: string;
  memberDOJ: string;
}

export function asPublicMember(value: unknown, path = "member"): PublicMember {
  const body = record(value, path);
  return {
    memberName: str(body.memberName, `${path}.memberName`),
    handle: str(body.handle, `${path}.handle`),
    memberDOB: str(body.memberDOB, `${path}.memberDOB`),
    memberDOJ: str(body.memberDOJ, `${path}.memberDOJ`),
  };
}

export interface SigninReply {
  memberName: string;
  handle: string;
}

export function asSigninReply(value: unknown): SigninReply {
  const body = record(value, "signin");
  return {
    memberName: str(body.memberName, "signin.memberName"),
    handle: str(body.handle, "signin.handle"),
  };
}

export interface Message {
  message_id: number;
  subject: string;
  handler: string;
  description: string;
  replytype: string;
  author: string;
  posted_at: string;
  parent_id: number | null;
}

export function asMessage(value: unknown, path = "message"): Message {
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

export interface Headline {
  message_id: number;
  subject: string;
  author: string;
  posted_at: string;
  reply_count: number;
}

export function asHeadlines(value: unknown): Headline[] {
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

export interface AuthorContact {
  name: string;
  member_doj: string;
}

function asContact(value: unknown, path: string): AuthorContact {
  const body = record(value, path);
  return { name: str(body.name, `${path}.name`), member_doj: str(body.member_doj, `${path}.member_doj`) };
}

export interface ReplyEntry {
  message: Message;
  author_contact: AuthorContact;
}

export interface MessageDetail {
  message: Message;
  author_contact: AuthorContact;
  replies: ReplyEntry[];
}

export function asMessageDetail(value: unknown): MessageDetail {
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

export interface ChatMessage {
  cursor: number;
  sender: string;
  body: string;
  sent_at: string;
}

export function asChatMessage(value: unknown, path = "chat"): ChatMessage {
  const body = record(value, path);
  return {
    cursor: num(body.cursor, `${path}.cursor`),
    sender: str(body.sender, `${path}.sender`),
    body: str(body.body, `${path}.body`),
    sent_at: str(body.sent_at, `${path}.sent_at`),
  };
}

export interface ChatPoll {
  messages: ChatMessage[];
  next_after: number;
  truncated: boolean;
}

export function asChatPoll(value: unknown): ChatPoll {
  const body = record(value, "poll");
  return {
    messages: arr(body.messages, "poll.messages").map((m, i) => asChatMessage(m, `poll.messages[${i}]`)),
    next_after: num(body.next_after, "poll.next_after"),
    truncated: bool(body.truncated, "poll.truncated"),
  };
}

export function asOnlineList(value: unknown): string[] {
  return arr(value, "online").map((name, i) => str(name, `online[${i}]`));
}

export interface InfoPage {
  title: string;
  body: string;
}

export function asInfoPage(value: unknown): InfoPage {
  const body = record(value, "info");
  return { title: str(body.title, "info.title"), body: str(body.body, "info.body") };
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  field?: string;
}

export function asErrorEnvelope(value: unknown): ErrorEnvelope {
  const body = record(value, "error");
  const error = record(body.error, "error.error");
  const envelope: ErrorEnvelope = {
    code: str(error.code, "error.code"),
    message: str(error.message, "error.message"),
  };
  if (typeof error.field === "string") envelope.field = error.field;
  return envelope;
}
