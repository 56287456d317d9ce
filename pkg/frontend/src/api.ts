// Thin typed client over the JSON API. Non-2xx responses become ApiFailure
// carrying the server's error envelope; response bodies are schema-checked.

import {
  ChatMessage,
  ChatPoll,
  Headline,
  InfoPage,
  Message,
  MessageDetail,
  PublicMember,
  ReplyEntry,
  SigninReply,
  asChatMessage,
  asChatPoll,
  asErrorEnvelope,
  asHeadlines,
  asInfoPage,
  asMessage,
  asMessageDetail,
  asOnlineList,
  asPublicMember,
  asSigninReply,
} from "./schemas.js";

export type FetchLike = (path: string, init?: RequestInit) => Promise<Response>;

export class ApiFailure extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly field?: string,
  ) {
    super(message);
    this.name = "ApiFailure";
  }
}

const defaultFetch: FetchLike = (path, init) => fetch(path, init);

export class ApiClient {
  constructor(private readonly fetchImpl: FetchLike = defaultFetch) {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "content-type": "application/json" };
    }
    const response = await this.fetchImpl(path, init);
    if (response.status === 204) return undefined;
    if (!response.ok) {
      let envelope;
      try {
        envelope = asErrorEnvelope(await response.json());
      } catch {
        throw new ApiFailure(response.status, "internal", `request failed (${response.status})`);
      }
      throw new ApiFailure(response.status, envelope.code, envelope.message, envelope.field);
    }
    return response.json();
  }

  async register(memberName: string, password: string, memberDOB: string): Promise<PublicMember> {
    return asPublicMember(
      await this.request("POST", "/api/register", { memberName, password, memberDOB }),
    );
  }

  async signin(memberName: string, password: string): Promise<SigninReply> {
    return asSigninReply(await this.request("POST", "/api/signin", { memberName, password }));
  }

  async signout(): Promise<void> {
    await this.request("POST", "/api/signout");
  }

  async profile(): Promise<PublicMember> {
    return asPublicMember(await this.request("GET", "/api/profile"));
  }

  async changePassword(oldPassword: string, newPassword: string): Promise<void> {
    await this.request("PUT", "/api/profile/password", { old: oldPassword, new: newPassword });
  }

  async unsubscribe(): Promise<void> {
    await this.request("DELETE", "/api/profile");
  }

  async headlines(offset = 0, limit = 20): Promise<Headline[]> {
    return asHeadlines(await this.request("GET", `/api/messages?offset=${offset}&limit=${limit}`));
  }

  async postMessage(subject: string, description: string): Promise<Message> {
    return asMessage(await this.request("POST", "/api/messages", { subject, description }));
  }

  async messageDetail(messageId: number): Promise<MessageDetail> {
    return asMessageDetail(await this.request("GET", `/api/messages/${messageId}`));
  }

  async postReply(messageId: number, description: string): Promise<Message> {
    return asMessage(
      await this.request("POST", `/api/messages/${messageId}/replies`, { description }),
    );
  }

  async forward(messageId: number): Promise<Message> {
    return asMessage(await this.request("POST", `/api/messages/${messageId}/forward`));
  }

  async chatPoll(after: number): Promise<ChatPoll> {
    return asChatPoll(await this.request("GET", `/api/chat?after=${after}`));
  }

  async chatPost(body: string): Promise<ChatMessage> {
    return asChatMessage(await this.request("POST", "/api/chat", { body }));
  }

  async online(): Promise<string[]> {
    return asOnlineList(await this.request("GET", "/api/chat/online"));
  }

  async info(page: string): Promise<InfoPage> {
    return asInfoPage(await this.request("GET", `/api/info/${page}`));
  }
}

export type { ChatPoll, ChatMessage, Headline, Message, MessageDetail, PublicMember, ReplyEntry };
