// Chat polling loop: every tick asks for messages after the saved cursor and
// appends them in cursor order. Transient failures retry on the next tick
// without losing the cursor; a 401 stops the loop and hands off to signin.

import { ApiClient, ApiFailure, ChatMessage } from "./api.js";
import { SessionState } from "./state.js";

export const CHAT_POLL_INTERVAL_MS = 2000;

export interface ChatPollerHooks {
  onMessages(messages: ChatMessage[]): void;
  onTruncated(): void;
  onUnauthorized(): void;
}

export class ChatPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly state: SessionState,
    private readonly hooks: ChatPollerHooks,
    private readonly intervalMs: number = CHAT_POLL_INTERVAL_MS,
  ) {}

  get running(): boolean {
    return this.timer !== null;
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
    void this.tick();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const poll = await this.api.chatPoll(this.state.chatCursor);
      if (poll.truncated) this.hooks.onTruncated();
      if (poll.messages.length > 0) this.hooks.onMessages(poll.messages);
      this.state.setChatCursor(poll.next_after);
    } catch (error) {
      if (error instanceof ApiFailure && error.status === 401) {
        this.stop();
        this.hooks.onUnauthorized();
      }
      // anything else: keep the cursor, retry next tick
    } finally {
      this.inFlight = false;
    }
  }
}
