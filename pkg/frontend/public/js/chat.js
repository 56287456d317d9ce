// Chat polling loop: every tick asks for messages after the saved cursor and
// appends them in cursor order. Transient failures retry on the next tick
// without losing the cursor; a 401 stops the loop and hands off to signin.
import { ApiFailure } from "./api.js";
export const CHAT_POLL_INTERVAL_MS = 2000;
export class ChatPoller {
    constructor(api, state, hooks, intervalMs = CHAT_POLL_INTERVAL_MS) {
        this.api = api;
        this.state = state;
        this.hooks = hooks;
        this.intervalMs = intervalMs;
        this.timer = null;
        this.inFlight = false;
    }
    get running() {
        return this.timer !== null;
    }
    start() {
        if (this.timer !== null)
            return;
        this.timer = setInterval(() => void this.tick(), this.intervalMs);
        void this.tick();
    }
    stop() {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }
    async tick() {
        if (this.inFlight)
            return;
        this.inFlight = true;
        try {
            const poll = await this.api.chatPoll(this.state.chatCursor);
            if (poll.truncated)
                this.hooks.onTruncated();
            if (poll.messages.length > 0)
                this.hooks.onMessages(poll.messages);
            this.state.setChatCursor(poll.next_after);
        }
        catch (error) {
            if (error instanceof ApiFailure && error.status === 401) {
                this.stop();
                this.hooks.onUnauthorized();
            }
            // anything else: keep the cursor, retry next tick
        }
        finally {
            this.inFlight = false;
        }
    }
}
