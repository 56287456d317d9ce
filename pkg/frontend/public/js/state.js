// Client-side session state. The chat cursor only exists while authenticated
// and is dropped on signout or any 401.
export class SessionState {
    constructor() {
        this.authenticated = false;
        this.memberName = null;
        this.lastChatCursor = 0;
        this.listeners = [];
    }
    get snapshot() {
        return {
            authenticated: this.authenticated,
            memberName: this.memberName,
            lastChatCursor: this.lastChatCursor,
        };
    }
    get isAuthenticated() {
        return this.authenticated;
    }
    get chatCursor() {
        return this.lastChatCursor;
    }
    signIn(memberName) {
        this.authenticated = true;
        this.memberName = memberName;
        this.lastChatCursor = 0;
        this.notify();
    }
    signOut() {
        this.authenticated = false;
        this.memberName = null;
        this.lastChatCursor = 0;
        this.notify();
    }
    setChatCursor(cursor) {
        if (!this.authenticated)
            return; // never tracked while signed out
        this.lastChatCursor = cursor;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    notify() {
        for (const listener of this.listeners)
            listener();
    }
}
