// Client-side session state. The chat cursor only exists while authenticated
// and is dropped on signout or any 401.

export interface ClientSessionState {
  authenticated: boolean;
  memberName: string | null;
  lastChatCursor: number;
}

export class SessionState {
  private authenticated = false;
  private memberName: string | null = null;
  private lastChatCursor = 0;
  private listeners: Array<() => void> = [];

  get snapshot(): ClientSessionState {
    return {
      authenticated: this.authenticated,
      memberName: this.memberName,
      lastChatCursor: this.lastChatCursor,
    };
  }

  get isAuthenticated(): boolean {
    return this.authenticated;
  }

  get chatCursor(): number {
    return this.lastChatCursor;
  }

  signIn(memberName: string): void {
    this.authenticated = true;
    this.memberName = memberName;
    this.lastChatCursor = 0;
    this.notify();
  }

  signOut(): void {
    this.authenticated = false;
    this.memberName = null;
    this.lastChatCursor = 0;
    this.notify();
  }

  setChatCursor(cursor: number): void {
    if (!this.authenticated) return; // never tracked while signed out
    this.lastChatCursor = cursor;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }
}
