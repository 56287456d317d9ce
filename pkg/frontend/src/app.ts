// Application shell: navigation chrome, route dispatch, session bootstrap.

import { ApiClient, ApiFailure } from "./api.js";
import { CHAT_POLL_INTERVAL_MS } from "./chat.js";
import { PageRoute, hashFor, parseHash, resolveRoute } from "./router.js";
import { SessionState } from "./state.js";
import {
  AppContext,
  ChatView,
  renderAbout,
  renderChat,
  renderContact,
  renderIntroduction,
  renderMain,
  renderMessageDetail,
  renderMessages,
  renderRegister,
  renderSignin,
  showFieldError,
  showFormError,
} from "./views.js";

export interface AppOptions {
  pollIntervalMs?: number;
}

const NAV_LINKS: Array<[string, PageRoute]> = [
  ["Main", { name: "main" }],
  ["Introduction", { name: "introduction" }],
  ["Register", { name: "register" }],
  ["Sign In", { name: "signin" }],
  ["Contact Us", { name: "contact" }],
  ["About Us", { name: "about" }],
  ["Messages", { name: "messages" }],
  ["Chat", { name: "chat" }],
];

export class App {
  readonly state = new SessionState();
  private readonly doc: Document;
  private readonly win: Window;
  private nav!: HTMLElement;
  private content!: HTMLElement;
  private activeChat: ChatView | null = null;
  private rendering: Promise<void> = Promise.resolve();
  private onHashChange = () => {
    this.enqueueRender(parseHash(this.win.location.hash));
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: AppOptions = {},
  ) {
    this.doc = root.ownerDocument;
    const win = this.doc.defaultView;
    if (!win) throw new Error("root element is not attached to a window");
    this.win = win;
  }

  async start(): Promise<void> {
    this.root.textContent = "";
    this.nav = this.doc.createElement("nav");
    this.content = this.doc.createElement("main");
    this.content.id = "content";
    this.root.append(this.nav, this.content);

    await this.probeSession();
    this.state.onChange(() => this.renderNav());
    this.renderNav();
    this.win.addEventListener("hashchange", this.onHashChange);
    this.enqueueRender(parseHash(this.win.location.hash));
    await this.settled();
  }

  // An existing cookie keeps the member signed in across reloads.
  private async probeSession(): Promise<void> {
    try {
      const me = await this.api.profile();
      this.state.signIn(me.memberName);
    } catch {
      this.state.signOut();
    }
  }

  navigate(route: PageRoute): void {
    const target = hashFor(route);
    if (this.win.location.hash !== target) {
      this.win.location.hash = target; // also triggers hashchange in browsers
    }
    this.enqueueRender(route);
  }

  // Renders queue one after another; a hashchange echo never interleaves with
  // the render that caused it.
  private enqueueRender(route: PageRoute): void {
    this.rendering = this.rendering
      .then(() => this.render(route))
      .catch(() => undefined);
  }

  // Let tests await the queued renders.
  async settled(): Promise<void> {
    let tail;
    do {
      tail = this.rendering;
      await tail;
    } while (tail !== this.rendering);
  }

  stop(): void {
    this.win.removeEventListener("hashchange", this.onHashChange);
    this.teardownChat();
  }

  private teardownChat(): void {
    if (this.activeChat) {
      this.activeChat.poller.stop();
      this.activeChat = null;
    }
  }

  private renderNav(): void {
    this.nav.textContent = "";
    for (const [label, route] of NAV_LINKS) {
      const link = this.doc.createElement("a");
      link.href = hashFor(route);
      link.textContent = label;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        this.navigate(route);
      });
      this.nav.append(link);
    }
    if (this.state.isAuthenticated) {
      const signout = this.doc.createElement("button");
      signout.id = "signout-button";
      signout.textContent = "Sign Out";
      signout.addEventListener("click", () => {
        void this.api
          .signout()
          .catch(() => undefined) // session may already be gone
          .then(() => {
            this.state.signOut();
            this.navigate({ name: "main" });
          });
      });
      this.nav.append(signout);
    }
  }

  private context(): AppContext {
    return {
      api: this.api,
      state: this.state,
      navigate: (route) => this.navigate(route),
      handleFailure: (error, form) => this.handleFailure(error, form),
      pollIntervalMs: this.options.pollIntervalMs ?? CHAT_POLL_INTERVAL_MS,
      doc: this.doc,
    };
  }

  private handleFailure(error: unknown, form?: HTMLFormElement): void {
    // bad_credentials is a form problem, not a lost session
    if (error instanceof ApiFailure && error.status === 401 && error.code !== "bad_credentials") {
      this.state.signOut();
      this.navigate({ name: "signin" });
      return;
    }
    if (form && error instanceof ApiFailure) {
      if (!(error.field && showFieldError(form, error.field, error.message))) {
        showFormError(form, error.message);
      }
      return;
    }
    if (form) {
      showFormError(form, "Something went wrong talking to the server.");
    }
  }

  private async render(requested: PageRoute): Promise<void> {
    const route = resolveRoute(requested, this.state.snapshot);
    if (route !== requested) {
      const target = hashFor(route);
      if (this.win.location.hash !== target) this.win.location.hash = target;
    }
    this.teardownChat();
    this.content.textContent = "";
    this.content.dataset.page = route.name;
    const ctx = this.context();
    switch (route.name) {
      case "main":
        await renderMain(ctx, this.content);
        break;
      case "introduction":
        await renderIntroduction(ctx, this.content);
        break;
      case "register":
        renderRegister(ctx, this.content);
        break;
      case "signin":
        renderSignin(ctx, this.content);
        break;
      case "contact":
        await renderContact(ctx, this.content);
        break;
      case "about":
        await renderAbout(ctx, this.content);
        break;
      case "messages":
        await renderMessages(ctx, this.content);
        break;
      case "message_detail":
        await renderMessageDetail(ctx, this.content, route.messageId);
        break;
      case "chat":
        this.activeChat = renderChat(ctx, this.content);
        break;
    }
  }
}

export function createApp(root: HTMLElement, api: ApiClient, options?: AppOptions): App {
  return new App(root, api, options);
}
