// Application shell: navigation chrome, route dispatch, session bootstrap.
import { ApiFailure } from "./api.js";
import { CHAT_POLL_INTERVAL_MS } from "./chat.js";
import { hashFor, parseHash, resolveRoute } from "./router.js";
import { SessionState } from "./state.js";
import { renderAbout, renderChat, renderContact, renderIntroduction, renderMain, renderMessageDetail, renderMessages, renderRegister, renderSignin, showFieldError, showFormError, } from "./views.js";
const NAV_LINKS = [
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
    constructor(root, api, options = {}) {
        this.root = root;
        this.api = api;
        this.options = options;
        this.state = new SessionState();
        this.activeChat = null;
        this.rendering = Promise.resolve();
        this.onHashChange = () => {
            this.enqueueRender(parseHash(this.win.location.hash));
        };
        this.doc = root.ownerDocument;
        const win = this.doc.defaultView;
        if (!win)
            throw new Error("root element is not attached to a window");
        this.win = win;
    }
    async start() {
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
    async probeSession() {
        try {
            const me = await this.api.profile();
            this.state.signIn(me.memberName);
        }
        catch {
            this.state.signOut();
        }
    }
    navigate(route) {
        const target = hashFor(route);
        if (this.win.location.hash !== target) {
            this.win.location.hash = target; // also triggers hashchange in browsers
        }
        this.enqueueRender(route);
    }
    // Renders queue one after another; a hashchange echo never interleaves with
    // the render that caused it.
    enqueueRender(route) {
        this.rendering = this.rendering
            .then(() => this.render(route))
            .catch(() => undefined);
    }
    // Let tests await the queued renders.
    async settled() {
        let tail;
        do {
            tail = this.rendering;
            await tail;
        } while (tail !== this.rendering);
    }
    stop() {
        this.win.removeEventListener("hashchange", this.onHashChange);
        this.teardownChat();
    }
    teardownChat() {
        if (this.activeChat) {
            this.activeChat.poller.stop();
            this.activeChat = null;
        }
    }
    renderNav() {
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
    context() {
        return {
            api: this.api,
            state: this.state,
            navigate: (route) => this.navigate(route),
            handleFailure: (error, form) => this.handleFailure(error, form),
            pollIntervalMs: this.options.pollIntervalMs ?? CHAT_POLL_INTERVAL_MS,
            doc: this.doc,
        };
    }
    handleFailure(error, form) {
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
    async render(requested) {
        const route = resolveRoute(requested, this.state.snapshot);
        if (route !== requested) {
            const target = hashFor(route);
            if (this.win.location.hash !== target)
                this.win.location.hash = target;
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
export function createApp(root, api, options) {
    return new App(root, api, options);
}
