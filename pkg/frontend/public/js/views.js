// DOM renderers for each page. Views read through the injected context, never
// through globals, so several app instances can coexist (and be tested) in
// one process.
import { ApiFailure } from "./api.js";
import { ChatPoller } from "./chat.js";
import { hashFor } from "./router.js";
import { SchemaError } from "./schemas.js";
import { validateChatBody, validateDescription, validateDob, validateMemberName, validatePassword, validateSubject, } from "./validators.js";
function el(doc, tag, attrs = {}, children = []) {
    const node = doc.createElement(tag);
    for (const [key, value] of Object.entries(attrs))
        node.setAttribute(key, value);
    for (const child of children) {
        node.append(typeof child === "string" ? doc.createTextNode(child) : child);
    }
    return node;
}
export function clearErrors(form) {
    for (const node of Array.from(form.querySelectorAll(".field-error, .form-error"))) {
        node.textContent = "";
    }
}
export function showFieldError(form, field, message) {
    const slot = form.querySelector(`[data-error-for="${field}"]`);
    if (!slot)
        return false;
    slot.textContent = message;
    return true;
}
export function showFormError(form, message) {
    const slot = form.querySelector(".form-error");
    if (slot)
        slot.textContent = message;
}
function contentError(ctx, container, error) {
    const text = error instanceof ApiFailure
        ? error.message
        : error instanceof SchemaError
            ? "The server sent an unexpected response."
            : "Something went wrong talking to the server.";
    container.append(el(ctx.doc, "p", { class: "content-error", role: "alert" }, [text]));
}
function labeled(doc, label, field, input) {
    return el(doc, "p", {}, [
        el(doc, "label", { for: field }, [label]),
        input,
        el(doc, "span", { class: "field-error", "data-error-for": field }),
    ]);
}
function textInput(doc, field, type = "text") {
    return el(doc, "input", { id: field, name: field, type });
}
function fieldValue(form, name) {
    const input = form.querySelector(`[name="${name}"]`);
    return input ? input.value : "";
}
// -- public pages ----------------------------------------------------------
async function renderInfo(ctx, container, page) {
    try {
        const info = await ctx.api.info(page);
        container.append(el(ctx.doc, "h2", {}, [info.title]), el(ctx.doc, "p", { class: "info-body" }, [info.body]));
    }
    catch (error) {
        contentError(ctx, container, error);
    }
}
export async function renderMain(ctx, container) {
    container.append(el(ctx.doc, "h1", {}, ["Student Forum"]));
    const state = ctx.state.snapshot;
    if (state.authenticated && state.memberName) {
        container.append(el(ctx.doc, "p", { class: "welcome" }, [`Signed in as ${state.memberName}.`]), accountPanel(ctx));
    }
    await renderInfo(ctx, container, "introduction");
}
function accountPanel(ctx) {
    const doc = ctx.doc;
    const panel = el(doc, "section", { class: "account-panel" }, [
        el(doc, "h2", {}, ["Your account"]),
    ]);
    const passwordForm = el(doc, "form", { id: "password-form" }, [
        labeled(doc, "Current password", "old", textInput(doc, "old", "password")),
        labeled(doc, "New password", "new", textInput(doc, "new", "password")),
        el(doc, "button", { type: "submit" }, ["Change password"]),
        el(doc, "span", { class: "form-error" }),
        el(doc, "span", { class: "form-success" }),
    ]);
    passwordForm.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(passwordForm);
        const fresh = fieldValue(passwordForm, "new");
        const problem = validatePassword(fresh);
        if (problem) {
            showFieldError(passwordForm, "new", problem);
            return;
        }
        void ctx.api
            .changePassword(fieldValue(passwordForm, "old"), fresh)
            .then(() => {
            const note = passwordForm.querySelector(".form-success");
            if (note)
                note.textContent = "Password changed.";
            passwordForm.reset();
        })
            .catch((error) => ctx.handleFailure(error, passwordForm));
    });
    const unsubscribeForm = el(doc, "form", { id: "unsubscribe-form" }, [
        el(doc, "button", { type: "submit", class: "danger" }, ["Unsubscribe from the forum"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    unsubscribeForm.addEventListener("submit", (event) => {
        event.preventDefault();
        void ctx.api
            .unsubscribe()
            .then(() => {
            ctx.state.signOut();
            ctx.navigate({ name: "main" });
        })
            .catch((error) => ctx.handleFailure(error, unsubscribeForm));
    });
    panel.append(passwordForm, unsubscribeForm);
    return panel;
}
export async function renderIntroduction(ctx, container) {
    await renderInfo(ctx, container, "introduction");
}
export async function renderContact(ctx, container) {
    await renderInfo(ctx, container, "contact");
}
export async function renderAbout(ctx, container) {
    await renderInfo(ctx, container, "about");
}
export function renderRegister(ctx, container) {
    const doc = ctx.doc;
    const form = el(doc, "form", { id: "register-form" }, [
        el(doc, "h2", {}, ["Register"]),
        labeled(doc, "Member name", "memberName", textInput(doc, "memberName")),
        labeled(doc, "Password", "password", textInput(doc, "password", "password")),
        labeled(doc, "Date of birth", "memberDOB", textInput(doc, "memberDOB")),
        el(doc, "button", { type: "submit" }, ["Create account"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(form);
        const name = fieldValue(form, "memberName");
        const password = fieldValue(form, "password");
        const dob = fieldValue(form, "memberDOB");
        const problems = [
            ["memberName", validateMemberName(name)],
            ["password", validatePassword(password)],
            ["memberDOB", validateDob(dob)],
        ];
        let blocked = false;
        for (const [field, problem] of problems) {
            if (problem) {
                showFieldError(form, field, problem);
                blocked = true;
            }
        }
        if (blocked)
            return;
        void ctx.api
            .register(name.trim(), password, dob.trim())
            .then(() => ctx.navigate({ name: "signin" })) // register first, then sign in
            .catch((error) => ctx.handleFailure(error, form));
    });
    container.append(form);
}
export function renderSignin(ctx, container) {
    const doc = ctx.doc;
    const form = el(doc, "form", { id: "signin-form" }, [
        el(doc, "h2", {}, ["Sign In"]),
        labeled(doc, "Member name", "memberName", textInput(doc, "memberName")),
        labeled(doc, "Password", "password", textInput(doc, "password", "password")),
        el(doc, "button", { type: "submit" }, ["Sign in"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(form);
        void ctx.api
            .signin(fieldValue(form, "memberName").trim(), fieldValue(form, "password"))
            .then((reply) => {
            ctx.state.signIn(reply.memberName);
            ctx.navigate({ name: "messages" });
        })
            .catch((error) => ctx.handleFailure(error, form));
    });
    container.append(form);
}
// -- gated pages -------------------------------------------------------------
export async function renderMessages(ctx, container) {
    const doc = ctx.doc;
    container.append(el(doc, "h2", {}, ["Messages"]));
    const form = el(doc, "form", { id: "new-message-form" }, [
        labeled(doc, "Subject", "subject", textInput(doc, "subject")),
        labeled(doc, "Message", "description", el(doc, "textarea", { id: "description", name: "description" })),
        el(doc, "button", { type: "submit" }, ["Post message"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    const list = el(doc, "ol", { id: "headlines", class: "headlines" });
    container.append(form, list);
    const refresh = async () => {
        list.textContent = "";
        try {
            const headlines = await ctx.api.headlines(0, 50);
            if (headlines.length === 0) {
                list.append(el(doc, "li", { class: "empty" }, ["No messages yet."]));
            }
            for (const headline of headlines) {
                const link = el(doc, "a", { href: hashFor({ name: "message_detail", messageId: headline.message_id }) }, [
                    headline.subject,
                ]);
                link.addEventListener("click", (event) => {
                    event.preventDefault();
                    ctx.navigate({ name: "message_detail", messageId: headline.message_id });
                });
                list.append(el(doc, "li", { class: "headline", "data-message-id": String(headline.message_id) }, [
                    link,
                    el(doc, "span", { class: "meta" }, [
                        ` by ${headline.author} · ${headline.reply_count} replies`,
                    ]),
                ]));
            }
        }
        catch (error) {
            ctx.handleFailure(error);
            contentError(ctx, container, error);
        }
    };
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(form);
        const subject = fieldValue(form, "subject");
        const description = fieldValue(form, "description");
        const subjectProblem = validateSubject(subject);
        const descriptionProblem = validateDescription(description);
        if (subjectProblem)
            showFieldError(form, "subject", subjectProblem);
        if (descriptionProblem)
            showFieldError(form, "description", descriptionProblem);
        if (subjectProblem || descriptionProblem)
            return;
        void ctx.api
            .postMessage(subject.trim(), description.trim())
            .then(() => {
            form.reset();
            return refresh();
        })
            .catch((error) => ctx.handleFailure(error, form));
    });
    await refresh();
}
export async function renderMessageDetail(ctx, container, messageId) {
    const doc = ctx.doc;
    const back = el(doc, "a", { href: hashFor({ name: "messages" }), class: "back" }, [
        "Back to messages",
    ]);
    back.addEventListener("click", (event) => {
        event.preventDefault();
        ctx.navigate({ name: "messages" });
    });
    container.append(back);
    let detail;
    try {
        detail = await ctx.api.messageDetail(messageId);
    }
    catch (error) {
        ctx.handleFailure(error);
        contentError(ctx, container, error);
        return;
    }
    container.append(el(doc, "h2", { id: "detail-subject" }, [detail.message.subject]), el(doc, "p", { class: "meta" }, [
        `by ${detail.author_contact.name} (joined ${detail.author_contact.member_doj})`,
    ]), el(doc, "p", { id: "detail-body", class: "body" }, [detail.message.description]));
    const forwardButton = el(doc, "button", { id: "forward-button", type: "button" }, [
        "Forward this message",
    ]);
    forwardButton.addEventListener("click", () => {
        void ctx.api
            .forward(messageId)
            .then(() => ctx.navigate({ name: "messages" }))
            .catch((error) => ctx.handleFailure(error));
    });
    container.append(forwardButton);
    const replyList = el(doc, "ul", { id: "replies", class: "replies" });
    for (const entry of detail.replies) {
        replyList.append(el(doc, "li", { class: "reply" }, [
            el(doc, "span", { class: "meta" }, [`${entry.author_contact.name}: `]),
            entry.message.description,
        ]));
    }
    container.append(el(doc, "h3", {}, [`Replies (${detail.replies.length})`]), replyList);
    const form = el(doc, "form", { id: "reply-form" }, [
        labeled(doc, "Your reply", "description", el(doc, "textarea", { id: "description", name: "description" })),
        el(doc, "button", { type: "submit" }, ["Post reply"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(form);
        const description = fieldValue(form, "description");
        const problem = validateDescription(description);
        if (problem) {
            showFieldError(form, "description", problem);
            return;
        }
        void ctx.api
            .postReply(messageId, description.trim())
            .then(() => ctx.navigate({ name: "message_detail", messageId }))
            .catch((error) => ctx.handleFailure(error, form));
    });
    container.append(form);
}
export function renderChat(ctx, container) {
    const doc = ctx.doc;
    container.append(el(doc, "h2", {}, ["Open Discussion"]));
    const notice = el(doc, "p", { id: "chat-notice", class: "notice", hidden: "" });
    const online = el(doc, "ul", { id: "online-members", class: "online" });
    const log = el(doc, "ul", { id: "chat-log", class: "chat-log" });
    const form = el(doc, "form", { id: "chat-form" }, [
        labeled(doc, "Message", "body", textInput(doc, "body")),
        el(doc, "button", { type: "submit" }, ["Send"]),
        el(doc, "span", { class: "form-error" }),
    ]);
    container.append(notice, el(doc, "h3", {}, ["Online now"]), online, log, form);
    const refreshOnline = async () => {
        try {
            const names = await ctx.api.online();
            online.textContent = "";
            for (const name of names)
                online.append(el(doc, "li", {}, [name]));
        }
        catch {
            // non-fatal; the poller carries the session-loss path
        }
    };
    const poller = new ChatPoller(ctx.api, ctx.state, {
        onMessages: (messages) => {
            for (const message of messages) {
                log.append(el(doc, "li", { class: "chat-message", "data-cursor": String(message.cursor) }, [
                    el(doc, "span", { class: "sender" }, [`${message.sender}: `]),
                    message.body,
                ]));
            }
            void refreshOnline();
        },
        onTruncated: () => {
            notice.removeAttribute("hidden");
            notice.textContent = "You missed some older messages while away.";
        },
        onUnauthorized: () => {
            ctx.state.signOut();
            ctx.navigate({ name: "signin" });
        },
    }, ctx.pollIntervalMs);
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        clearErrors(form);
        const body = fieldValue(form, "body");
        const problem = validateChatBody(body);
        if (problem) {
            showFieldError(form, "body", problem);
            return;
        }
        void ctx.api
            .chatPost(body.trim())
            .then(() => {
            form.reset();
            return poller.tick(); // pick up our own message promptly
        })
            .catch((error) => ctx.handleFailure(error, form));
    });
    void refreshOnline();
    poller.start();
    return { poller };
}
