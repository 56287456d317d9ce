// Thin typed client over the JSON API. Non-2xx responses become ApiFailure
// carrying the server's error envelope; response bodies are schema-checked.
import { asChatMessage, asChatPoll, asErrorEnvelope, asHeadlines, asInfoPage, asMessage, asMessageDetail, asOnlineList, asPublicMember, asSigninReply, } from "./schemas.js";
export class ApiFailure extends Error {
    constructor(status, code, message, field) {
        super(message);
        this.status = status;
        this.code = code;
        this.field = field;
        this.name = "ApiFailure";
    }
}
const defaultFetch = (path, init) => fetch(path, init);
export class ApiClient {
    constructor(fetchImpl = defaultFetch) {
        this.fetchImpl = fetchImpl;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "content-type": "application/json" };
        }
        const response = await this.fetchImpl(path, init);
        if (response.status === 204)
            return undefined;
        if (!response.ok) {
            let envelope;
            try {
                envelope = asErrorEnvelope(await response.json());
            }
            catch {
                throw new ApiFailure(response.status, "internal", `request failed (${response.status})`);
            }
            throw new ApiFailure(response.status, envelope.code, envelope.message, envelope.field);
        }
        return response.json();
    }
    async register(memberName, password, memberDOB) {
        return asPublicMember(await this.request("POST", "/api/register", { memberName, password, memberDOB }));
    }
    async signin(memberName, password) {
        return asSigninReply(await this.request("POST", "/api/signin", { memberName, password }));
    }
    async signout() {
        await this.request("POST", "/api/signout");
    }
    async profile() {
        return asPublicMember(await this.request("GET", "/api/profile"));
    }
    async changePassword(oldPassword, newPassword) {
        await this.request("PUT", "/api/profile/password", { old: oldPassword, new: newPassword });
    }
    async unsubscribe() {
        await this.request("DELETE", "/api/profile");
    }
    async headlines(offset = 0, limit = 20) {
        return asHeadlines(await this.request("GET", `/api/messages?offset=${offset}&limit=${limit}`));
    }
    async postMessage(subject, description) {
        return asMessage(await this.request("POST", "/api/messages", { subject, description }));
    }
    async messageDetail(messageId) {
        return asMessageDetail(await this.request("GET", `/api/messages/${messageId}`));
    }
    async postReply(messageId, description) {
        return asMessage(await this.request("POST", `/api/messages/${messageId}/replies`, { description }));
    }
    async forward(messageId) {
        return asMessage(await this.request("POST", `/api/messages/${messageId}/forward`));
    }
    async chatPoll(after) {
        return asChatPoll(await this.request("GET", `/api/chat?after=${after}`));
    }
    async chatPost(body) {
        return asChatMessage(await this.request("POST", "/api/chat", { body }));
    }
    async online() {
        return asOnlineList(await this.request("GET", "/api/chat/online"));
    }
    async info(page) {
        return asInfoPage(await this.request("GET", `/api/info/${page}`));
    }
}
