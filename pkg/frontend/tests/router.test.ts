import { describe, expect, it } from "vitest";

import { ALL_PAGES, hashFor, isGated, parseHash, resolveRoute } from "../src/router.js";
import { ClientSessionState } from "../src/state.js";

const anonymous: ClientSessionState = { authenticated: false, memberName: null, lastChatCursor: 0 };
const signedIn: ClientSessionState = {
  authenticated: true,
  memberName: "alice_01",
  lastChatCursor: 0,
};

describe("parseHash", () => {
  it("maps the page hashes", () => {
    expect(parseHash("")).toEqual({ name: "main" });
    expect(parseHash("#/")).toEqual({ name: "main" });
    expect(parseHash("#/about")).toEqual({ name: "about" });
    expect(parseHash("#/messages")).toEqual({ name: "messages" });
    expect(parseHash("#/messages/7")).toEqual({ name: "message_detail", messageId: 7 });
    expect(parseHash("#/chat")).toEqual({ name: "chat" });
  });

  it("lands unknown hashes on main", () => {
    expect(parseHash("#/no-such-page")).toEqual({ name: "main" });
    expect(parseHash("#/messages/abc")).toEqual({ name: "main" });
  });

  it("round-trips every route through hashFor", () => {
    for (const name of ALL_PAGES) {
      const route = name === "message_detail" ? { name, messageId: 3 as const } : { name };
      expect(parseHash(hashFor(route))).toEqual(route);
    }
  });
});

describe("route gating", () => {
  it("gates exactly messages, message_detail and chat", () => {
    const gated = ALL_PAGES.filter((name) => isGated(name));
    expect(gated.sort()).toEqual(["chat", "message_detail", "messages"]);
  });

  it("redirects gated routes to signin while anonymous", () => {
    expect(resolveRoute({ name: "chat" }, anonymous)).toEqual({ name: "signin" });
    expect(resolveRoute({ name: "messages" }, anonymous)).toEqual({ name: "signin" });
    expect(resolveRoute({ name: "message_detail", messageId: 1 }, anonymous)).toEqual({
      name: "signin",
    });
  });

  it("keeps public routes for everyone", () => {
    for (const name of ["main", "introduction", "register", "signin", "contact", "about"] as const) {
      expect(resolveRoute({ name }, anonymous)).toEqual({ name });
      expect(resolveRoute({ name }, signedIn)).toEqual({ name });
    }
  });

  it("lets signed-in members reach gated routes", () => {
    expect(resolveRoute({ name: "chat" }, signedIn)).toEqual({ name: "chat" });
  });
});
