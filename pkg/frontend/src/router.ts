// Hash-based routing over the nine-page map. Message board and chat render
// only when authenticated; everything else is public.

import { ClientSessionState } from "./state.js";

export type PageRoute =
  | { name: "main" }
  | { name: "introduction" }
  | { name: "register" }
  | { name: "signin" }
  | { name: "contact" }
  | { name: "about" }
  | { name: "messages" }
  | { name: "message_detail"; messageId: number }
  | { name: "chat" };

export type PageName = PageRoute["name"];

export const ALL_PAGES: readonly PageName[] = [
  "main",
  "introduction",
  "register",
  "signin",
  "contact",
  "about",
  "messages",
  "message_detail",
  "chat",
];

const GATED: ReadonlySet<PageName> = new Set(["messages", "message_detail", "chat"]);

export function isGated(name: PageName): boolean {
  return GATED.has(name);
}

export function parseHash(hash: string): PageRoute {
  const path = hash.replace(/^#\/?/, "").replace(/\/$/, "");
  if (path === "") return { name: "main" };
  const detail = path.match(/^messages\/(\d+)$/);
  if (detail) return { name: "message_detail", messageId: Number(detail[1]) };
  switch (path) {
    case "introduction":
    case "register":
    case "signin":
    case "contact":
    case "about":
    case "messages":
    case "chat":
      return { name: path };
    default:
      return { name: "main" }; // unknown hashes land on the main page
  }
}

export function hashFor(route: PageRoute): string {
  if (route.name === "main") return "#/";
  if (route.name === "message_detail") return `#/messages/${route.messageId}`;
  return `#/${route.name}`;
}

// Gated routes redirect to signin while anonymous.
export function resolveRoute(route: PageRoute, state: ClientSessionState): PageRoute {
  if (isGated(route.name) && !state.authenticated) return { name: "signin" };
  return route;
}
