// Hash-based routing over the nine-page map. Message board and chat render
// only when authenticated; everything else is public.
export const ALL_PAGES = [
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
const GATED = new Set(["messages", "message_detail", "chat"]);
export function isGated(name) {
    return GATED.has(name);
}
export function parseHash(hash) {
    const path = hash.replace(/^#\/?/, "").replace(/\/$/, "");
    if (path === "")
        return { name: "main" };
    const detail = path.match(/^messages\/(\d+)$/);
    if (detail)
        return { name: "message_detail", messageId: Number(detail[1]) };
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
export function hashFor(route) {
    if (route.name === "main")
        return "#/";
    if (route.name === "message_detail")
        return `#/messages/${route.messageId}`;
    return `#/${route.name}`;
}
// Gated routes redirect to signin while anonymous.
export function resolveRoute(route, state) {
    if (isGated(route.name) && !state.authenticated)
        return { name: "signin" };
    return route;
}
