// Client-side pre-validation mirroring the server's rules. The server stays
// authoritative; these only catch the obvious cases before a round trip.
const MEMBER_NAME_RE = /^[A-Za-z0-9_]{3,32}$/;
const ISO_DATE_RE = /^\d{4}-\d{2}-\d{2}$/;
export function validateMemberName(raw) {
    const name = raw.trim();
    if (!name)
        return "Member name is required";
    if (name.length < 3)
        return "Member name must be at least 3 characters";
    if (name.length > 32)
        return "Member name must be at most 32 characters";
    if (!MEMBER_NAME_RE.test(name)) {
        return "Member name may only contain letters, digits and underscore";
    }
    return null;
}
export function validatePassword(raw) {
    if (raw.length < 8 || !/[A-Za-z]/.test(raw) || !/[0-9]/.test(raw)) {
        return "Password needs 8+ characters with at least one letter and one digit";
    }
    return null;
}
export function validateDob(raw) {
    const text = raw.trim();
    if (!ISO_DATE_RE.test(text))
        return "Date of birth must look like 1990-01-31";
    const parsed = new Date(text + "T00:00:00Z");
    if (Number.isNaN(parsed.getTime()))
        return "Date of birth is not a real date";
    return null;
}
export function validateSubject(raw) {
    const subject = raw.trim();
    if (!subject)
        return "Subject is required";
    if (subject.length > 120)
        return "Subject must be at most 120 characters";
    return null;
}
export function validateDescription(raw) {
    const description = raw.trim();
    if (!description)
        return "Message text is required";
    if (description.length > 10000)
        return "Message text must be at most 10,000 characters";
    return null;
}
export function validateChatBody(raw) {
    const body = raw.trim();
    if (!body)
        return "Say something first";
    if (body.length > 500)
        return "Chat messages are capped at 500 characters";
    return null;
}
