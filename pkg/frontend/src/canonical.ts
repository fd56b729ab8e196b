// ---------------------------------------------------------------------------
// Canonical JSON encoding
// ---------------------------------------------------------------------------
// Must produce byte-identical output to the node's canonical encoder so that
// signatures computed here verify server side.  Rules: UTF-8, object keys
// sorted by Unicode code point, no whitespace, integers only, non-ASCII
// characters emitted literally (not \u-escaped).
//
// Note the sort order: JavaScript's default string comparison orders by
// UTF-16 code unit, which disagrees with code-point order for characters
// outside the Basic Multilingual Plane.  The comparator below works on code
// points so that e.g. "ﬀ" sorts before "\u{1F600}".

export class CanonicalError extends Error {}

const SHORT_ESCAPES: Record<string, string> = {
  '"': '\\"',
  "\\": "\\\\",
  "\b": "\\b",
  "\f": "\\f",
  "\n": "\\n",
  "\r": "\\r",
  "\t": "\\t",
};

function encodeString(s: string): string {
  let out = '"';
  for (const ch of s) {
    const short = SHORT_ESCAPES[ch];
    if (short !== undefined) {
      out += short;
      continue;
    }
    const cp = ch.codePointAt(0) as number;
    if (cp < 0x20) {
      out += "\\u" + cp.toString(16).padStart(4, "0");
    } else {
      out += ch;
    }
  }
  return out + '"';
}

function compareCodePoints(a: string, b: string): number {
  const pa = Array.from(a, (c) => c.codePointAt(0) as number);
  const pb = Array.from(b, (c) => c.codePointAt(0) as number);
  const n = Math.min(pa.length, pb.length);
  for (let i = 0; i < n; i++) {
    const da = pa[i] as number;
    const db = pb[i] as number;
    if (da !== db) {
      return da - db;
    }
  }
  return pa.length - pb.length;
}

function encode(value: unknown): string {
  if (value === null) {
    return "null";
  }
  if (value === true) {
    return "true";
  }
  if (value === false) {
    return "false";
  }
  if (typeof value === "number") {
    if (!Number.isInteger(value)) {
      throw new CanonicalError(`non-integer number is not canonical: ${value}`);
    }
    if (!Number.isSafeInteger(value)) {
      throw new CanonicalError(`integer exceeds safe range: ${value}`);
    }
    return Object.is(value, -0) ? "0" : String(value);
  }
  if (typeof value === "bigint") {
    return value.toString();
  }
  if (typeof value === "string") {
    return encodeString(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(encode).join(",") + "]";
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>);
    entries.sort((x, y) => compareCodePoints(x[0], y[0]));
    const parts = entries.map(([k, v]) => encodeString(k) + ":" + encode(v));
    return "{" + parts.join(",") + "}";
  }
  throw new CanonicalError(`value is not canonical JSON: ${typeof value}`);
}

export function canonicalStringify(value: unknown): string {
  return encode(value);
}

export function canonicalBytes(value: unknown): Uint8Array {
  return new TextEncoder().encode(encode(value));
}
