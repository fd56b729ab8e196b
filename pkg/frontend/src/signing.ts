// ---------------------------------------------------------------------------
// Key files and envelope signing
// ---------------------------------------------------------------------------
// A key file is the JSON blob the node's `id issue` command writes:
//   { cardId, participantId, publicKey, secretKey }
// where publicKey is the base64 raw Ed25519 public key (32 bytes) and
// secretKey is the base64 Ed25519 seed (32 bytes).  The signature covers the
// canonical JSON of the envelope minus its `signature` field.

import nacl from "tweetnacl";

import { canonicalBytes } from "./canonical";

export interface KeyFile {
  cardId: string;
  participantId: string;
  publicKey: string;
  secretKey: string;
}

export interface EnvelopeBody {
  txId: string;
  txType: string;
  payload: Record<string, unknown>;
  submitter: string;
  timestamp: number;
}

export interface TxEnvelope extends EnvelopeBody {
  signature: string;
}

export class KeyError extends Error {}

export function b64decode(text: string): Uint8Array {
  const raw = atob(text);
  const out = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    out[i] = raw.charCodeAt(i);
  }
  return out;
}

export function b64encode(data: Uint8Array): string {
  let raw = "";
  for (const byte of data) {
    raw += String.fromCharCode(byte);
  }
  return btoa(raw);
}

export function signingBytes(body: EnvelopeBody): Uint8Array {
  return canonicalBytes({
    txId: body.txId,
    txType: body.txType,
    payload: body.payload,
    submitter: body.submitter,
    timestamp: body.timestamp,
  });
}

export function signEnvelope(body: EnvelopeBody, secretKeyB64: string): string {
  const seed = b64decode(secretKeyB64);
  if (seed.length !== 32) {
    throw new KeyError(`secret key must be a 32 byte seed, got ${seed.length}`);
  }
  const pair = nacl.sign.keyPair.fromSeed(seed);
  const signature = nacl.sign.detached(signingBytes(body), pair.secretKey);
  return b64encode(signature);
}

export function derivePublicKey(secretKeyB64: string): string {
  const seed = b64decode(secretKeyB64);
  if (seed.length !== 32) {
    throw new KeyError(`secret key must be a 32 byte seed, got ${seed.length}`);
  }
  return b64encode(nacl.sign.keyPair.fromSeed(seed).publicKey);
}

export function generateKeyFile(cardId: string, participantId: string): KeyFile {
  const pair = nacl.sign.keyPair();
  return {
    cardId,
    participantId,
    publicKey: b64encode(pair.publicKey),
    secretKey: b64encode(pair.secretKey.slice(0, 32)),
  };
}

export function parseKeyFile(text: string): KeyFile {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new KeyError(`key file is not valid JSON: ${String(err)}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new KeyError("key file must be a JSON object");
  }
  const record = data as Record<string, unknown>;
  for (const field of ["cardId", "participantId", "publicKey", "secretKey"]) {
    if (typeof record[field] !== "string" || record[field] === "") {
      throw new KeyError(`key file is missing field: ${field}`);
    }
  }
  return {
    cardId: record.cardId as string,
    participantId: record.participantId as string,
    publicKey: record.publicKey as string,
    secretKey: record.secretKey as string,
  };
}
