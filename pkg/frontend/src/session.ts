// ---------------------------------------------------------------------------
// Console session
// ---------------------------------------------------------------------------
// Wraps an imported key file and stamps out signed envelopes.  The clock and
// txId factory are injectable so tests can produce fixed envelopes.

import type { KeyFile, TxEnvelope } from "./signing";
import { parseKeyFile, signEnvelope } from "./signing";

export interface SessionOptions {
  clock?: () => number;
  txIdFactory?: () => string;
}

export class Session {
  readonly participantId: string;
  readonly cardId: string;
  readonly publicKey: string;
  private readonly secretKey: string;
  private readonly clock: () => number;
  private readonly nextTxId: () => string;

  constructor(key: KeyFile, options: SessionOptions = {}) {
    this.participantId = key.participantId;
    this.cardId = key.cardId;
    this.publicKey = key.publicKey;
    this.secretKey = key.secretKey;
    this.clock = options.clock ?? (() => Date.now());
    this.nextTxId = options.txIdFactory ?? (() => crypto.randomUUID());
  }

  static fromJson(text: string, options: SessionOptions = {}): Session {
    return new Session(parseKeyFile(text), options);
  }

  buildEnvelope(txType: string, payload: Record<string, unknown>): TxEnvelope {
    const body = {
      txId: this.nextTxId(),
      txType,
      payload,
      submitter: this.participantId,
      timestamp: this.clock(),
    };
    return { ...body, signature: signEnvelope(body, this.secretKey) };
  }
}
