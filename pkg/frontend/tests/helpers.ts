import type {
  AccessRequest,
  AssetBody,
  ChainStatus,
  GatewayApi,
  HistorianFilter,
  HistorianRecord,
  RequestFilter,
  TxOutcome,
} from "../src/api";
import { Session } from "../src/session";
import type { TxEnvelope } from "../src/signing";
import { generateKeyFile } from "../src/signing";

export function testSession(participantId = "olivia"): Session {
  let counter = 0;
  return new Session(generateKeyFile("card-" + participantId, participantId), {
    clock: () => 1700000000000,
    txIdFactory: () => `tx-${participantId}-${(counter += 1)}`,
  });
}

// In-memory GatewayApi: tests assign the data fields and inspect the call
// log.  submitTx answers from `outcomes` (default ACCEPTED) or throws
// `submitError`.
export class FakeGateway implements GatewayApi {
  submitted: TxEnvelope[] = [];
  requests: AccessRequest[] = [];
  requestCalls: RequestFilter[] = [];
  historianCalls: HistorianFilter[] = [];
  assetCalls: string[] = [];
  asset: AssetBody | null = null;
  records: HistorianRecord[] = [];
  outcomes: TxOutcome[] = [];
  submitError: Error | null = null;

  async submitTx(envelope: TxEnvelope): Promise<TxOutcome> {
    this.submitted.push(envelope);
    if (this.submitError !== null) {
      throw this.submitError;
    }
    const queued = this.outcomes.shift();
    return queued ?? { txId: envelope.txId, height: 1, status: "ACCEPTED", events: [] };
  }

  async getAsset(assetId: string): Promise<AssetBody | null> {
    this.assetCalls.push(assetId);
    return this.asset;
  }

  async historian(filter: HistorianFilter = {}): Promise<HistorianRecord[]> {
    this.historianCalls.push(filter);
    return this.records;
  }

  async listRequests(filter: RequestFilter = {}): Promise<AccessRequest[]> {
    this.requestCalls.push(filter);
    return this.requests;
  }

  async canView(): Promise<boolean> {
    return false;
  }

  async verifyChain(): Promise<ChainStatus> {
    return { ok: true, height: 0 };
  }
}

export function pendingRequest(over: Partial<AccessRequest> = {}): AccessRequest {
  return {
    requestId: "req-1",
    assetId: "a1",
    requesterId: "rex",
    level: "VIEW",
    status: "PENDING",
    createdAtHeight: 3,
    ...over,
  };
}

export function identityAsset(over: Partial<AssetBody> = {}): AssetBody {
  return {
    assetId: "a1",
    datasetRef: "ds-001",
    metadata: {},
    createdAtHeight: 1,
    ownerId: "olivia",
    viewers: ["rex"],
    editors: [],
    ...over,
  };
}

export function roleAsset(over: Partial<AssetBody> = {}): AssetBody {
  return {
    assetId: "org-a1",
    datasetRef: "ds-900",
    metadata: {},
    createdAtHeight: 2,
    ownerOrgId: "acme",
    viewerRoles: ["reader"],
    editorRoles: ["writer"],
    ...over,
  };
}

export function historianRecord(over: Partial<HistorianRecord> = {}): HistorianRecord {
  return {
    txId: "tx-" + Math.random().toString(16).slice(2),
    txType: "ViewAsset",
    submitter: "rex",
    timestamp: 1700000000000,
    status: "ACCEPTED",
    affectedAssetIds: ["a1"],
    height: 2,
    ...over,
  };
}

export function rejectedOutcome(errorCode: string): TxOutcome {
  return { txId: "tx-rejected", height: 9, status: "REJECTED", errorCode, events: [] };
}

export function click(root: HTMLElement, selector: string): void {
  const target = root.querySelector(selector) as HTMLElement | null;
  if (target === null) {
    throw new Error(`no element matches ${selector}`);
  }
  target.click();
}

export function texts(root: HTMLElement, selector: string): string[] {
  return Array.from(root.querySelectorAll(selector), (node) => node.textContent ?? "");
}
