// ---------------------------------------------------------------------------
// Gateway REST client
// ---------------------------------------------------------------------------
// All console reads and writes go through the gateway's HTTP API.  Writes are
// exclusively POST /api/tx with a signed envelope; everything else is a GET.

import type { TxEnvelope } from "./signing";

export type TxStatus = "ACCEPTED" | "REJECTED";

export interface TxOutcome {
  txId: string;
  height: number;
  status: TxStatus;
  errorCode?: string;
  events: Array<Record<string, unknown>>;
  result?: Record<string, unknown>;
}

export interface HistorianRecord {
  txId: string;
  txType: string;
  submitter: string;
  timestamp: number;
  status: TxStatus;
  errorCode?: string;
  affectedAssetIds: string[];
  height: number;
}

export type RequestStatus = "PENDING" | "GRANTED" | "DENIED" | "REVOKED";

export interface AccessRequest {
  requestId: string;
  assetId: string;
  requesterId: string;
  level: "VIEW" | "EDIT";
  status: RequestStatus;
  createdAtHeight: number;
}

export interface AssetBody {
  assetId: string;
  datasetRef: string;
  metadata: Record<string, unknown>;
  createdAtHeight: number;
  ownerId?: string;
  viewers?: string[];
  editors?: string[];
  ownerOrgId?: string;
  viewerRoles?: string[];
  editorRoles?: string[];
}

export interface ChainStatus {
  ok: boolean;
  height: number;
}

export interface HistorianFilter {
  assetId?: string;
  submitter?: string;
  txType?: string;
  fromHeight?: number;
  toHeight?: number;
}

export interface RequestFilter {
  ownerId?: string;
  assetId?: string;
  requesterId?: string;
  status?: RequestStatus;
}

export class GatewayError extends Error {
  readonly code: string;
  readonly httpStatus: number;

  constructor(code: string, message: string, httpStatus: number) {
    super(message);
    this.code = code;
    this.httpStatus = httpStatus;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

// The view layer depends on this interface so tests can substitute a fake.
export interface GatewayApi {
  submitTx(envelope: TxEnvelope): Promise<TxOutcome>;
  getAsset(assetId: string): Promise<AssetBody | null>;
  historian(filter?: HistorianFilter): Promise<HistorianRecord[]>;
  listRequests(filter?: RequestFilter): Promise<AccessRequest[]>;
  canView(assetId: string, userId: string): Promise<boolean>;
  verifyChain(): Promise<ChainStatus>;
}

export class Gateway implements GatewayApi {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async getJson(path: string, params?: Record<string, string>): Promise<unknown> {
    let url = this.baseUrl + path;
    if (params !== undefined) {
      const search = new URLSearchParams(params).toString();
      if (search !== "") {
        url += "?" + search;
      }
    }
    const resp = await this.fetchFn(url);
    const body: unknown = await resp.json();
    if (!resp.ok) {
      throw errorFrom(body, resp.status);
    }
    return body;
  }

  async submitTx(envelope: TxEnvelope): Promise<TxOutcome> {
    const resp = await this.fetchFn(this.baseUrl + "/api/tx", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(envelope),
    });
    const body: unknown = await resp.json();
    // Processor rejections come back as a recorded outcome with HTTP 409;
    // pre-chain rejections come back as {error, message} and are thrown.
    if (isErrorBody(body)) {
      throw errorFrom(body, resp.status);
    }
    return body as TxOutcome;
  }

  async getAsset(assetId: string): Promise<AssetBody | null> {
    try {
      const body = await this.getJson("/api/assets/" + encodeURIComponent(assetId));
      return body as AssetBody;
    } catch (err) {
      if (err instanceof GatewayError && err.httpStatus === 404) {
        return null;
      }
      throw err;
    }
  }

  async historian(filter: HistorianFilter = {}): Promise<HistorianRecord[]> {
    const params: Record<string, string> = {};
    if (filter.assetId !== undefined) params.assetId = filter.assetId;
    if (filter.submitter !== undefined) params.submitter = filter.submitter;
    if (filter.txType !== undefined) params.txType = filter.txType;
    if (filter.fromHeight !== undefined) params.fromHeight = String(filter.fromHeight);
    if (filter.toHeight !== undefined) params.toHeight = String(filter.toHeight);
    const body = await this.getJson("/api/historian", params);
    return body as HistorianRecord[];
  }

  async listRequests(filter: RequestFilter = {}): Promise<AccessRequest[]> {
    const params: Record<string, string> = {};
    if (filter.ownerId !== undefined) params.ownerId = filter.ownerId;
    if (filter.assetId !== undefined) params.assetId = filter.assetId;
    if (filter.requesterId !== undefined) params.requesterId = filter.requesterId;
    if (filter.status !== undefined) params.status = filter.status;
    const body = await this.getJson("/api/requests", params);
    return body as AccessRequest[];
  }

  async canView(assetId: string, userId: string): Promise<boolean> {
    const body = await this.getJson("/api/can-view", { assetId, userId });
    return (body as { canView: boolean }).canView;
  }

  async verifyChain(): Promise<ChainStatus> {
    const body = await this.getJson("/api/chain/verify");
    return body as ChainStatus;
  }
}

function isErrorBody(body: unknown): body is { error: string; message?: string } {
  return (
    typeof body === "object" &&
    body !== null &&
    typeof (body as Record<string, unknown>).error === "string"
  );
}

function errorFrom(body: unknown, httpStatus: number): GatewayError {
  if (isErrorBody(body)) {
    return new GatewayError(body.error, body.message ?? body.error, httpStatus);
  }
  return new GatewayError("HTTP_" + httpStatus, `gateway returned HTTP ${httpStatus}`, httpStatus);
}
