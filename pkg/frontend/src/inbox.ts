// ---------------------------------------------------------------------------
// Request inbox
// ---------------------------------------------------------------------------
// Lists PENDING access requests on assets the session owner holds.  Grant
// submits a GiveAccess referencing the requestId; Deny submits DenyRequest.
// The view never mutates its rows optimistically: it re-fetches after an
// accepted transaction and leaves the list untouched when one fails.

import type { AccessRequest, GatewayApi } from "./api";
import { describeError, el, errorBanner, showError } from "./dom";
import type { Session } from "./session";

export class InboxView {
  readonly root: HTMLElement;
  private readonly gateway: GatewayApi;
  private readonly session: Session;
  private pendingAction: Promise<void> = Promise.resolve();

  constructor(gateway: GatewayApi, session: Session, root?: HTMLElement) {
    this.gateway = gateway;
    this.session = session;
    this.root = root ?? document.createElement("section");
    this.root.classList.add("inbox");
  }

  // Resolves once the most recently clicked action has finished.
  settle(): Promise<void> {
    return this.pendingAction;
  }

  async refresh(): Promise<void> {
    let requests: AccessRequest[];
    try {
      requests = await this.gateway.listRequests({
        ownerId: this.session.participantId,
        status: "PENDING",
      });
    } catch (err) {
      this.root.replaceChildren(errorBanner());
      showError(this.root, describeError(err));
      return;
    }
    this.render(requests);
  }

  private render(requests: AccessRequest[]): void {
    this.root.replaceChildren();
    this.root.append(el("h2", undefined, "Pending access requests"));
    this.root.append(errorBanner());
    if (requests.length === 0) {
      this.root.append(el("p", "empty-state", "No pending access requests."));
      return;
    }
    const list = el("ul", "inbox-list");
    for (const req of requests) {
      const row = el("li", "inbox-row");
      row.dataset.requestId = req.requestId;
      row.append(el("span", "request-user", req.requesterId));
      row.append(el("span", "request-level", " asks " + req.level + " on "));
      row.append(el("span", "request-asset", req.assetId));
      const grant = el("button", "grant-button", "Grant") as HTMLButtonElement;
      grant.onclick = () => {
        this.pendingAction = this.resolve(req, true);
      };
      const deny = el("button", "deny-button", "Deny") as HTMLButtonElement;
      deny.onclick = () => {
        this.pendingAction = this.resolve(req, false);
      };
      row.append(grant, deny);
      list.append(row);
    }
    this.root.append(list);
  }

  private async resolve(req: AccessRequest, grant: boolean): Promise<void> {
    const verb = grant ? "grant" : "deny";
    try {
      const payload = grant
        ? {
            assetId: req.assetId,
            viewers: req.level === "VIEW" ? [req.requesterId] : [],
            editors: req.level === "EDIT" ? [req.requesterId] : [],
            requestId: req.requestId,
          }
        : { requestId: req.requestId };
      const txType = grant ? "GiveAccess" : "DenyRequest";
      const outcome = await this.gateway.submitTx(this.session.buildEnvelope(txType, payload));
      if (outcome.status !== "ACCEPTED") {
        showError(this.root, `${outcome.errorCode ?? "REJECTED"}: could not ${verb} request`);
        return;
      }
    } catch (err) {
      showError(this.root, describeError(err));
      return;
    }
    await this.refresh();
  }
}
