// ---------------------------------------------------------------------------
// Asset detail
// ---------------------------------------------------------------------------
// Renders one asset.  Identity-controlled assets show the owner plus viewer
// and editor lists with revoke buttons; role-controlled assets show editable
// viewer/editor role lists saved wholesale via SetAssetRoles.  Every change
// is submitted through /api/tx and the view re-fetches on success; a denied
// action only raises the error banner.

import type { AssetBody, GatewayApi } from "./api";
import { describeError, el, errorBanner, showError } from "./dom";
import type { Session } from "./session";

function splitRoles(text: string): string[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part !== "");
}

export class AssetDetailView {
  readonly root: HTMLElement;
  private readonly gateway: GatewayApi;
  private readonly session: Session;
  private assetId: string | null = null;
  private pendingAction: Promise<void> = Promise.resolve();

  constructor(gateway: GatewayApi, session: Session, root?: HTMLElement) {
    this.gateway = gateway;
    this.session = session;
    this.root = root ?? document.createElement("section");
    this.root.classList.add("asset-detail");
  }

  settle(): Promise<void> {
    return this.pendingAction;
  }

  async load(assetId: string): Promise<void> {
    this.assetId = assetId;
    let asset: AssetBody | null;
    try {
      asset = await this.gateway.getAsset(assetId);
    } catch (err) {
      this.root.replaceChildren(errorBanner());
      showError(this.root, describeError(err));
      return;
    }
    if (asset === null) {
      this.root.replaceChildren(el("p", "not-found", `No asset with id ${assetId}.`));
      return;
    }
    this.render(asset);
  }

  private render(asset: AssetBody): void {
    this.root.replaceChildren();
    this.root.append(el("h2", "asset-id", asset.assetId));
    this.root.append(errorBanner());
    this.root.append(el("p", "dataset-ref", "dataset: " + asset.datasetRef));
    if (asset.ownerId !== undefined) {
      this.renderIdentity(asset);
    } else {
      this.renderRoles(asset);
    }
  }

  private renderIdentity(asset: AssetBody): void {
    this.root.append(el("p", "owner", "owner: " + asset.ownerId));
    this.root.append(this.aclList("viewers-list", "Viewers", asset.viewers ?? []));
    this.root.append(this.aclList("editors-list", "Editors", asset.editors ?? []));
  }

  private aclList(className: string, title: string, users: string[]): HTMLElement {
    const wrap = el("div", className);
    wrap.append(el("h3", undefined, title));
    if (users.length === 0) {
      wrap.append(el("p", "empty-state", "nobody"));
      return wrap;
    }
    const list = el("ul");
    for (const userId of users) {
      const row = el("li", "acl-row");
      row.append(el("span", "acl-user", userId));
      const revoke = el("button", "revoke-button", "Revoke") as HTMLButtonElement;
      revoke.onclick = () => {
        this.pendingAction = this.revoke(userId);
      };
      row.append(revoke);
      list.append(row);
    }
    wrap.append(list);
    return wrap;
  }

  private renderRoles(asset: AssetBody): void {
    this.root.append(el("p", "owner-org", "organization: " + (asset.ownerOrgId ?? "")));
    const form = el("div", "role-form");
    const viewerInput = el("input", "viewer-roles") as HTMLInputElement;
    viewerInput.value = (asset.viewerRoles ?? []).join(",");
    const editorInput = el("input", "editor-roles") as HTMLInputElement;
    editorInput.value = (asset.editorRoles ?? []).join(",");
    const save = el("button", "save-roles", "Save roles") as HTMLButtonElement;
    save.onclick = () => {
      this.pendingAction = this.saveRoles(viewerInput.value, editorInput.value);
    };
    form.append(
      el("label", undefined, "viewer roles"),
      viewerInput,
      el("label", undefined, "editor roles"),
      editorInput,
      save,
    );
    this.root.append(form);
  }

  private async revoke(userId: string): Promise<void> {
    if (this.assetId === null) {
      return;
    }
    try {
      const outcome = await this.gateway.submitTx(
        this.session.buildEnvelope("RevokeAccess", { assetId: this.assetId, users: [userId] }),
      );
      if (outcome.status !== "ACCEPTED") {
        showError(this.root, `${outcome.errorCode ?? "REJECTED"}: could not revoke ${userId}`);
        return;
      }
    } catch (err) {
      showError(this.root, describeError(err));
      return;
    }
    await this.load(this.assetId);
  }

  private async saveRoles(viewerText: string, editorText: string): Promise<void> {
    if (this.assetId === null) {
      return;
    }
    try {
      const outcome = await this.gateway.submitTx(
        this.session.buildEnvelope("SetAssetRoles", {
          assetId: this.assetId,
          viewerRoles: splitRoles(viewerText),
          editorRoles: splitRoles(editorText),
        }),
      );
      if (outcome.status !== "ACCEPTED") {
        showError(this.root, `${outcome.errorCode ?? "REJECTED"}: could not update roles`);
        return;
      }
    } catch (err) {
      showError(this.root, describeError(err));
      return;
    }
    await this.load(this.assetId);
  }
}
