// ---------------------------------------------------------------------------
// Audit timeline
// ---------------------------------------------------------------------------
// Read-only view over the historian.  Records render in commit order, twenty
// per page, with an explicit badge separating accepted from rejected
// attempts (rejected attempts are first-class audit records, not errors).

import type { GatewayApi, HistorianFilter, HistorianRecord } from "./api";
import { describeError, el, errorBanner, showError } from "./dom";

export class TimelineView {
  static readonly PAGE_SIZE = 20;

  readonly root: HTMLElement;
  private readonly gateway: GatewayApi;
  private records: HistorianRecord[] = [];
  private page = 0;

  constructor(gateway: GatewayApi, root?: HTMLElement) {
    this.gateway = gateway;
    this.root = root ?? document.createElement("section");
    this.root.classList.add("timeline");
  }

  async refresh(filter: HistorianFilter = {}): Promise<void> {
    try {
      this.records = await this.gateway.historian(filter);
    } catch (err) {
      this.root.replaceChildren(errorBanner());
      showError(this.root, describeError(err));
      return;
    }
    this.page = 0;
    this.render();
  }

  pageCount(): number {
    return Math.max(1, Math.ceil(this.records.length / TimelineView.PAGE_SIZE));
  }

  nextPage(): void {
    if (this.page + 1 < this.pageCount()) {
      this.page += 1;
      this.render();
    }
  }

  prevPage(): void {
    if (this.page > 0) {
      this.page -= 1;
      this.render();
    }
  }

  private render(): void {
    this.root.replaceChildren();
    this.root.append(el("h2", undefined, "Ledger activity"));
    this.root.append(errorBanner());
    if (this.records.length === 0) {
      this.root.append(el("p", "empty-state", "No matching ledger activity."));
      return;
    }
    const start = this.page * TimelineView.PAGE_SIZE;
    const list = el("ul", "timeline-list");
    for (const record of this.records.slice(start, start + TimelineView.PAGE_SIZE)) {
      const row = el("li", "timeline-row");
      row.dataset.txId = record.txId;
      const badgeClass = record.status === "ACCEPTED" ? "badge accepted" : "badge rejected";
      row.append(el("span", badgeClass, record.status));
      row.append(el("span", "row-height", "#" + record.height + " "));
      row.append(el("span", "row-type", record.txType));
      row.append(el("span", "row-submitter", " by " + record.submitter));
      if (record.errorCode !== undefined) {
        row.append(el("span", "row-error", " (" + record.errorCode + ")"));
      }
      list.append(row);
    }
    this.root.append(list);

    const pager = el("div", "pager");
    const prev = el("button", "pager-prev", "Previous") as HTMLButtonElement;
    prev.disabled = this.page === 0;
    prev.onclick = () => this.prevPage();
    const next = el("button", "pager-next", "Next") as HTMLButtonElement;
    next.disabled = this.page + 1 >= this.pageCount();
    next.onclick = () => this.nextPage();
    const indicator = el(
      "span",
      "page-indicator",
      `page ${this.page + 1} of ${this.pageCount()}`,
    );
    pager.append(prev, indicator, next);
    this.root.append(pager);
  }
}
