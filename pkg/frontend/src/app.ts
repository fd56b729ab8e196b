// ---------------------------------------------------------------------------
// Application shell
// ---------------------------------------------------------------------------
// Wires the key-file import, navigation, and the three views together.  The
// gateway base URL comes from ?gateway=... or defaults to same-origin.

import { Gateway } from "./api";
import { AssetDetailView } from "./assetDetail";
import { describeError, el } from "./dom";
import { InboxView } from "./inbox";
import { Session } from "./session";
import { TimelineView } from "./timeline";

export function mountApp(root: HTMLElement, baseUrl: string): void {
  const gateway = new Gateway(baseUrl);
  let session: Session | null = null;

  const keyPanel = el("section", "key-panel");
  keyPanel.append(el("h2", undefined, "Import key file"));
  const keyInput = el("input", "key-file") as HTMLInputElement;
  keyInput.type = "file";
  const keyStatus = el("p", "key-status", "Load the key file written by `accesschain id issue`.");
  keyPanel.append(keyInput, keyStatus);

  const nav = el("nav");
  const viewHost = el("div", "view-host");

  const assetForm = el("section", "asset-form");
  const assetInput = el("input", "asset-id-input") as HTMLInputElement;
  assetInput.placeholder = "asset id";
  const assetButton = el("button", "asset-load", "Open asset") as HTMLButtonElement;
  assetForm.append(assetInput, assetButton);

  root.replaceChildren(keyPanel, nav, assetForm, viewHost);

  function activate(session: Session): void {
    const whoami = document.getElementById("whoami");
    if (whoami !== null) {
      whoami.textContent = session.participantId + " (" + session.cardId + ")";
    }
    const inbox = new InboxView(gateway, session);
    const detail = new AssetDetailView(gateway, session);
    const timeline = new TimelineView(gateway);

    const inboxButton = el("button", "nav-inbox", "Inbox") as HTMLButtonElement;
    inboxButton.onclick = () => {
      viewHost.replaceChildren(inbox.root);
      void inbox.refresh();
    };
    const timelineButton = el("button", "nav-timeline", "Timeline") as HTMLButtonElement;
    timelineButton.onclick = () => {
      viewHost.replaceChildren(timeline.root);
      void timeline.refresh();
    };
    nav.replaceChildren(inboxButton, timelineButton);

    assetButton.onclick = () => {
      if (assetInput.value !== "") {
        viewHost.replaceChildren(detail.root);
        void detail.load(assetInput.value);
      }
    };

    viewHost.replaceChildren(inbox.root);
    void inbox.refresh();
  }

  keyInput.onchange = () => {
    const file = keyInput.files?.[0];
    if (file === undefined) {
      return;
    }
    file
      .text()
      .then((text) => {
        session = Session.fromJson(text);
        keyStatus.textContent = "Signed in as " + session.participantId;
        activate(session);
      })
      .catch((err) => {
        keyStatus.textContent = describeError(err);
      });
  };
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot !== null) {
  const params = new URLSearchParams(window.location.search);
  mountApp(appRoot, params.get("gateway") ?? window.location.origin);
}
