// ---------------------------------------------------------------------------
// Small DOM helpers shared by the views
// ---------------------------------------------------------------------------

export function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className !== undefined) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function errorBanner(): HTMLElement {
  const banner = el("div", "error-banner");
  banner.hidden = true;
  return banner;
}

export function showError(root: HTMLElement, text: string): void {
  const banner = root.querySelector(".error-banner") as HTMLElement | null;
  if (banner !== null) {
    banner.hidden = false;
    banner.textContent = text;
  }
}

export function describeError(err: unknown): string {
  if (err instanceof Error && "code" in err) {
    const code = (err as Error & { code: string }).code;
    return `${code}: ${err.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}
