// Page assembly: template picker, parameter dropdowns fed by the service
// catalogs (with substring filters), run button, layout toggle, an
// always-visible legend, the graph view, navigation deep-links, and the
// session log that ties every rendered answer to its response bytes.

import { ApiClient } from "./api.js";
import { buildViewModel } from "./collapse.js";
import { LAYOUTS, layoutPositions, type LayoutKind } from "./layout.js";
import { PLAUSIBLE_DASH, ROLE_COLORS, ROLE_DESCRIPTIONS } from "./palette.js";
import { renderErrorBanner, renderGraph, validateGraph } from "./render.js";
import { UiSession, errorBanner } from "./session.js";
import { TEMPLATES, fieldCatalog, type FieldKind } from "./templates.js";
import type { ApiListing, NavigationTarget, NodeListing, QueryType, Role } from "./types.js";

interface Catalogs {
  sources: NodeListing[];
  sinks: NodeListing[];
  apis: ApiListing[];
}

export interface AppHandle {
  session: UiSession;
  root: HTMLElement;
  submit(): Promise<void>;
  refresh(): void;
  lastNavigation: NavigationTarget | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function nodeOptionText(entry: NodeListing): string {
  return `${entry.id}: ${entry.label} — ${entry.file}:${entry.line}:${entry.column}`;
}

function apiOptionText(entry: ApiListing): string {
  return `${entry.id}: ${entry.signature}`;
}

function buildLegend(): HTMLElement {
  const legend = el("section", { class: "legend", id: "legend" });
  legend.appendChild(el("strong", {}, "legend:"));
  for (const role of Object.keys(ROLE_COLORS) as Role[]) {
    const item = el("span", { class: "legend-item", "data-role": role });
    const swatch = el("span", { class: "swatch" });
    swatch.style.backgroundColor = ROLE_COLORS[role];
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(ROLE_DESCRIPTIONS[role]));
    legend.appendChild(item);
  }
  const dashed = el("span", { class: "legend-item", "data-role": "plausible" });
  const sample = el("span", { class: "dash-sample" });
  sample.style.borderTop = "2px dashed #555";
  sample.setAttribute("data-dash", PLAUSIBLE_DASH);
  dashed.appendChild(sample);
  dashed.appendChild(
    document.createTextNode("dashed: plausible flow (absent under the current models)"),
  );
  legend.appendChild(dashed);
  legend.appendChild(
    el("span", { class: "legend-item" }, "gray box: collapsed chain (click to expand)"),
  );
  return legend;
}

export async function mountApp(root: HTMLElement, client: ApiClient): Promise<AppHandle> {
  const session = new UiSession(client);
  const catalogs: Catalogs = {
    sources: await client.sources(),
    sinks: await client.sinks(),
    apis: await client.apis(),
  };

  root.replaceChildren();
  const app = el("div", { class: "app" });
  root.appendChild(app);

  const header = el("header");
  header.appendChild(el("h1", {}, "taint-flow query console"));
  const healthLine = el("span", { id: "health-line" }, "connecting…");
  header.appendChild(healthLine);
  app.appendChild(header);
  client
    .health()
    .then((h) => {
      const c = h.factCounts;
      healthLine.textContent =
        `${c.nodes} nodes · ${c.edges} edges · ${c.sources} sources · ` +
        `${c.sinks} sinks · ${c.apis} APIs`;
    })
    .catch((err) => {
      healthLine.textContent = errorBanner(err).text;
    });

  app.appendChild(buildLegend());

  const pane = el("section", { class: "query-pane" });
  app.appendChild(pane);

  const templateLabel = el("label", {}, "template ");
  const templateSelect = el("select", { id: "template-select" });
  for (const spec of TEMPLATES) {
    const option = el("option", { value: spec.id }, spec.title);
    templateSelect.appendChild(option);
  }
  templateLabel.appendChild(templateSelect);
  pane.appendChild(templateLabel);

  const question = el("p", { id: "template-question" }, session.template.question);
  pane.appendChild(question);

  const fieldsBox = el("div", { id: "param-fields" });
  pane.appendChild(fieldsBox);

  const runButton = el("button", { id: "run-button", disabled: "" }, "Run query");
  pane.appendChild(runButton);

  const layoutLabel = el("label", {}, " layout ");
  const layoutSelect = el("select", { id: "layout-select" });
  for (const layout of LAYOUTS) {
    layoutSelect.appendChild(el("option", { value: layout }, layout));
  }
  layoutLabel.appendChild(layoutSelect);
  pane.appendChild(layoutLabel);

  const bannerBox = el("div", { id: "banner" });
  app.appendChild(bannerBox);
  const graphBox = el("section", { id: "graph" });
  app.appendChild(graphBox);

  const navPanel = el("section", { class: "nav-panel", id: "nav-panel" });
  app.appendChild(navPanel);

  const logPanel = el("section", { class: "log-panel" });
  logPanel.appendChild(el("h2", {}, "session log"));
  const logList = el("ol", { id: "session-log" });
  logPanel.appendChild(logList);
  app.appendChild(logPanel);

  const handle: AppHandle = {
    session,
    root,
    lastNavigation: null,
    submit: async () => {
      await session.submit();
      refresh();
    },
    refresh: () => refresh(),
  };

  function optionEntries(field: FieldKind): { value: number; text: string }[] {
    const catalog = fieldCatalog(field);
    if (catalog === "apis") {
      return catalogs.apis.map((a) => ({ value: a.id, text: apiOptionText(a) }));
    }
    const listing = catalog === "sources" ? catalogs.sources : catalogs.sinks;
    return listing.map((n) => ({ value: n.id, text: nodeOptionText(n) }));
  }

  function fillSelect(select: HTMLSelectElement, field: FieldKind, filter: string): void {
    const current = select.value;
    select.replaceChildren();
    select.appendChild(el("option", { value: "" }, "— choose —"));
    const needle = filter.toLowerCase();
    for (const entry of optionEntries(field)) {
      if (needle && !entry.text.toLowerCase().includes(needle)) {
        continue;
      }
      select.appendChild(el("option", { value: String(entry.value) }, entry.text));
    }
    select.value = current;
    if (select.value !== current) {
      select.value = "";
    }
  }

  function rebuildFields(): void {
    fieldsBox.replaceChildren();
    for (const field of session.template.fields) {
      const wrap = el("div", { class: "param-field", "data-field": field });
      wrap.appendChild(el("label", {}, field));
      const filter = el("input", {
        class: "filter",
        placeholder: "filter…",
        "data-filter-for": field,
      });
      const select = el("select", { "data-field-select": field });
      fillSelect(select, field, "");
      const chosen = session.selection.get(field);
      if (chosen !== undefined) {
        select.value = String(chosen);
      }
      filter.addEventListener("input", () => {
        fillSelect(select, field, filter.value);
        session.setParam(field, select.value ? Number(select.value) : null);
        syncRunButton();
      });
      select.addEventListener("change", () => {
        session.setParam(field, select.value ? Number(select.value) : null);
        syncRunButton();
      });
      wrap.appendChild(filter);
      wrap.appendChild(select);
      fieldsBox.appendChild(wrap);
    }
    syncRunButton();
  }

  function syncRunButton(): void {
    if (session.canSubmit) {
      runButton.removeAttribute("disabled");
    } else {
      runButton.setAttribute("disabled", "");
    }
  }

  function renderBanner(): void {
    bannerBox.replaceChildren();
    if (!session.banner) {
      return;
    }
    const banner = el("div", { class: `banner banner-${session.banner.kind}` });
    banner.appendChild(el("span", {}, session.banner.text));
    if (session.banner.hint) {
      banner.appendChild(el("em", { class: "hint" }, ` ${session.banner.hint}`));
    }
    bannerBox.appendChild(banner);
  }

  function renderNavigation(target: NavigationTarget): void {
    handle.lastNavigation = target;
    navPanel.replaceChildren();
    const link = `${target.file}:${target.line}:${target.column}`;
    navPanel.appendChild(el("strong", {}, target.label));
    navPanel.appendChild(el("code", { id: "nav-link" }, link));
    const editor = el(
      "a",
      { id: "nav-editor", href: `vscode://file/${target.file}:${target.line}:${target.column}` },
      "open in editor",
    );
    navPanel.appendChild(editor);
    const copy = el("button", { id: "nav-copy" }, "copy");
    copy.addEventListener("click", () => {
      void navigator.clipboard?.writeText(link);
    });
    navPanel.appendChild(copy);
    root.dispatchEvent(new CustomEvent("navigate-to-code", { detail: target }));
  }

  function renderLog(): void {
    logList.replaceChildren();
    for (const entry of session.log) {
      const item = el("li", {});
      item.appendChild(el("code", { class: "log-request" }, entry.request));
      item.appendChild(
        el("span", { class: "log-response" }, ` → ${entry.response.length} bytes`),
      );
      logList.appendChild(item);
    }
  }

  function refresh(): void {
    renderBanner();
    renderLog();
    if (!session.payload) {
      return;
    }
    const defect = validateGraph(session.payload.graph);
    if (defect) {
      renderErrorBanner(graphBox, defect);
      return;
    }
    const view = buildViewModel(session.payload.graph, session.collapsed);
    const positions = layoutPositions(session.layout, view.nodes, view.edges, 960, 600);
    renderGraph(graphBox, view, positions, {
      onNavigate: renderNavigation,
      onToggleChain: (chainId) => {
        session.toggleChain(chainId);
        refresh();
      },
    });
  }

  templateSelect.addEventListener("change", () => {
    session.selectTemplate(templateSelect.value as QueryType);
    question.textContent = session.template.question;
    rebuildFields();
    renderBanner();
  });

  runButton.addEventListener("click", () => {
    void handle.submit();
  });

  layoutSelect.addEventListener("change", () => {
    session.toggleLayout(layoutSelect.value as LayoutKind);
    refresh(); // view-only: no request leaves this handler
  });

  rebuildFields();
  return handle;
}
