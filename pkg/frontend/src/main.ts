/**
 * Browser shell: routes hash changes to views, delegates events, and
 * keeps per-view state. All rendering goes through the pure functions
 * in views.ts.
 *
 * The API base URL defaults to the page origin; set
 * `window.KG_API_BASE` before loading this module to point the UI at a
 * service running elsewhere (the service sends permissive CORS
 * headers by default).
 */

import { ApiError, KgClient } from "./api.js";
import type { SchemaInfo } from "./api.js";
import { resolveChainSpec } from "./chain.js";
import type { ChainSpec } from "./chain.js";
import { fetchEntityDetail } from "./entity.js";
import { formatRoute, parseRoute } from "./routes.js";
import type { ViewRoute } from "./routes.js";
import { RequestSequencer } from "./sequencer.js";
import {
  renderEntity,
  renderLoadError,
  renderNotFound,
  renderQueryConsole,
  renderSchema,
  renderSearch,
  renderWizard,
} from "./views.js";
import type { QueryConsoleState, WizardViewError } from "./views.js";
import { backWizard, startWizard, stepWizard } from "./wizard.js";
import type { WizardState } from "./wizard.js";

declare global {
  interface Window {
    KG_API_BASE?: string;
  }
}

function errorMessage(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}

class App {
  private readonly client: KgClient;
  private readonly root: HTMLElement;
  private readonly sequencer = new RequestSequencer();
  private schema: SchemaInfo | null = null;
  private chainSpec: ChainSpec | null = null;
  private readonly labels = new Map<string, string>();

  private wizardState: WizardState | null = null;
  private wizardError: WizardViewError | null = null;
  private consoleState: QueryConsoleState = {
    queryText: "SELECT ?problem ?algorithm WHERE { ?problem mmo:solvedBy ?algorithm }",
    result: null,
    error: null,
    sortColumn: null,
    sortAscending: true,
  };
  private typeset = false;

  constructor(root: HTMLElement) {
    this.root = root;
    this.client = new KgClient(window.KG_API_BASE ?? "");
  }

  async boot(): Promise<void> {
    this.root.innerHTML = `<p class="loading">Loading…</p>`;
    try {
      this.schema = await this.client.schema();
      this.chainSpec = resolveChainSpec(this.schema);
      const listing = await this.client.entities({ limit: 500 });
      for (const item of listing.items) {
        if (item.label !== null) this.labels.set(item.iri, item.label);
      }
    } catch (error) {
      this.root.innerHTML = renderLoadError(errorMessage(error));
      return;
    }
    await this.dispatch();
  }

  private require<T>(value: T | null, what: string): T {
    if (value === null) throw new Error(`${what} is not loaded yet`);
    return value;
  }

  async dispatch(): Promise<void> {
    if (this.schema === null) {
      await this.boot();
      return;
    }
    const route = parseRoute(window.location.hash);
    const ticket = this.sequencer.next();
    try {
      const html = await this.renderRoute(route);
      if (this.sequencer.isCurrent(ticket)) {
        this.root.innerHTML = html;
      }
    } catch (error) {
      if (this.sequencer.isCurrent(ticket)) {
        this.root.innerHTML = renderLoadError(errorMessage(error));
      }
    }
  }

  private async renderRoute(route: ViewRoute): Promise<string> {
    const schema = this.require(this.schema, "schema");
    switch (route.view) {
      case "search": {
        if (route.query === undefined || route.query.trim() === "") {
          return renderSearch(route.query ?? "", null);
        }
        const response = await this.client.search(route.query);
        for (const hit of response.hits) this.labels.set(hit.iri, hit.label);
        return renderSearch(route.query, response);
      }
      case "entity": {
        const detail = await fetchEntityDetail(this.client, route.iri);
        if (detail === null) return renderNotFound(route.iri);
        if (detail.record.label !== null) this.labels.set(detail.record.iri, detail.record.label);
        return renderEntity(detail, schema, this.labels, this.typeset);
      }
      case "wizard": {
        const spec = this.require(this.chainSpec, "chain spec");
        if (this.wizardState === null) {
          this.wizardState = await startWizard(this.client, spec);
        }
        return renderWizard(this.wizardState, spec, this.labels, this.wizardError);
      }
      case "query":
        return renderQueryConsole(this.consoleState, schema.prefixes);
      case "schema":
        return renderSchema(schema);
    }
  }

  // -- event handling -------------------------------------------------------

  attach(): void {
    window.addEventListener("hashchange", () => {
      void this.dispatch();
    });
    this.root.addEventListener("click", (event) => {
      const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
      if (!target || !this.root.contains(target)) return;
      const action = target.dataset["action"];
      if (action === undefined || action.endsWith("-form")) return;
      event.preventDefault();
      void this.handleAction(action, target);
    });
    this.root.addEventListener("submit", (event) => {
      const form = event.target as HTMLFormElement;
      const action = form.dataset["action"];
      if (action === undefined) return;
      event.preventDefault();
      void this.handleSubmit(action, form);
    });
  }

  private async handleAction(action: string, element: HTMLElement): Promise<void> {
    switch (action) {
      case "wizard-choose":
      case "wizard-retry": {
        const iri = element.dataset["iri"];
        if (iri !== undefined) await this.chooseCandidate(iri);
        break;
      }
      case "wizard-back": {
        if (this.wizardState !== null && this.wizardState.history.length > 0) {
          this.wizardState = backWizard(this.wizardState);
          this.wizardError = null;
        }
        await this.dispatch();
        break;
      }
      case "wizard-restart":
      case "wizard-reload": {
        this.wizardState = null;
        this.wizardError = null;
        await this.dispatch();
        break;
      }
      case "toggle-typeset": {
        this.typeset = !this.typeset;
        await this.dispatch();
        break;
      }
      case "sort-column": {
        const column = Number(element.dataset["column"]);
        if (Number.isInteger(column)) {
          if (this.consoleState.sortColumn === column) {
            this.consoleState.sortAscending = !this.consoleState.sortAscending;
          } else {
            this.consoleState.sortColumn = column;
            this.consoleState.sortAscending = true;
          }
        }
        await this.dispatch();
        break;
      }
      case "reload-view": {
        await this.dispatch();
        break;
      }
      default:
        break;
    }
  }

  private async chooseCandidate(iri: string): Promise<void> {
    const spec = this.require(this.chainSpec, "chain spec");
    if (this.wizardState === null) return;
    try {
      this.wizardState = await stepWizard(
        this.client,
        spec,
        this.wizardState,
        iri,
        this.labels.get(iri),
      );
      this.wizardError = null;
    } catch (error) {
      // The old state is untouched; offer a retry with the same choice.
      this.wizardError = { message: errorMessage(error), choiceIri: iri };
    }
    await this.dispatch();
  }

  private async handleSubmit(action: string, form: HTMLFormElement): Promise<void> {
    if (action === "search-form") {
      const data = new FormData(form);
      const query = String(data.get("q") ?? "");
      window.location.hash = formatRoute({ view: "search", query });
      return;
    }
    if (action === "query-form") {
      const data = new FormData(form);
      this.consoleState.queryText = String(data.get("query") ?? "");
      try {
        this.consoleState.result = await this.client.query(this.consoleState.queryText);
        this.consoleState.error = null;
        this.consoleState.sortColumn = null;
        this.consoleState.sortAscending = true;
      } catch (error) {
        if (error instanceof ApiError) {
          this.consoleState.error = error;
          this.consoleState.result = null;
        } else {
          throw error;
        }
      }
      await this.dispatch();
    }
  }
}

const rootElement = document.getElementById("app");
if (rootElement === null) {
  throw new Error("page is missing the #app container");
}
const app = new App(rootElement);
app.attach();
void app.boot();
