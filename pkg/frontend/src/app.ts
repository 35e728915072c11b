/** Booking workflow: load the heatmap for a case, propose low-load days,
 * confirm one, book it, and refresh. Conflicts re-prompt with fresh
 * recommendations. All scheduling decisions come from the service. */

import { ApiClient, ApiError } from "./api.js";
import { renderCalendar } from "./calendar.js";
import { readForm, wireValidation } from "./form.js";
import type { CaseForm, HeatmapResponse, RecommendationResponse } from "./types.js";

const PROPOSAL_COUNT = 3;
// Ask the service to rank the whole window so the calendar knows which
// days are bookable; the proposal panel shows only the first few.
const FULL_RANKING = 365;

export interface AppState {
  form: CaseForm | null;
  heatmap: HeatmapResponse | null;
  feasible: Set<string>;
  proposals: string[];
  selected: string | null;
  bookingInFlight: boolean;
}

export class App {
  readonly state: AppState = {
    form: null,
    heatmap: null,
    feasible: new Set(),
    proposals: [],
    selected: null,
    bookingInFlight: false,
  };

  constructor(
    private readonly root: Document,
    private readonly api: ApiClient,
  ) {}

  start(): void {
    const form = this.root.querySelector<HTMLFormElement>("#case-form");
    const submit = this.root.querySelector<HTMLButtonElement>("#load-btn");
    if (!form || !submit) throw new Error("booking form missing from page");
    wireValidation(form, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.loadCase();
    });
    this.root
      .querySelector("#confirm-btn")
      ?.addEventListener("click", () => void this.confirmBooking());
    this.root
      .querySelector("#cancel-btn")
      ?.addEventListener("click", () => this.select(null));
  }

  async loadCase(): Promise<void> {
    const formEl = this.root.querySelector<HTMLFormElement>("#case-form");
    if (!formEl) return;
    const form = readForm(formEl);
    if (!form) return;
    this.state.form = form;
    this.state.selected = null;
    try {
      const [heatmap, ranking] = await Promise.all([
        this.api.heatmap({
          unit: form.post_op_unit,
          surgeon: form.surgeon_id,
          reference: form.reference,
        }),
        this.api.recommend(form, FULL_RANKING),
      ]);
      this.applyRanking(ranking);
      this.state.heatmap = heatmap;
      this.clearBanner();
    } catch (error) {
      if (error instanceof ApiError && error.code === "NO_FEASIBLE_DAY") {
        this.state.heatmap = await this.api.heatmap({
          unit: form.post_op_unit,
          surgeon: form.surgeon_id,
          reference: form.reference,
        });
        this.state.feasible = new Set();
        this.state.proposals = [];
        this.banner("No feasible day in this window; widen the window or pick another surgeon.");
      } else {
        this.banner(describe(error));
        return;
      }
    }
    this.render();
  }

  private applyRanking(ranking: RecommendationResponse): void {
    this.state.feasible = new Set(ranking.ranked_days);
    this.state.proposals = ranking.ranked_days.slice(0, PROPOSAL_COUNT);
  }

  select(day: string | null): void {
    this.state.selected = day;
    this.render();
  }

  async confirmBooking(): Promise<void> {
    const { form, selected } = this.state;
    if (!form || !selected || this.state.bookingInFlight) return;
    this.state.bookingInFlight = true;
    try {
      const receipt = await this.api.book(form, selected);
      this.banner(
        `Booked ${receipt.patient_id} on ${receipt.day} (booking #${receipt.sequence_number}).`,
        "ok",
      );
      this.state.selected = null;
      await this.refresh();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // Someone else took the slot; fetch fresh proposals and re-prompt.
        this.state.selected = null;
        const ranking = await this.api.recommend(form, FULL_RANKING);
        this.applyRanking(ranking);
        this.state.heatmap = await this.api.heatmap({
          unit: form.post_op_unit,
          surgeon: form.surgeon_id,
          reference: form.reference,
        });
        this.banner(
          `That day is no longer available (${error.code}). Fresh proposals: ${this.state.proposals.join(", ")}`,
        );
        this.render();
      } else {
        this.banner(describe(error));
      }
    } finally {
      this.state.bookingInFlight = false;
    }
  }

  private async refresh(): Promise<void> {
    const form = this.state.form;
    if (!form) return;
    this.state.heatmap = await this.api.heatmap({
      unit: form.post_op_unit,
      surgeon: form.surgeon_id,
      reference: form.reference,
    });
    try {
      this.applyRanking(await this.api.recommend(form, FULL_RANKING));
    } catch (error) {
      if (error instanceof ApiError && error.code === "NO_FEASIBLE_DAY") {
        this.state.feasible = new Set();
        this.state.proposals = [];
      } else {
        throw error;
      }
    }
    this.render();
  }

  render(): void {
    const calendar = this.root.querySelector<HTMLElement>("#calendar");
    const payload = this.state.heatmap;
    if (calendar && payload) {
      renderCalendar(calendar, payload, {
        isSelectable: (day) => this.state.feasible.has(day),
        isSelected: (day) => this.state.selected === day,
        onToggle: (day) => this.select(this.state.selected === day ? null : day),
      });
    }
    const version = this.root.querySelector("#version-tag");
    if (version && payload) version.textContent = `ledger v${payload.version}`;

    const proposals = this.root.querySelector<HTMLElement>("#proposals");
    const list = this.root.querySelector<HTMLElement>("#proposal-list");
    if (proposals && list) {
      proposals.hidden = this.state.proposals.length === 0;
      list.textContent = "";
      for (const day of this.state.proposals) {
        const item = document.createElement("li");
        const pick = document.createElement("button");
        pick.type = "button";
        pick.textContent = day;
        pick.addEventListener("click", () => this.select(day));
        item.appendChild(pick);
        list.appendChild(item);
      }
    }

    const confirmBar = this.root.querySelector<HTMLElement>("#confirm-bar");
    const confirmText = this.root.querySelector<HTMLElement>("#confirm-text");
    if (confirmBar) {
      confirmBar.hidden = this.state.selected === null;
      if (confirmText && this.state.selected && this.state.form) {
        confirmText.textContent =
          `Book ${this.state.form.patient_id} with ${this.state.form.surgeon_id} ` +
          `on ${this.state.selected}?`;
      }
    }
  }

  banner(message: string, kind: "error" | "ok" = "error"): void {
    const el = this.root.querySelector<HTMLElement>("#banner");
    if (!el) return;
    el.hidden = false;
    el.textContent = message;
    el.className = kind === "ok" ? "banner ok" : "banner error";
  }

  clearBanner(): void {
    const el = this.root.querySelector<HTMLElement>("#banner");
    if (el) {
      el.hidden = true;
      el.textContent = "";
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}

export function initApp(root: Document = document, api: ApiClient = new ApiClient()): App {
  const app = new App(root, api);
  app.start();
  return app;
}

// Auto-start in the browser; tests construct the App explicitly.
if (typeof document !== "undefined" && document.querySelector("#case-form")) {
  initApp();
}
