import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { DEFAULT_FORM, FakeService, fillForm, flush, mountPage } from "./fixtures.js";

const DAYS = ["2019-04-01", "2019-04-02", "2019-04-03", "2019-04-04", "2019-04-05"];

function makeApp(service: FakeService): App {
  service.install();
  mountPage();
  const app = new App(document, new ApiClient(""));
  app.start();
  fillForm(DEFAULT_FORM);
  return app;
}

async function submitCase(app: App): Promise<void> {
  await app.loadCase();
  await flush();
}

function cellFor(day: string): HTMLElement {
  const el = document.querySelector<HTMLElement>(`[data-day="${day}"]`);
  if (!el) throw new Error(`no cell for ${day}`);
  return el;
}

describe("case loading", () => {
  let service: FakeService;

  beforeEach(() => {
    service = new FakeService({
      days: DAYS,
      feasible: ["2019-04-01", "2019-04-02", "2019-04-04"],
      admissions: { "2019-04-01": 2, "2019-04-02": 0, "2019-04-03": 6 },
    });
  });

  it("renders exactly the heatmap payload", async () => {
    const app = makeApp(service);
    await submitCase(app);
    const payload = service.heatmap();
    for (const cell of payload.cells) {
      const el = cellFor(cell.day);
      expect(el.querySelector(".admissions")!.textContent).toBe(String(cell.admissions));
      expect(el.classList.contains(`bucket-${cell.bucket}`)).toBe(true);
    }
    expect(document.querySelector("#version-tag")!.textContent).toBe(
      `ledger v${payload.version}`,
    );
  });

  it("submit button stays disabled until the form is valid", () => {
    service.install();
    mountPage();
    new App(document, new ApiClient("")).start();
    const submit = document.querySelector<HTMLButtonElement>("#load-btn")!;
    expect(submit.disabled).toBe(true);
    fillForm(DEFAULT_FORM);
    expect(submit.disabled).toBe(false);
    fillForm({ "window-end": "2019-03-01" }); // before the start
    expect(submit.disabled).toBe(true);
  });

  it("shows the top proposals exactly as ranked by the service", async () => {
    const app = makeApp(service);
    await submitCase(app);
    const expected = service.recommendation(3).ranked_days;
    const rendered = Array.from(
      document.querySelectorAll("#proposal-list button"),
      (el) => el.textContent,
    );
    expect(rendered).toEqual(expected);
  });

  it("only feasible days are selectable", async () => {
    const app = makeApp(service);
    await submitCase(app);
    expect(cellFor("2019-04-01").tagName).toBe("BUTTON");
    expect(cellFor("2019-04-03").tagName).toBe("DIV");
  });
});

describe("booking", () => {
  it("increments the booked cell after the refresh", async () => {
    const service = new FakeService({
      days: DAYS,
      feasible: ["2019-04-02", "2019-04-04"],
      admissions: { "2019-04-02": 1 },
    });
    const app = makeApp(service);
    await submitCase(app);
    expect(cellFor("2019-04-02").querySelector(".admissions")!.textContent).toBe("1");

    app.select("2019-04-02");
    await app.confirmBooking();
    await flush();

    expect(cellFor("2019-04-02").querySelector(".admissions")!.textContent).toBe("2");
    expect(document.querySelector("#version-tag")!.textContent).toBe("ledger v1");
    expect(document.querySelector("#banner")!.textContent).toContain("Booked P1 on 2019-04-02");
  });

  it("a lost race re-prompts with fresh recommendations", async () => {
    const service = new FakeService({
      days: DAYS,
      feasible: ["2019-04-01", "2019-04-04"],
      conflicts: { "2019-04-01": 1 },
    });
    const app = makeApp(service);
    await submitCase(app);
    const recommendCallsBefore = service.calls.filter((c) => c.path.endsWith("/recommend")).length;

    app.select("2019-04-01");
    await app.confirmBooking();
    await flush();

    const recommendCallsAfter = service.calls.filter((c) => c.path.endsWith("/recommend")).length;
    expect(recommendCallsAfter).toBe(recommendCallsBefore + 1);
    const banner = document.querySelector("#banner")!.textContent!;
    expect(banner).toContain("no longer available");
    expect(banner).toContain("2019-04-04");
    // The fresh ranking no longer offers the contested day.
    expect(app.state.proposals).toEqual(["2019-04-04"]);
    expect(app.state.selected).toBeNull();
  });

  it("books successfully after re-selecting from the fresh proposals", async () => {
    const service = new FakeService({
      days: DAYS,
      feasible: ["2019-04-01", "2019-04-04"],
      conflicts: { "2019-04-01": 1 },
    });
    const app = makeApp(service);
    await submitCase(app);
    app.select("2019-04-01");
    await app.confirmBooking();
    await flush();

    app.select(app.state.proposals[0]!);
    await app.confirmBooking();
    await flush();
    expect(cellFor("2019-04-04").querySelector(".admissions")!.textContent).toBe("1");
  });

  it("surfaces an infeasible case as an actionable banner", async () => {
    const service = new FakeService({ days: DAYS, feasible: [] });
    const app = makeApp(service);
    await submitCase(app);
    expect(document.querySelector("#banner")!.textContent).toContain("No feasible day");
    expect(document.querySelectorAll("#calendar .cell:not(.blank)")).toHaveLength(DAYS.length);
  });
});
