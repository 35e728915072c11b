/** Stateful fake of the scheduling service behind a fetch stub.
 *
 * The fake serves canned-but-consistent payloads: cells carry admission
 * counts, booking bumps a count, and the bucket is recomputed exactly the
 * way the service documents it (number of thresholds at or below the
 * count). Tests then assert the DOM equals whatever the fake returned.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { DayCell, HeatmapResponse, RecommendationResponse } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function mountPage(): void {
  const html = readFileSync(join(HERE, "..", "index.html"), "utf-8");
  const body = html
    .slice(html.indexOf("<body>") + 6, html.indexOf("</body>"))
    .replace(/<script[\s\S]*?<\/script>/g, "");
  document.body.innerHTML = body;
}

export function fillForm(values: Record<string, string>): void {
  for (const [id, value] of Object.entries(values)) {
    const input = document.querySelector<HTMLInputElement>(`#${id}`);
    if (!input) throw new Error(`missing input #${id}`);
    input.value = value;
    input.dispatchEvent(new Event("input", { bubbles: true }));
  }
}

export const DEFAULT_FORM = {
  "patient-id": "P1",
  "surgeon-id": "S1",
  "post-op-unit": "PICUs",
  duration: "2.5",
  "window-start": "2019-04-01",
  "window-end": "2019-04-05",
  reference: "2019-04-03",
};

const THRESHOLDS = [2, 4, 6];

function bucketOf(count: number): number {
  return THRESHOLDS.filter((t) => t <= count).length;
}

export interface FakeServiceOptions {
  days: string[];
  feasible: string[];
  admissions?: Record<string, number>;
  /** Day -> how many times a booking attempt should 409 before working. */
  conflicts?: Record<string, number>;
}

export class FakeService {
  version = 0;
  admissions: Map<string, number>;
  feasible: string[];
  readonly calls: { method: string; path: string; body?: unknown }[] = [];
  private readonly conflicts: Map<string, number>;

  constructor(private readonly options: FakeServiceOptions) {
    this.admissions = new Map(
      options.days.map((d) => [d, options.admissions?.[d] ?? 0]),
    );
    this.feasible = [...options.feasible];
    this.conflicts = new Map(Object.entries(options.conflicts ?? {}));
  }

  private cells(): DayCell[] {
    return this.options.days.map((day) => {
      const admissions = this.admissions.get(day) ?? 0;
      return {
        day,
        admissions,
        remaining_hours: this.feasible.includes(day) ? 7.0 : 0.0,
        bucket: bucketOf(admissions),
      };
    });
  }

  heatmap(): HeatmapResponse {
    const days = this.options.days;
    return {
      unit: "PICUs",
      surgeon: "S1",
      start: days[0]!,
      end: days[days.length - 1]!,
      thresholds: THRESHOLDS,
      version: this.version,
      cells: this.cells(),
    };
  }

  recommendation(n: number): RecommendationResponse {
    const ranked = [...this.feasible].sort(
      (a, b) => (this.admissions.get(a) ?? 0) - (this.admissions.get(b) ?? 0) || a.localeCompare(b),
    );
    const top = ranked.slice(0, n);
    const byDay = new Map(this.cells().map((c) => [c.day, c]));
    return {
      ranked_days: top,
      annotations: top.map((d) => byDay.get(d)!),
      policy: "fewest-admissions",
      version: this.version,
    };
  }

  /** Install as the global fetch. */
  install(): void {
    const service = this;
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const path = url.split("?")[0]!;
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      service.calls.push({ method: init?.method ?? "GET", path, body });
      if (path.endsWith("/heatmap")) return jsonResponse(200, service.heatmap());
      if (path.endsWith("/recommend")) {
        const rec = service.recommendation(body.n ?? 3);
        if (rec.ranked_days.length === 0) {
          return jsonResponse(409, { code: "NO_FEASIBLE_DAY", message: "none" });
        }
        return jsonResponse(200, rec);
      }
      if (path.endsWith("/book")) {
        const day = body.day as string;
        const pending = service.conflicts.get(day) ?? 0;
        if (pending > 0) {
          service.conflicts.set(day, pending - 1);
          service.feasible = service.feasible.filter((d) => d !== day);
          return jsonResponse(409, {
            code: "DAY_NOT_FEASIBLE",
            message: `day ${day} is not feasible`,
          });
        }
        if (!service.feasible.includes(day)) {
          return jsonResponse(409, { code: "DAY_NOT_FEASIBLE", message: "stale" });
        }
        service.version += 1;
        service.admissions.set(day, (service.admissions.get(day) ?? 0) + 1);
        return jsonResponse(200, {
          patient_id: body.patient_id,
          surgeon_id: body.surgeon_id,
          unit_id: body.post_op_unit,
          day,
          duration_hours: body.duration_hours,
          sequence_number: service.version,
          booked_at: "2019-04-01T08:00:00",
        });
      }
      return jsonResponse(404, { code: "UNKNOWN", message: `no route ${path}` });
    }) as typeof fetch;
  }
}

function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
