/** Month-grid calendar rendering.
 *
 * Every number and color on a cell is a passthrough from the heatmap
 * payload; this module never recomputes counts, buckets, or feasibility.
 */

import type { DayCell, HeatmapResponse } from "./types.js";

// Text labels accompany the colors so color is never the only channel.
export const BUCKET_LABELS = ["quiet", "moderate", "busy", "full"] as const;

export interface MonthSection {
  /** e.g. "April 2019" */
  label: string;
  /** Blank pads so the first cell lands on its weekday column (Mon first). */
  leadingBlanks: number;
  cells: DayCell[];
}

const MONTHS = [
  "January", "February", "March", "April", "May", "June",
  "July", "August", "September", "October", "November", "December",
];

function isoWeekday(day: string): number {
  // 0 = Monday .. 6 = Sunday
  return (new Date(`${day}T00:00:00Z`).getUTCDay() + 6) % 7;
}

export function groupByMonth(cells: DayCell[]): MonthSection[] {
  const sections: MonthSection[] = [];
  let currentKey = "";
  for (const cell of cells) {
    const key = cell.day.slice(0, 7);
    if (key !== currentKey) {
      const [year, month] = cell.day.split("-");
      sections.push({
        label: `${MONTHS[Number(month) - 1]} ${year}`,
        leadingBlanks: isoWeekday(cell.day),
        cells: [],
      });
      currentKey = key;
    }
    sections[sections.length - 1]!.cells.push(cell);
  }
  return sections;
}

export function bucketLabel(bucket: number): string {
  return BUCKET_LABELS[Math.min(bucket, BUCKET_LABELS.length - 1)] ?? "unknown";
}

export interface CalendarHandlers {
  isSelectable(day: string): boolean;
  isSelected(day: string): boolean;
  onToggle(day: string): void;
}

export function renderCalendar(
  container: HTMLElement,
  payload: HeatmapResponse,
  handlers: CalendarHandlers,
): void {
  container.textContent = "";
  for (const section of groupByMonth(payload.cells)) {
    const monthEl = document.createElement("section");
    monthEl.className = "month";
    const title = document.createElement("h3");
    title.textContent = section.label;
    monthEl.appendChild(title);

    const grid = document.createElement("div");
    grid.className = "month-grid";
    for (const name of ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"]) {
      const head = document.createElement("div");
      head.className = "dow";
      head.textContent = name;
      grid.appendChild(head);
    }
    for (let i = 0; i < section.leadingBlanks; i++) {
      const blank = document.createElement("div");
      blank.className = "cell blank";
      grid.appendChild(blank);
    }
    for (const cell of section.cells) {
      grid.appendChild(renderCell(cell, handlers));
    }
    monthEl.appendChild(grid);
    container.appendChild(monthEl);
  }
}

function renderCell(cell: DayCell, handlers: CalendarHandlers): HTMLElement {
  const selectable = handlers.isSelectable(cell.day);
  const el = document.createElement(selectable ? "button" : "div");
  el.className = `cell bucket-${cell.bucket}`;
  el.dataset.day = cell.day;
  el.dataset.admissions = String(cell.admissions);
  if (selectable) {
    el.classList.add("feasible");
    (el as HTMLButtonElement).type = "button";
    el.addEventListener("click", () => handlers.onToggle(cell.day));
  } else {
    el.classList.add("infeasible");
    el.setAttribute("aria-disabled", "true");
  }
  if (handlers.isSelected(cell.day)) el.classList.add("selected");

  const dayNumber = document.createElement("span");
  dayNumber.className = "day-number";
  dayNumber.textContent = String(Number(cell.day.slice(8)));
  const admissions = document.createElement("span");
  admissions.className = "admissions";
  admissions.textContent = String(cell.admissions);
  const hours = document.createElement("span");
  hours.className = "hours";
  hours.textContent = `${cell.remaining_hours}h`;
  const label = document.createElement("span");
  label.className = "bucket-label";
  label.textContent = bucketLabel(cell.bucket);

  el.setAttribute(
    "aria-label",
    `${cell.day}: ${cell.admissions} admissions, ${cell.remaining_hours} surgeon hours, ${bucketLabel(cell.bucket)}`,
  );
  el.append(dayNumber, admissions, hours, label);
  return el;
}
