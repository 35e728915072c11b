/** Case form: reading, validating, and gating the submit button. */

import type { CaseForm } from "./types.js";

export const FORM_FIELD_IDS = [
  "patient-id",
  "surgeon-id",
  "post-op-unit",
  "duration",
  "window-start",
  "window-end",
  "reference",
] as const;

function value(root: ParentNode, id: string): string {
  const el = root.querySelector<HTMLInputElement>(`#${id}`);
  return el ? el.value.trim() : "";
}

export function readForm(root: ParentNode): CaseForm | null {
  const duration = Number(value(root, "duration"));
  const start = value(root, "window-start");
  const end = value(root, "window-end");
  const form: CaseForm = {
    patient_id: value(root, "patient-id"),
    surgeon_id: value(root, "surgeon-id"),
    post_op_unit: value(root, "post-op-unit"),
    duration_hours: duration,
    clinical_window: { start, end },
    patient_window: { start, end },
    reference: value(root, "reference"),
  };
  if (!form.patient_id || !form.surgeon_id || !form.post_op_unit) return null;
  if (!Number.isFinite(duration) || duration <= 0) return null;
  if (!start || !end || start > end) return null;
  if (!form.reference) return null;
  return form;
}

export function wireValidation(root: ParentNode, submit: HTMLButtonElement): void {
  const refresh = () => {
    submit.disabled = readForm(root) === null;
  };
  for (const id of FORM_FIELD_IDS) {
    root.querySelector(`#${id}`)?.addEventListener("input", refresh);
  }
  refresh();
}
