/** Wire types mirroring the service's JSON payloads. */

export interface DayCell {
  day: string; // ISO date
  admissions: number;
  remaining_hours: number;
  bucket: number;
}

export interface HeatmapResponse {
  unit: string;
  surgeon: string;
  start: string;
  end: string;
  thresholds: number[];
  version: number;
  cells: DayCell[];
}

export interface RecommendationResponse {
  ranked_days: string[];
  annotations: DayCell[];
  policy: string;
  version: number;
}

export interface BookingReceipt {
  patient_id: string;
  surgeon_id: string;
  unit_id: string;
  day: string;
  duration_hours: number;
  sequence_number: number;
  booked_at: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

export interface WindowPayload {
  start: string;
  end: string;
}

export interface CasePayload {
  patient_id: string;
  surgeon_id: string;
  duration_hours: number;
  clinical_window: WindowPayload;
  patient_window: WindowPayload;
  post_op_unit: string;
}

export interface CaseForm extends CasePayload {
  reference: string;
}
