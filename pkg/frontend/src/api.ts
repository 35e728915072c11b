/** Thin typed client for the scheduling service; all numbers shown in the
 * UI originate from these responses. */

import type {
  ApiErrorBody,
  BookingReceipt,
  CasePayload,
  HeatmapResponse,
  RecommendationResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody = { code: "UNKNOWN", message: response.statusText };
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const query = new URLSearchParams(params).toString();
    const response = await fetch(`${this.baseUrl}${path}?${query}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  heatmap(params: {
    unit: string;
    surgeon: string;
    start?: string;
    end?: string;
    reference?: string;
  }): Promise<HeatmapResponse> {
    const query: Record<string, string> = { unit: params.unit, surgeon: params.surgeon };
    if (params.start) query.start = params.start;
    if (params.end) query.end = params.end;
    if (params.reference) query.reference = params.reference;
    return this.get<HeatmapResponse>("/heatmap", query);
  }

  recommend(payload: CasePayload, n: number): Promise<RecommendationResponse> {
    return this.post<RecommendationResponse>("/recommend", { ...payload, n });
  }

  book(payload: CasePayload, day: string): Promise<BookingReceipt> {
    return this.post<BookingReceipt>("/book", { ...payload, day });
  }
}
