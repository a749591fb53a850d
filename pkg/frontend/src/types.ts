/** Wire types for the timeline service, plus a runtime validator. */

export interface TimelineSpan {
  start: string;
  end: string;
}

export interface TimelineSpec {
  W: number;
  H: number;
  w: number;
  h: number;
  n: number;
  t_w: number;
}

export interface TimelineEvent {
  re: string;
  timestamp: string;
  path_to_re: string;
  path_to_ts: string;
  description: string;
  gain: number;
}

export interface TimelineResponse {
  subject: string;
  span: TimelineSpan;
  spec: TimelineSpec;
  objective: number;
  events: TimelineEvent[];
}

export interface EntityInfo {
  name: string;
  existence: { start: string | null; end: string | null } | null;
  candidate_count: number;
}

export class SchemaError extends Error {}

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

export function assertTimeline(body: unknown): TimelineResponse {
  const t = body as TimelineResponse;
  if (typeof t !== "object" || t === null) throw new SchemaError("body is not an object");
  if (typeof t.subject !== "string") throw new SchemaError("subject missing");
  if (!t.span || !ISO_DATE.test(t.span.start) || !ISO_DATE.test(t.span.end)) {
    throw new SchemaError("span malformed");
  }
  const spec = t.spec;
  if (
    !spec ||
    [spec.W, spec.H, spec.w, spec.h, spec.n, spec.t_w].some(
      (v) => typeof v !== "number" || Number.isNaN(v),
    )
  ) {
    throw new SchemaError("spec malformed");
  }
  if (!Array.isArray(t.events)) throw new SchemaError("events missing");
  for (const e of t.events) {
    if (typeof e.re !== "string" || !ISO_DATE.test(e.timestamp)) {
      throw new SchemaError("event malformed");
    }
    if (typeof e.description !== "string") throw new SchemaError("description missing");
  }
  return t;
}

const DAY_MS = 86_400_000;

export function isoToDays(iso: string): number {
  const [y, m, d] = iso.split("-").map(Number);
  return Date.UTC(y, m - 1, d) / DAY_MS;
}

export function daysToIso(days: number): string {
  return new Date(days * DAY_MS).toISOString().slice(0, 10);
}
