/** View state: current subject/span/variant plus a span history stack. */

import { TimelineSpan } from "./types";

export interface Geometry {
  width: number;
  height: number;
}

export interface ViewState {
  subject: string;
  span: TimelineSpan | null; // null = server default span
  variant: string;
  geometry: Geometry;
  loading: boolean;
  hovered: number | null;
}

export function initialState(subject: string, geometry: Geometry): ViewState {
  return {
    subject,
    span: null,
    variant: "Full",
    geometry,
    loading: false,
    hovered: null,
  };
}

/** Span history for the back control; pivoting to a new subject clears it. */
export class SpanHistory {
  private stack: (TimelineSpan | null)[] = [];

  push(span: TimelineSpan | null): void {
    this.stack.push(span ? { ...span } : null);
  }

  back(): TimelineSpan | null | undefined {
    return this.stack.pop();
  }

  get depth(): number {
    return this.stack.length;
  }

  clear(): void {
    this.stack = [];
  }
}

/** Measure the drawable geometry from the viewport (form-factor adaptive). */
export function measureGeometry(container: HTMLElement, boxHeight = 50, rows = 2): Geometry {
  const width = Math.max(400, container.clientWidth || 1000);
  return { width, height: boxHeight * rows };
}

export function subjectFromLocation(pathname: string): string | null {
  const match = pathname.match(/^\/t\/(.+)$/);
  return match ? decodeURIComponent(match[1]) : null;
}

export function locationForSubject(subject: string): string {
  return `/t/${encodeURIComponent(subject)}`;
}
