/** Pure placement math: box positions, stacking rows, axis ticks.
 *
 * Boxes anchor their left edge at the event timestamp, mapped linearly into
 * [0, W - w]. Rows are assigned first-fit over *time* overlap (two events
 * overlap when their timestamps are less than t_w apart), which is exactly
 * the server's packing constraint, so the stack depth can never exceed n.
 */

import { TimelineEvent, TimelineResponse, daysToIso, isoToDays } from "./types";

export interface PlacedBox {
  event: TimelineEvent;
  days: number;
  left: number; // px within [0, W - w]
  row: number; // 0-based stack position
}

export function placeBoxes(timeline: TimelineResponse): PlacedBox[] {
  const { span, spec } = timeline;
  const startDays = isoToDays(span.start);
  const endDays = isoToDays(span.end);
  const spanDays = Math.max(1, endDays - startDays);
  const usable = spec.W - spec.w;

  const ordered = [...timeline.events].sort(
    (a, b) => isoToDays(a.timestamp) - isoToDays(b.timestamp) || a.re.localeCompare(b.re),
  );
  const placed: PlacedBox[] = [];
  // rowLastDays[r] = timestamp of the latest box already in row r.
  const rowLastDays: number[] = [];
  for (const event of ordered) {
    const days = isoToDays(event.timestamp);
    const left = ((days - startDays) / spanDays) * usable;
    let row = rowLastDays.findIndex((last) => days - last >= spec.t_w);
    if (row === -1) {
      row = rowLastDays.length;
      rowLastDays.push(days);
    } else {
      rowLastDays[row] = days;
    }
    placed.push({ event, days, left, row });
  }
  return placed;
}

/** Largest number of boxes any t_w-long half-open window holds. */
export function maxWindowLoad(boxes: PlacedBox[], tw: number): number {
  const days = boxes.map((b) => b.days).sort((a, b) => a - b);
  let worst = 0;
  for (let i = 0; i < days.length; i++) {
    let count = 0;
    for (const d of days) {
      if (d >= days[i] && d < days[i] + tw) count++;
    }
    worst = Math.max(worst, count);
  }
  return worst;
}

export interface AxisTick {
  leftFraction: number; // 0..1 along the drawable width
  label: string;
}

export function axisTicks(startIso: string, endIso: string, count = 6): AxisTick[] {
  const start = isoToDays(startIso);
  const end = isoToDays(endIso);
  const span = Math.max(1, end - start);
  const ticks: AxisTick[] = [];
  for (let i = 0; i <= count; i++) {
    const days = start + (span * i) / count;
    const year = new Date(days * 86_400_000).getUTCFullYear();
    ticks.push({ leftFraction: i / count, label: String(year) });
  }
  return ticks;
}

/** Convert a pixel range on the axis back into an ISO date span. */
export function pixelRangeToSpan(
  x0: number,
  x1: number,
  axisWidth: number,
  startIso: string,
  endIso: string,
): { start: string; end: string } {
  const lo = Math.min(x0, x1);
  const hi = Math.max(x0, x1);
  const start = isoToDays(startIso);
  const end = isoToDays(endIso);
  const span = end - start;
  const fromDays = Math.round(start + (lo / axisWidth) * span);
  const toDays = Math.round(start + (hi / axisWidth) * span);
  return { start: daysToIso(fromDays), end: daysToIso(Math.max(toDays, fromDays + 1)) };
}
