import { describe, expect, it } from "vitest";

import golden from "./fixtures/timeline_golden.json";
import { axisTicks, maxWindowLoad, pixelRangeToSpan, placeBoxes } from "../src/layout";
import { TimelineResponse, assertTimeline, isoToDays } from "../src/types";

const timeline = assertTimeline(golden) as TimelineResponse;

describe("placeBoxes", () => {
  it("renders every event exactly once, never re-ranked or dropped", () => {
    const boxes = placeBoxes(timeline);
    expect(boxes.length).toBe(timeline.events.length);
    const got = new Set(boxes.map((b) => `${b.event.re}|${b.event.timestamp}`));
    for (const e of timeline.events) {
      expect(got.has(`${e.re}|${e.timestamp}`)).toBe(true);
    }
  });

  it("anchors left edges linearly within [0, W - w]", () => {
    const boxes = placeBoxes(timeline);
    const start = isoToDays(timeline.span.start);
    const end = isoToDays(timeline.span.end);
    for (const box of boxes) {
      const frac = (box.days - start) / (end - start);
      expect(box.left).toBeCloseTo(frac * (timeline.spec.W - timeline.spec.w), 6);
      expect(box.left).toBeGreaterThanOrEqual(0);
      expect(box.left).toBeLessThanOrEqual(timeline.spec.W - timeline.spec.w);
    }
  });

  it("never stacks deeper than n on the golden timeline", () => {
    const boxes = placeBoxes(timeline);
    const deepest = Math.max(...boxes.map((b) => b.row + 1));
    expect(deepest).toBeLessThanOrEqual(timeline.spec.n);
    expect(maxWindowLoad(boxes, timeline.spec.t_w)).toBeLessThanOrEqual(timeline.spec.n);
  });

  it("puts temporally disjoint events on the same row", () => {
    const two = {
      ...timeline,
      span: { start: "2000-01-01", end: "2000-12-31" },
      spec: { ...timeline.spec, t_w: 30, n: 2 },
      events: [
        { ...timeline.events[0], timestamp: "2000-01-10" },
        { ...timeline.events[0], re: "/m/other", timestamp: "2000-06-10" },
      ],
    };
    const rows = placeBoxes(two).map((b) => b.row);
    expect(rows).toEqual([0, 0]);
  });

  it("stacks same-timestamp events vertically", () => {
    const two = {
      ...timeline,
      span: { start: "2000-01-01", end: "2000-12-31" },
      spec: { ...timeline.spec, t_w: 30, n: 2 },
      events: [
        { ...timeline.events[0], timestamp: "2000-06-10" },
        { ...timeline.events[0], re: "/m/other", timestamp: "2000-06-10" },
      ],
    };
    const rows = placeBoxes(two).map((b) => b.row).sort();
    expect(rows).toEqual([0, 1]);
  });
});

describe("axisTicks", () => {
  it("spans the range with year labels", () => {
    const ticks = axisTicks(timeline.span.start, timeline.span.end);
    expect(ticks[0].leftFraction).toBe(0);
    expect(ticks[ticks.length - 1].leftFraction).toBe(1);
    expect(ticks[0].label).toBe(timeline.span.start.slice(0, 4));
  });
});

describe("pixelRangeToSpan", () => {
  it("maps the full axis back to the full span", () => {
    const span = pixelRangeToSpan(0, 1000, 1000, "2000-01-01", "2010-01-01");
    expect(span).toEqual({ start: "2000-01-01", end: "2010-01-01" });
  });

  it("maps half the axis to half the span regardless of drag direction", () => {
    const forward = pixelRangeToSpan(0, 500, 1000, "2000-01-01", "2010-01-01");
    const backward = pixelRangeToSpan(500, 0, 1000, "2000-01-01", "2010-01-01");
    expect(forward).toEqual(backward);
    expect(forward.start).toBe("2000-01-01");
    expect(forward.end).toBe("2005-01-01");
  });
});
