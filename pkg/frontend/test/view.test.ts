import { beforeEach, describe, expect, it } from "vitest";

import golden from "./fixtures/timeline_golden.json";
import { TimelineResponse, assertTimeline } from "../src/types";
import { StackLimitError, labelFor, renderTimeline, showError } from "../src/view";

const timeline = assertTimeline(golden) as TimelineResponse;

function root(): HTMLElement {
  document.body.innerHTML = '<div id="timeline-root"></div>';
  return document.getElementById("timeline-root")!;
}

beforeEach(() => {
  document.body.innerHTML = "";
  document.querySelectorAll(".timeline-tooltip").forEach((el) => el.remove());
});

describe("renderTimeline", () => {
  it("renders one box per event with ids and timestamps attached", () => {
    const container = root();
    renderTimeline(container, timeline);
    const boxes = [...container.querySelectorAll<HTMLElement>(".event-box")];
    expect(boxes.length).toBe(timeline.events.length);
    const rendered = boxes.map((b) => `${b.dataset.re}|${b.dataset.timestamp}`).sort();
    const expected = timeline.events.map((e) => `${e.re}|${e.timestamp}`).sort();
    expect(rendered).toEqual(expected);
  });

  it("keeps vertical stacking within n rows", () => {
    const container = root();
    renderTimeline(container, timeline);
    const tops = new Set(
      [...container.querySelectorAll<HTMLElement>(".event-box")].map((b) => b.style.top),
    );
    expect(tops.size).toBeLessThanOrEqual(timeline.spec.n);
  });

  it("shows the server description verbatim on hover and hides on leave", () => {
    const container = root();
    renderTimeline(container, timeline);
    const box = container.querySelector<HTMLElement>(".event-box")!;
    const index = Number(box.dataset.index);
    const event = timeline.events.find(
      (e) => e.re === box.dataset.re && e.timestamp === box.dataset.timestamp,
    )!;
    box.dispatchEvent(new MouseEvent("mouseenter"));
    const tooltip = document.querySelector<HTMLElement>(".timeline-tooltip")!;
    expect(tooltip.style.display).toBe("block");
    expect(tooltip.textContent).toContain(event.description);
    expect(Number.isInteger(index)).toBe(true);
    box.dispatchEvent(new MouseEvent("mouseleave"));
    expect(tooltip.style.display).toBe("none");
  });

  it("draws axis ticks", () => {
    const container = root();
    renderTimeline(container, timeline);
    expect(container.querySelectorAll(".axis-tick").length).toBeGreaterThanOrEqual(2);
  });

  it("matches the frozen golden geometry", () => {
    const container = root();
    renderTimeline(container, timeline);
    const layout = [...container.querySelectorAll<HTMLElement>(".event-box")].map((b) => ({
      re: b.dataset.re,
      left: b.style.left,
      top: b.style.top,
    }));
    expect(layout).toMatchSnapshot();
  });

  it("rejects a response violating the stack limit and keeps the old view", () => {
    const container = root();
    renderTimeline(container, timeline);
    const before = container.innerHTML;
    const crowded = {
      ...timeline,
      spec: { ...timeline.spec, n: 1 },
      events: [
        { ...timeline.events[0], timestamp: "1990-01-01" },
        { ...timeline.events[0], re: "/m/x", timestamp: "1990-01-01" },
      ],
    };
    expect(() => renderTimeline(container, crowded)).toThrow(StackLimitError);
    expect(container.innerHTML).toBe(before);
  });
});

describe("labelFor", () => {
  it("prettifies the last id segment", () => {
    expect(labelFor("/m/act_000")).toBe("act 000");
    expect(labelFor("plain")).toBe("plain");
  });
});

describe("showError", () => {
  it("creates a dismissible banner", () => {
    const container = root();
    showError(container, "boom");
    const banner = document.querySelector<HTMLElement>(".error-banner")!;
    expect(banner.textContent).toBe("boom");
    expect(banner.style.display).toBe("block");
  });
});
