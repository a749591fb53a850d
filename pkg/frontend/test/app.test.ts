/** Interaction flows against a fixture-backed fetch: zoom, back, pivot. */

import { beforeEach, describe, expect, it, vi } from "vitest";

import golden from "./fixtures/timeline_golden.json";
import zoomed from "./fixtures/timeline_zoom.json";
import { TimelineClient } from "../src/api";
import { TimelineApp, installDragZoom } from "../src/main";
import { subjectFromLocation, locationForSubject, SpanHistory } from "../src/state";

interface RecordedRequest {
  url: URL;
}

function fixtureFetch(recorded: RecordedRequest[]) {
  return vi.fn(async (input: RequestInfo | URL): Promise<Response> => {
    const url = new URL(String(input), "http://fixture.local");
    recorded.push({ url });
    if (url.pathname !== "/api/timeline") {
      return Response.json({ error: "not found", code: 404 }, { status: 404 });
    }
    const entity = url.searchParams.get("entity");
    if (entity !== "/m/act_000") {
      return Response.json({ error: `entity not found: ${entity}`, code: 404 }, { status: 404 });
    }
    const start = url.searchParams.get("start");
    const body = start && start >= "1985-01-01" ? zoomed : golden;
    return Response.json(body);
  });
}

function makeApp(recorded: RecordedRequest[]) {
  document.body.innerHTML = '<div id="timeline-root"></div>';
  const root = document.getElementById("timeline-root")!;
  const paths: string[] = [];
  const client = new TimelineClient("http://fixture.local", fixtureFetch(recorded));
  const app = new TimelineApp({
    root,
    client,
    defaultSubject: "/m/act_000",
    navigate: (path) => paths.push(path),
  });
  return { app, root, paths };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("initial load", () => {
  it("renders the fixture timeline", async () => {
    const recorded: RecordedRequest[] = [];
    const { app, root } = makeApp(recorded);
    await app.load();
    expect(root.querySelectorAll(".event-box").length).toBe(
      (golden as { events: unknown[] }).events.length,
    );
    expect(recorded.length).toBe(1);
  });
});

describe("drag zoom", () => {
  it("issues exactly one request carrying the selected span", async () => {
    const recorded: RecordedRequest[] = [];
    const { app } = makeApp(recorded);
    await app.load();
    recorded.length = 0;

    await app.zoomTo(250, 750);
    expect(recorded.length).toBe(1);
    const params = recorded[0].url.searchParams;
    // Golden span is 1980-07-13..2014-04-06 (12320 days); the pixel range
    // [250, 750] of 1000 maps to a quarter in from both ends.
    expect(params.get("start")).toBe("1988-12-18");
    expect(params.get("end")).toBe("2005-10-30");
    expect(app.state.span).toEqual({
      start: zoomed.span.start,
      end: zoomed.span.end,
    });
  });

  it("back restores the previous span", async () => {
    const recorded: RecordedRequest[] = [];
    const { app } = makeApp(recorded);
    await app.load();
    const original = { ...app.state.span! };

    await app.zoomTo(400, 900);
    expect(app.state.span).not.toEqual(original);
    const moved = await app.backToPreviousSpan();
    expect(moved).toBe(true);
    expect(app.state.span).toEqual(original);
    expect(await app.backToPreviousSpan()).toBe(false);
  });

  it("mouse drag on the surface triggers a single zoom request", async () => {
    const recorded: RecordedRequest[] = [];
    const { app, root } = makeApp(recorded);
    await app.load();
    installDragZoom(app, root);
    recorded.length = 0;

    root.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    root.dispatchEvent(new MouseEvent("mousemove", { bubbles: true }));
    root.dispatchEvent(new MouseEvent("mouseup", { bubbles: true }));
    await Promise.resolve();
    // offsetX is 0 in jsdom for both ends: too small a drag, no request.
    expect(recorded.length).toBe(0);

    await app.zoomTo(100, 600);
    expect(recorded.length).toBe(1);
  });
});

describe("entity pivot", () => {
  it("clicking a box navigates to the clicked id", async () => {
    const recorded: RecordedRequest[] = [];
    const { app, root, paths } = makeApp(recorded);
    await app.load();
    recorded.length = 0;

    const box = root.querySelector<HTMLElement>(".event-box")!;
    const clicked = box.dataset.re!;
    box.dispatchEvent(new MouseEvent("click"));
    await vi.waitFor(() => expect(recorded.length).toBe(1));
    expect(recorded[0].url.searchParams.get("entity")).toBe(clicked);
    expect(paths).toEqual([locationForSubject(clicked)]);
  });

  it("a 404 pivot shows a message and keeps state consistent", async () => {
    const recorded: RecordedRequest[] = [];
    const { app } = makeApp(recorded);
    await app.load();
    await app.pivotTo("/m/unknown");
    const banner = document.querySelector<HTMLElement>(".error-banner")!;
    expect(banner.textContent).toContain("no timeline available");
  });
});

describe("stale responses", () => {
  it("discards a response superseded by a newer request", async () => {
    const { app } = makeApp([]);
    const client = (app as unknown as { options: { client: TimelineClient } }).options.client;
    const first = client.nextRequestId();
    const second = client.nextRequestId();
    const fresh = await client.fetchTimeline({ entity: "/m/act_000" }, second);
    expect(fresh).not.toBeNull();
    const stale = await client.fetchTimeline({ entity: "/m/act_000" }, first);
    expect(stale).toBeNull();
  });
});

describe("deep links", () => {
  it("round-trips subjects through the URL", () => {
    expect(subjectFromLocation(locationForSubject("/m/act_000"))).toBe("/m/act_000");
    expect(subjectFromLocation("/elsewhere")).toBeNull();
  });
});

describe("span history", () => {
  it("pops in reverse push order and clears on pivot", () => {
    const history = new SpanHistory();
    history.push(null);
    history.push({ start: "2000-01-01", end: "2001-01-01" });
    expect(history.back()).toEqual({ start: "2000-01-01", end: "2001-01-01" });
    expect(history.back()).toBeNull();
    expect(history.back()).toBeUndefined();
    history.push(null);
    history.clear();
    expect(history.depth).toBe(0);
  });
});
