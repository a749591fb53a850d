/** Application wiring: load, drag-zoom, back, entity pivot, deep links. */

import { HttpError, TimelineClient } from "./api";
import { pixelRangeToSpan } from "./layout";
import {
  SpanHistory,
  ViewState,
  initialState,
  locationForSubject,
  measureGeometry,
  subjectFromLocation,
} from "./state";
import { SchemaError, TimelineResponse, TimelineSpan } from "./types";
import { clearError, renderTimeline, showError } from "./view";

export interface AppOptions {
  root: HTMLElement;
  client: TimelineClient;
  defaultSubject: string;
  navigate?: (path: string) => void;
}

export class TimelineApp {
  state: ViewState;
  history = new SpanHistory();
  current: TimelineResponse | null = null;

  constructor(private options: AppOptions) {
    const fromUrl = subjectFromLocation(
      options.root.ownerDocument.defaultView?.location.pathname ?? "/",
    );
    this.state = initialState(
      fromUrl ?? options.defaultSubject,
      measureGeometry(options.root),
    );
  }

  async load(span: TimelineSpan | null = this.state.span): Promise<void> {
    const { client, root } = this.options;
    this.state.loading = true;
    const requestId = client.nextRequestId();
    try {
      const body = await client.fetchTimeline(
        {
          entity: this.state.subject,
          start: span?.start,
          end: span?.end,
          width: this.state.geometry.width,
          height: this.state.geometry.height,
        },
        requestId,
      );
      if (body === null) return; // superseded by a newer request
      this.current = body;
      this.state.span = { ...body.span };
      clearError(root.ownerDocument);
      renderTimeline(root, body, {
        onEntityClick: (re) => void this.pivotTo(re),
      });
    } catch (error) {
      if (error instanceof HttpError && error.status === 404) {
        showError(root, `no timeline available for ${this.state.subject}`);
      } else if (error instanceof SchemaError) {
        showError(root, `bad response from server: ${error.message}`);
      } else {
        showError(root, "request failed; keeping the previous view");
      }
    } finally {
      this.state.loading = false;
    }
  }

  /** Drag selection on the axis, in canvas pixel coordinates. */
  async zoomTo(x0: number, x1: number): Promise<void> {
    if (!this.current) return;
    const span = pixelRangeToSpan(
      x0,
      x1,
      this.current.spec.W,
      this.current.span.start,
      this.current.span.end,
    );
    this.history.push(this.state.span);
    await this.load(span);
  }

  async backToPreviousSpan(): Promise<boolean> {
    const previous = this.history.back();
    if (previous === undefined) return false;
    await this.load(previous);
    return true;
  }

  async pivotTo(entityId: string): Promise<void> {
    this.history.clear();
    this.state.subject = entityId;
    this.state.span = null;
    this.options.navigate?.(locationForSubject(entityId));
    await this.load(null);
  }
}

export function installDragZoom(app: TimelineApp, surface: HTMLElement): void {
  let dragStart: number | null = null;
  surface.addEventListener("mousedown", (event) => {
    dragStart = (event as MouseEvent).offsetX;
  });
  surface.addEventListener("mouseup", (event) => {
    if (dragStart === null) return;
    const end = (event as MouseEvent).offsetX;
    const start = dragStart;
    dragStart = null;
    if (Math.abs(end - start) >= 8) {
      void app.zoomTo(start, end);
    }
  });
}

export function bootstrap(doc: Document): TimelineApp {
  const root = doc.getElementById("timeline-root");
  if (!root) throw new Error("missing #timeline-root");
  const client = new TimelineClient("");
  const app = new TimelineApp({
    root,
    client,
    defaultSubject: "/m/act_000",
    navigate: (path) => doc.defaultView?.history.pushState({}, "", path),
  });
  installDragZoom(app, root);
  doc.getElementById("back-button")?.addEventListener("click", () => {
    void app.backToPreviousSpan();
  });
  void app.load();
  return app;
}

declare global {
  interface Window {
    __timelineApp?: TimelineApp;
  }
}

if (typeof document !== "undefined" && document.getElementById("timeline-root")) {
  window.__timelineApp = bootstrap(document);
}
