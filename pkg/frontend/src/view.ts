/** DOM rendering: stacked event boxes, axis, hover tooltip, error banner.
 *
 * The renderer never re-ranks or drops events: every event in the response
 * becomes exactly one box. Stack depth above the server's n indicates a
 * broken invariant and aborts the render (previous view stays up).
 */

import { PlacedBox, axisTicks, placeBoxes } from "./layout";
import { TimelineResponse } from "./types";

export interface ViewHandlers {
  onEntityClick?: (re: string) => void;
  onHover?: (index: number | null) => void;
}

export class StackLimitError extends Error {}

export function renderTimeline(
  container: HTMLElement,
  timeline: TimelineResponse,
  handlers: ViewHandlers = {},
): PlacedBox[] {
  const boxes = placeBoxes(timeline);
  const deepest = boxes.reduce((acc, b) => Math.max(acc, b.row + 1), 0);
  if (deepest > timeline.spec.n) {
    throw new StackLimitError(`stack depth ${deepest} exceeds n=${timeline.spec.n}`);
  }

  const canvas = document.createElement("div");
  canvas.className = "timeline-canvas";
  canvas.style.position = "relative";
  canvas.style.width = `${timeline.spec.W}px`;
  canvas.style.height = `${timeline.spec.n * timeline.spec.h + 28}px`;

  const tooltip = ensureTooltip(container.ownerDocument);

  boxes.forEach((box, index) => {
    const el = document.createElement("div");
    el.className = "event-box";
    el.dataset.re = box.event.re;
    el.dataset.timestamp = box.event.timestamp;
    el.dataset.index = String(index);
    el.style.position = "absolute";
    el.style.left = `${box.left.toFixed(1)}px`;
    el.style.top = `${(timeline.spec.n - 1 - box.row) * timeline.spec.h}px`;
    el.style.width = `${timeline.spec.w}px`;
    el.style.height = `${timeline.spec.h}px`;
    el.textContent = labelFor(box.event.re);
    el.title = "";
    el.addEventListener("mouseenter", () => {
      tooltip.textContent = `${box.event.description} (${box.event.timestamp})`;
      tooltip.style.display = "block";
      handlers.onHover?.(index);
    });
    el.addEventListener("mouseleave", () => {
      tooltip.style.display = "none";
      handlers.onHover?.(null);
    });
    el.addEventListener("click", () => handlers.onEntityClick?.(box.event.re));
    canvas.appendChild(el);
  });

  const axis = document.createElement("div");
  axis.className = "timeline-axis";
  axis.style.position = "absolute";
  axis.style.bottom = "0";
  axis.style.width = "100%";
  for (const tick of axisTicks(timeline.span.start, timeline.span.end)) {
    const mark = document.createElement("span");
    mark.className = "axis-tick";
    mark.style.position = "absolute";
    mark.style.left = `${(tick.leftFraction * 100).toFixed(2)}%`;
    mark.textContent = tick.label;
    axis.appendChild(mark);
  }
  canvas.appendChild(axis);

  container.replaceChildren(canvas);
  return boxes;
}

/** Compact box label derived from the entity id (names live in tooltips). */
export function labelFor(entityId: string): string {
  const tail = entityId.split("/").filter(Boolean).pop() ?? entityId;
  return tail.replace(/[_-]+/g, " ");
}

function ensureTooltip(doc: Document): HTMLElement {
  let tooltip = doc.querySelector<HTMLElement>(".timeline-tooltip");
  if (!tooltip) {
    tooltip = doc.createElement("div");
    tooltip.className = "timeline-tooltip";
    tooltip.style.display = "none";
    tooltip.style.position = "fixed";
    tooltip.style.maxWidth = "360px";
    doc.body.appendChild(tooltip);
  }
  return tooltip;
}

export function showError(container: HTMLElement, message: string): void {
  let banner = container.ownerDocument.querySelector<HTMLElement>(".error-banner");
  if (!banner) {
    banner = container.ownerDocument.createElement("div");
    banner.className = "error-banner";
    container.ownerDocument.body.prepend(banner);
  }
  banner.textContent = message;
  banner.style.display = "block";
}

export function clearError(doc: Document): void {
  const banner = doc.querySelector<HTMLElement>(".error-banner");
  if (banner) banner.style.display = "none";
}
