/** Typed client for the timeline service with stale-response rejection. */

import { EntityInfo, TimelineResponse, assertTimeline } from "./types";

export interface TimelineQuery {
  entity: string;
  start?: string;
  end?: string;
  width?: number;
  height?: number;
  variant?: string;
}

export class HttpError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`http ${status}`);
  }
}

export class TimelineClient {
  private seq = 0;
  private latest = 0;

  constructor(
    private baseUrl: string = "",
    private fetcher: typeof fetch = fetch.bind(globalThis),
  ) {}

  /** Monotone sequence; a response is stale when a newer request started. */
  nextRequestId(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(requestId: number): boolean {
    return requestId >= this.latest;
  }

  private commit(requestId: number): boolean {
    if (requestId < this.latest) return false;
    this.latest = requestId;
    return true;
  }

  async fetchTimeline(query: TimelineQuery, requestId?: number): Promise<TimelineResponse | null> {
    const id = requestId ?? this.nextRequestId();
    const params = new URLSearchParams({ entity: query.entity });
    if (query.start) params.set("start", query.start);
    if (query.end) params.set("end", query.end);
    if (query.width) params.set("width", String(query.width));
    if (query.height) params.set("height", String(query.height));
    if (query.variant) params.set("variant", query.variant);
    const response = await this.fetcher(`${this.baseUrl}/api/timeline?${params}`);
    if (!response.ok) {
      throw new HttpError(response.status, await response.json().catch(() => null));
    }
    const body = assertTimeline(await response.json());
    // Discard if a newer request superseded this one while in flight.
    if (!this.commit(id)) return null;
    return body;
  }

  async fetchEntity(id: string): Promise<EntityInfo> {
    const response = await this.fetcher(`${this.baseUrl}/api/entity/${encodeURIComponent(id)}`);
    if (!response.ok) {
      throw new HttpError(response.status, await response.json().catch(() => null));
    }
    return (await response.json()) as EntityInfo;
  }
}
