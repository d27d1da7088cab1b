export type ReaderEventName = "word_click" | "audio_play" | "concordance_view";

export interface ReaderEvent {
  ts: string;
  event: ReaderEventName;
  target: string;
}

/** Sends one serialized event to the log endpoint. Injectable for tests. */
export type Transport = (endpoint: string, body: string) => void;

export function defaultTransport(endpoint: string, body: string): void {
  try {
    if (typeof navigator !== "undefined" && typeof navigator.sendBeacon === "function") {
      navigator.sendBeacon(endpoint, new Blob([body], { type: "application/json" }));
      return;
    }
    void fetch(endpoint, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
      keepalive: true
    }).catch(() => undefined);
  } catch {
    // logging must never affect reading
  }
}

/**
 * Posts one event when consent is true; performs no network call
 * whatsoever when it is false. Transport failures are swallowed.
 */
export function logEvent(
  event: ReaderEvent,
  consent: boolean,
  endpoint = "/log",
  transport: Transport = defaultTransport
): void {
  if (!consent) {
    return;
  }
  try {
    transport(endpoint, JSON.stringify(event));
  } catch {
    // silent by design
  }
}
