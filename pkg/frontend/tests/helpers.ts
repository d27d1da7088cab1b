import { readFileSync } from "node:fs";
import { JSDOM, VirtualConsole } from "jsdom";

import type { AudioHandle } from "../src/audio";
import type { Transport } from "../src/events";

const FIXTURES = new URL("./fixtures/", import.meta.url);

export function fixturePath(relative: string): URL {
  return new URL(relative, FIXTURES);
}

export function loadFixturePage(site: string, relative: string): JSDOM {
  const html = readFileSync(fixturePath(`${site}/${relative}`), "utf-8");
  return new JSDOM(html, { virtualConsole: new VirtualConsole() });
}

export function loadFixtureJson(site: string, relative: string): any {
  return JSON.parse(readFileSync(fixturePath(`${site}/${relative}`), "utf-8"));
}

export function pageFromHtml(html: string): JSDOM {
  return new JSDOM(html, { virtualConsole: new VirtualConsole() });
}

export interface RecordedCall {
  endpoint: string;
  body: string;
}

export function recordingTransport(): { calls: RecordedCall[]; transport: Transport } {
  const calls: RecordedCall[] = [];
  return {
    calls,
    transport: (endpoint, body) => {
      calls.push({ endpoint, body });
    }
  };
}

export class FakeAudio implements AudioHandle {
  paused = true;
  currentTime = 0;
  playCalls = 0;
  pauseCalls = 0;
  private listeners: Record<string, Array<() => void>> = {};

  constructor(
    public url: string,
    private failPlayback = false
  ) {}

  play(): Promise<void> {
    this.playCalls += 1;
    if (this.failPlayback) {
      return Promise.reject(new Error("unreachable audio"));
    }
    this.paused = false;
    return Promise.resolve();
  }

  pause(): void {
    this.paused = true;
    this.pauseCalls += 1;
  }

  addEventListener(type: string, listener: () => void): void {
    (this.listeners[type] ??= []).push(listener);
  }

  emit(type: string): void {
    for (const listener of this.listeners[type] ?? []) {
      listener();
    }
  }
}

export function fakeAudioFactory(options: { failPlayback?: boolean } = {}) {
  const created: FakeAudio[] = [];
  const factory = (url: string): AudioHandle => {
    const audio = new FakeAudio(url, options.failPlayback ?? false);
    created.push(audio);
    return audio;
  };
  return { created, factory };
}

export function click(element: Element, dom: JSDOM): boolean {
  const event = new dom.window.MouseEvent("click", { bubbles: true, cancelable: true });
  return element.dispatchEvent(event);
}

/** Cancels anchor default actions so jsdom does not attempt navigation;
 * runtime handlers still run first on the elements themselves. */
export function suppressNavigation(dom: JSDOM): void {
  dom.window.document.addEventListener("click", (event) => event.preventDefault());
}

export function flushMicrotasks(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
