import { AudioFactory, createAudioController } from "./audio";
import { ReaderEventName, Transport, defaultTransport, logEvent } from "./events";

export interface InitOptions {
  endpoint?: string;
  transport?: Transport;
  createAudio?: AudioFactory;
  now?: () => string;
}

export interface ReaderBindings {
  consent: boolean;
  wordCount: number;
  audioCount: number;
}

/**
 * Wires word and loudspeaker handlers over an emitted page.
 *
 * Consent comes from the data-rf-consent attribute the compiler stamps on
 * the document root; a missing attribute means no logging. Words stay
 * plain hyperlinks: the click handler only logs, never cancels
 * navigation, so pages keep working with the runtime absent.
 */
export function init(doc: Document, options: InitOptions = {}): ReaderBindings {
  const root = doc.documentElement;
  const consent = root.getAttribute("data-rf-consent") === "true";
  const endpoint = options.endpoint ?? "/log";
  const transport = options.transport ?? defaultTransport;
  const now = options.now ?? (() => new Date().toISOString());
  const createAudio = options.createAudio ?? ((url: string) => new Audio(url));

  const send = (event: ReaderEventName, target: string): void =>
    logEvent({ ts: now(), event, target }, consent, endpoint, transport);

  const words = doc.querySelectorAll<HTMLAnchorElement>("a.rf-word[data-lemma]");
  words.forEach((word) => {
    word.addEventListener("click", () => {
      send("word_click", word.getAttribute("data-lemma") ?? "");
    });
  });

  const playAudio = createAudioController(createAudio);
  const controls = doc.querySelectorAll(".rf-audio[data-audio]");
  controls.forEach((control) => {
    control.addEventListener("click", (event) => {
      event.preventDefault();
      const target = playAudio(control);
      if (target !== null) {
        send("audio_play", target);
      }
    });
  });

  if (root.getAttribute("data-rf-kind") === "concordance") {
    send("concordance_view", root.getAttribute("data-rf-lemma") ?? "");
  }

  return { consent, wordCount: words.length, audioCount: controls.length };
}
