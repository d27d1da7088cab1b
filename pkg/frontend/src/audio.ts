/** Minimal surface of an audio element the controller needs; injectable
 * so tests run without real media. */
export interface AudioHandle {
  paused: boolean;
  currentTime: number;
  play(): Promise<void> | void;
  pause(): void;
  addEventListener(type: string, listener: () => void): void;
}

export type AudioFactory = (url: string) => AudioHandle;

const ERROR_CLASS = "rf-audio-error";

/**
 * Click-to-play with restart semantics: clicking the same control while
 * its audio is playing restarts from the beginning; clicking another
 * control stops the current playback first. Controls without a
 * data-audio attribute are disabled and do nothing.
 *
 * Returns the click handler; the handler returns the resource id (or the
 * URL as a fallback) to log, or null for disabled controls.
 */
export function createAudioController(createAudio: AudioFactory) {
  let player: AudioHandle | null = null;
  let playingUrl: string | null = null;

  return function onAudioClick(control: Element): string | null {
    const url = control.getAttribute("data-audio");
    if (!url) {
      return null;
    }
    try {
      if (player !== null && playingUrl === url && !player.paused) {
        player.currentTime = 0;
      } else {
        if (player !== null) {
          player.pause();
        }
        player = createAudio(url);
        playingUrl = url;
        player.addEventListener("error", () => control.classList.add(ERROR_CLASS));
      }
      const outcome = player.play();
      if (outcome && typeof outcome.catch === "function") {
        outcome.catch(() => control.classList.add(ERROR_CLASS));
      }
    } catch {
      control.classList.add(ERROR_CLASS);
    }
    return control.getAttribute("data-resource") ?? url;
  };
}
