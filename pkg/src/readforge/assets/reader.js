"use strict";
(() => {
  // src/audio.ts
  var ERROR_CLASS = "rf-audio-error";
  function createAudioController(createAudio) {
    let player = null;
    let playingUrl = null;
    return function onAudioClick(control) {
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

  // src/events.ts
  function defaultTransport(endpoint, body) {
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
      }).catch(() => void 0);
    } catch {
    }
  }
  function logEvent(event, consent, endpoint = "/log", transport = defaultTransport) {
    if (!consent) {
      return;
    }
    try {
      transport(endpoint, JSON.stringify(event));
    } catch {
    }
  }

  // src/reader.ts
  function init(doc, options = {}) {
    const root = doc.documentElement;
    const consent = root.getAttribute("data-rf-consent") === "true";
    const endpoint = options.endpoint ?? "/log";
    const transport = options.transport ?? defaultTransport;
    const now = options.now ?? (() => (/* @__PURE__ */ new Date()).toISOString());
    const createAudio = options.createAudio ?? ((url) => new Audio(url));
    const send = (event, target) => logEvent({ ts: now(), event, target }, consent, endpoint, transport);
    const words = doc.querySelectorAll("a.rf-word[data-lemma]");
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

  // src/boot.ts
  function boot() {
    init(document);
  }
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", boot);
  } else {
    boot();
  }
})();
