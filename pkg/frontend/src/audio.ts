/**
 * Audio playback policy: the <audio> element always plays the variant the
 * server selected (mixed / music / beat / silent) at the confirmed rate,
 * using the gateway's pre-rendered rate renders. A rate-r render stretches
 * session time by 1/r, so the element's clock runs at position/r.
 */

import { audioUrl } from "./client.js";
import type { Snapshot } from "./protocol.js";

export interface AudioPlan {
  url: string | null; // null = silent
  playing: boolean;
  /** Seconds into the rendered file for the current session position. */
  audioTime: number;
}

export function audioPlan(base: string, snapshot: Snapshot, positionS: number): AudioPlan {
  const source = snapshot.audio_source;
  if (source === "silent") {
    return { url: null, playing: false, audioTime: 0 };
  }
  return {
    url: audioUrl(base, snapshot.bundle_id, source, snapshot.rate),
    playing: snapshot.playing,
    audioTime: positionS / snapshot.rate,
  };
}

/** How far the element may drift from the session before a hard reseek. */
export const RESYNC_THRESHOLD_S = 0.25;

export function bindAudioElement(element: HTMLAudioElement, base: string) {
  let currentUrl: string | null = null;
  return (snapshot: Snapshot, positionS: number): void => {
    const plan = audioPlan(base, snapshot, positionS);
    if (plan.url !== currentUrl) {
      currentUrl = plan.url;
      if (plan.url) {
        element.src = plan.url;
        element.currentTime = plan.audioTime;
      } else {
        element.removeAttribute("src");
      }
    }
    if (!plan.url) {
      element.pause();
      return;
    }
    if (Math.abs(element.currentTime - plan.audioTime) > RESYNC_THRESHOLD_S) {
      element.currentTime = plan.audioTime;
    }
    if (plan.playing && element.paused) {
      void element.play().catch(() => {
        // Autoplay may need a user gesture first; the next click retries.
      });
    } else if (!plan.playing && !element.paused) {
      element.pause();
    }
  };
}
