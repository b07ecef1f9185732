import { describe, expect, it } from "vitest";

import { audioPlan } from "../src/audio.js";
import { sampleSnapshot } from "./helpers.js";

const BASE = "http://localhost:8000";

describe("audio source selection", () => {
  it("plays the variant the server selected", () => {
    const table = [
      [{ music_on: true, beat_on: true, audio_source: "mixed" }, "mixed"],
      [{ music_on: true, beat_on: false, audio_source: "music" }, "music"],
      [{ music_on: false, beat_on: true, audio_source: "beat" }, "beat"],
    ] as const;
    for (const [overrides, variant] of table) {
      const plan = audioPlan(BASE, sampleSnapshot(overrides), 0);
      expect(plan.url).toBe(`${BASE}/bundles/fixture/audio/${variant}?rate=1`);
    }
  });

  it("both toggles off means no audio at all", () => {
    const plan = audioPlan(BASE, sampleSnapshot({ music_on: false, beat_on: false, audio_source: "silent" }), 2);
    expect(plan.url).toBeNull();
    expect(plan.playing).toBe(false);
  });

  it("slow practice uses the pre-rendered rate variant and rescaled clock", () => {
    const snapshot = sampleSnapshot({ rate: 0.5, playing: true });
    const plan = audioPlan(BASE, snapshot, 3.0);
    expect(plan.url).toContain("rate=0.5");
    expect(plan.audioTime).toBeCloseTo(6.0, 12); // session 3 s = file 6 s at half speed
    expect(plan.playing).toBe(true);
  });
});
