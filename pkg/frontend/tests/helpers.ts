import type { FrameMessage, Snapshot } from "../src/protocol.js";

export const DEFAULT_EMPHASIZED = [
  "left_wrist",
  "right_wrist",
  "left_hand",
  "right_hand",
  "left_ankle",
  "right_ankle",
  "left_foot",
  "right_foot",
];

export function sampleSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    bundle_id: "fixture",
    position_s: 0.0,
    playing: false,
    rate: 1.0,
    repeat: false,
    music_on: true,
    beat_on: true,
    selected_segment: null,
    affordance_mode: "full_body",
    audio_source: "mixed",
    duration_s: 8.0,
    fps: 30.0,
    current_segment: 0,
    count: 1,
    phase: 0.0,
    segments: [
      { index: 0, start_s: 0.0, end_s: 4.0, partial: false },
      { index: 1, start_s: 4.0, end_s: 8.0, partial: false },
    ],
    ...overrides,
  };
}

export function sampleFrame(overrides: Partial<FrameMessage> = {}): FrameMessage {
  return {
    type: "frame",
    position_s: 0.5,
    reference_frame: 15,
    affordance_frame: 15,
    segment: 0,
    count: 2,
    phase: 0.0,
    wrapped: false,
    audio_source: "mixed",
    affordance_positions: Array.from({ length: 24 }, (_, i) => [i * 0.1, 1.0, 0.0]),
    ...overrides,
  };
}
