/**
 * Pluggable user-pose sources. The core UI runs with the replay provider
 * (the bundle's own reference animation streamed back as "the user") so
 * everything works without a webcam or an in-browser estimator; a real
 * estimator adapter only needs to implement PoseProvider.
 */

import type { Vec3 } from "./protocol.js";

export interface PoseProvider {
  start(onFrame: (positions: Vec3[]) => void): void;
  stop(): void;
}

export class ReplayPoseProvider implements PoseProvider {
  private timer: ReturnType<typeof setInterval> | null = null;
  private cursor = 0;

  constructor(
    private readonly frames: Vec3[][],
    private readonly fps: number,
  ) {
    if (frames.length === 0) throw new Error("replay provider needs frames");
  }

  start(onFrame: (positions: Vec3[]) => void): void {
    if (this.timer) return;
    this.timer = setInterval(() => {
      const frame = this.frames[this.cursor % this.frames.length]!;
      this.cursor += 1;
      onFrame(frame);
    }, 1000 / this.fps);
  }

  stop(): void {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
  }
}

export class NonePoseProvider implements PoseProvider {
  start(): void {}
  stop(): void {}
}
