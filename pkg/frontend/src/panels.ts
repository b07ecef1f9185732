/**
 * The two stage panels: the learner (mirrored webcam + affordance overlay)
 * and the reference avatar (skeleton animation with a beat flash on count
 * 1). Both draw into 2D canvases with a shared orthographic projection.
 */

import { overlayElements } from "./overlay.js";
import type { Vec3 } from "./protocol.js";
import { BONES } from "./skeleton.js";
import type { ViewModel } from "./viewmodel.js";

interface Projection {
  toX(x: number): number;
  toY(y: number): number;
}

/** Fit the x/y extent of some frames into a canvas, preserving aspect. */
export function fitProjection(frames: Vec3[][], width: number, height: number, margin = 20): Projection {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const frame of frames) {
    for (const [x, y] of frame) {
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
    }
  }
  const spanX = Math.max(maxX - minX, 1e-6);
  const spanY = Math.max(maxY - minY, 1e-6);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const offX = (width - scale * spanX) / 2;
  const offY = (height - scale * spanY) / 2;
  return {
    toX: (x) => offX + scale * (x - minX),
    toY: (y) => height - (offY + scale * (y - minY)), // canvas y grows downward
  };
}

function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  proj: Projection,
  positions: Vec3[],
  color: string,
  opacity: number,
  lineWidth: number,
): void {
  ctx.save();
  ctx.globalAlpha = opacity;
  ctx.strokeStyle = color;
  ctx.lineWidth = lineWidth;
  ctx.lineCap = "round";
  for (const [from, to] of BONES) {
    const a = positions[from];
    const b = positions[to];
    if (!a || !b) continue;
    ctx.beginPath();
    ctx.moveTo(proj.toX(a[0]), proj.toY(a[1]));
    ctx.lineTo(proj.toX(b[0]), proj.toY(b[1]));
    ctx.stroke();
  }
  ctx.restore();
}

export class UserPanel {
  private proj: Projection | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly banner: HTMLElement,
    private readonly emphasized: string[],
  ) {}

  /** Project against the whole affordance track once so the overlay is stable. */
  prime(frames: Vec3[][]): void {
    this.proj = fitProjection(frames, this.canvas.width, this.canvas.height);
  }

  draw(vm: ViewModel): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    if (vm.webcam === "denied") {
      this.banner.textContent = "webcam blocked — check permissions and retry";
      this.banner.hidden = false;
    } else if (vm.connection === "closed") {
      // Keep the last frame on screen, just flag the stall.
      this.banner.textContent = "connection lost";
      this.banner.hidden = false;
    } else {
      this.banner.hidden = true;
    }

    const frame = vm.frame;
    const snapshot = vm.snapshot;
    if (!frame || !snapshot || !this.proj) return;
    const positions = frame.affordance_positions;
    if (positions.length === 0) return;

    for (const el of overlayElements(snapshot.affordance_mode, this.emphasized)) {
      if (el.kind === "bone") {
        const a = positions[el.from];
        const b = positions[el.to];
        if (!a || !b) continue;
        ctx.save();
        ctx.globalAlpha = el.opacity;
        ctx.strokeStyle = "#27c";
        ctx.lineWidth = 6;
        ctx.lineCap = "round";
        ctx.beginPath();
        ctx.moveTo(this.proj.toX(a[0]), this.proj.toY(a[1]));
        ctx.lineTo(this.proj.toX(b[0]), this.proj.toY(b[1]));
        ctx.stroke();
        ctx.restore();
      } else {
        const p = positions[el.joint];
        if (!p) continue;
        ctx.save();
        ctx.globalAlpha = el.opacity;
        ctx.fillStyle = "#fa3";
        ctx.beginPath();
        ctx.arc(this.proj.toX(p[0]), this.proj.toY(p[1]), 9, 0, 2 * Math.PI);
        ctx.fill();
        ctx.restore();
      }
    }
  }
}

export class ReferencePanel {
  private proj: Projection | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly frames: Vec3[][],
  ) {
    this.proj = fitProjection(frames, canvas.width, canvas.height);
  }

  draw(vm: ViewModel): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.proj) return;
    const frame = vm.frame;
    const index = frame ? Math.min(frame.reference_frame, this.frames.length - 1) : 0;
    const positions = this.frames[index];
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    // Beat flash: light the backdrop at the top of every count 1.
    if (frame && frame.count === 1 && frame.phase < 0.15) {
      ctx.fillStyle = "rgba(255, 220, 120, 0.45)";
      ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    }
    if (positions) {
      drawSkeleton(ctx, this.proj, positions, "#eee", 1.0, 5);
    }
  }
}
