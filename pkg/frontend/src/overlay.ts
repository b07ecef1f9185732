/**
 * Affordance overlay composition. What gets drawn is a pure function of
 * (display mode, emphasized joint set): markers on the emphasized joints,
 * plus the full skeleton translucently or opaquely depending on the mode,
 * or nothing at all when invisible.
 */

import type { AffordanceMode } from "./protocol.js";
import { BONES, jointIndex } from "./skeleton.js";

export const TRANSLUCENT_OPACITY = 0.35;

export type OverlayElement =
  | { kind: "marker"; joint: number; opacity: number }
  | { kind: "bone"; from: number; to: number; opacity: number };

export function overlayElements(mode: AffordanceMode, emphasized: string[]): OverlayElement[] {
  if (mode === "invisible") {
    return [];
  }
  const markers: OverlayElement[] = emphasized.map((name) => ({
    kind: "marker",
    joint: jointIndex(name),
    opacity: 1.0,
  }));
  if (mode === "joints_only") {
    return markers;
  }
  const bodyOpacity = mode === "joints_plus_translucent_body" ? TRANSLUCENT_OPACITY : 1.0;
  const bones: OverlayElement[] = BONES.map(([from, to]) => ({
    kind: "bone",
    from,
    to,
    opacity: bodyOpacity,
  }));
  return [...markers, ...bones];
}
