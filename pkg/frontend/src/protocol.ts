/**
 * Wire types for the gateway's session stream and HTTP documents.
 * Mirrors docs/protocol.schema.json and docs/manifest.schema.json of the
 * backend; every WebSocket text frame is one JSON object.
 */

export type AffordanceMode =
  | "joints_only"
  | "joints_plus_translucent_body"
  | "full_body"
  | "invisible";

export const AFFORDANCE_MODES: AffordanceMode[] = [
  "joints_only",
  "joints_plus_translucent_body",
  "full_body",
  "invisible",
];

export type AudioSource = "mixed" | "music" | "beat" | "silent";

export const ALLOWED_RATES = [0.5, 0.75, 1.0] as const;

export type Vec3 = [number, number, number];

export type CommandKind =
  | "play"
  | "pause"
  | "set_rate"
  | "toggle_repeat"
  | "toggle_music"
  | "toggle_beat"
  | "seek_segment"
  | "next_segment"
  | "prev_segment"
  | "seek_time"
  | "set_affordance_mode";

export interface SessionCommand {
  kind: CommandKind;
  rate?: number;
  segment?: number;
  time_s?: number;
  mode?: AffordanceMode;
}

export interface PoseFramePayload {
  t: number;
  positions: Vec3[];
}

export type ClientMessage =
  | { type: "command"; command: SessionCommand }
  | { type: "user_pose"; frame: PoseFramePayload }
  | { type: "calibration_start" }
  | { type: "calibration_frame"; frame: PoseFramePayload }
  | { type: "calibration_finish" };

export interface SegmentSummary {
  index: number;
  start_s: number;
  end_s: number;
  partial: boolean;
}

/** The server-confirmed session state; the UI renders nothing else. */
export interface Snapshot {
  bundle_id: string;
  position_s: number;
  playing: boolean;
  rate: number;
  repeat: boolean;
  music_on: boolean;
  beat_on: boolean;
  selected_segment: number | null;
  affordance_mode: AffordanceMode;
  audio_source: AudioSource;
  duration_s: number;
  fps: number;
  current_segment: number;
  count: number;
  phase: number;
  segments: SegmentSummary[];
}

export interface StateUpdateMessage {
  type: "state";
  snapshot: Snapshot;
}

export interface FrameMessage {
  type: "frame";
  position_s: number;
  reference_frame: number;
  affordance_frame: number;
  segment: number;
  count: number;
  phase: number;
  wrapped: boolean;
  audio_source: AudioSource;
  affordance_positions: Vec3[];
}

export interface CalibrationResultMessage {
  type: "calibration_result";
  bone_lengths: Record<string, number>;
  root_reference: Vec3;
  frames_used: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
}

export type ServerMessage =
  | StateUpdateMessage
  | FrameMessage
  | CalibrationResultMessage
  | ErrorMessage;

const SERVER_TYPES = new Set(["state", "frame", "calibration_result", "error"]);

export function encodeClient(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function decodeServer(text: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new Error(`malformed server message: ${err}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("server message must be a JSON object");
  }
  const type = (doc as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${String(type)}`);
  }
  return doc as ServerMessage;
}

/** Build the one command a control interaction maps to. */
export function command(kind: CommandKind, args: Omit<SessionCommand, "kind"> = {}): SessionCommand {
  return { kind, ...args };
}

/** Manifest document served at /bundles/{id}/manifest. */
export interface Manifest {
  format_version: number;
  title: string;
  bpm: number;
  offset_s: number;
  duration_s: number;
  fps: number;
  segments: Array<SegmentSummary & { beat_indices: number[] }>;
  affordance_mode_default: AffordanceMode;
  emphasized_joints: string[];
  assets: Record<string, string>;
}

/** Motion document served at /bundles/{id}/motion. */
export interface MotionDocument {
  reference: { fps: number; joints: string[]; frames: Vec3[][] };
  affordance: {
    mode: AffordanceMode;
    emphasized_joints: string[];
    fps: number;
    joints: string[];
    frames: Vec3[][];
  };
}
