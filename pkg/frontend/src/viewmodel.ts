/**
 * The view model holds exactly what the server has confirmed: the latest
 * state snapshot, the latest frame (a slot, old frames are overwritten),
 * calibration status, and connection/webcam status. User interactions
 * never mutate it directly; they emit commands and the next StateUpdate
 * round trip changes the view.
 */

import type {
  CalibrationResultMessage,
  ErrorMessage,
  FrameMessage,
  ServerMessage,
  Snapshot,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";
export type CalibrationStatus = "idle" | "collecting" | "calibrated" | "failed";
export type WebcamStatus = "pending" | "active" | "denied" | "unavailable";

export interface ViewModel {
  connection: ConnectionStatus;
  snapshot: Snapshot | null;
  frame: FrameMessage | null;
  calibration: CalibrationStatus;
  calibrationResult: CalibrationResultMessage | null;
  lastError: ErrorMessage | null;
  webcam: WebcamStatus;
  /** Device id of the chosen camera; null = default device. */
  selectedWebcam: string | null;
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    snapshot: null,
    frame: null,
    calibration: "idle",
    calibrationResult: null,
    lastError: null,
    webcam: "pending",
    selectedWebcam: null,
  };
}

export function applyServerMessage(vm: ViewModel, msg: ServerMessage): ViewModel {
  switch (msg.type) {
    case "state":
      return { ...vm, snapshot: msg.snapshot };
    case "frame":
      return { ...vm, frame: msg }; // latest-frame slot
    case "calibration_result":
      return { ...vm, calibration: "calibrated", calibrationResult: msg };
    case "error":
      if (msg.code === "calibration-error") {
        return { ...vm, calibration: "failed", lastError: msg };
      }
      return { ...vm, lastError: msg };
  }
}

export function withConnection(vm: ViewModel, connection: ConnectionStatus): ViewModel {
  return { ...vm, connection };
}

export function withCalibration(vm: ViewModel, calibration: CalibrationStatus): ViewModel {
  return { ...vm, calibration };
}

export function withWebcam(vm: ViewModel, webcam: WebcamStatus): ViewModel {
  return { ...vm, webcam };
}

export function withSelectedWebcam(vm: ViewModel, deviceId: string | null): ViewModel {
  return { ...vm, selectedWebcam: deviceId };
}
