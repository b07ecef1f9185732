import { describe, expect, it } from "vitest";

import { applyServerMessage, initialViewModel, withConnection, withSelectedWebcam } from "../src/viewmodel.js";
import { sampleFrame, sampleSnapshot } from "./helpers.js";

describe("view model reducer", () => {
  it("starts with nothing confirmed", () => {
    const vm = initialViewModel();
    expect(vm.snapshot).toBeNull();
    expect(vm.frame).toBeNull();
    expect(vm.connection).toBe("connecting");
  });

  it("only a StateUpdate changes the snapshot", () => {
    let vm = initialViewModel();
    vm = applyServerMessage(vm, sampleFrame());
    expect(vm.snapshot).toBeNull();
    vm = applyServerMessage(vm, { type: "state", snapshot: sampleSnapshot({ rate: 0.5 }) });
    expect(vm.snapshot?.rate).toBe(0.5);
  });

  it("the frame slot keeps only the latest frame", () => {
    let vm = initialViewModel();
    vm = applyServerMessage(vm, sampleFrame({ position_s: 0.1 }));
    vm = applyServerMessage(vm, sampleFrame({ position_s: 0.2 }));
    vm = applyServerMessage(vm, sampleFrame({ position_s: 0.3 }));
    expect(vm.frame?.position_s).toBe(0.3);
  });

  it("calibration result flips status and is retained", () => {
    let vm = initialViewModel();
    vm = applyServerMessage(vm, {
      type: "calibration_result",
      bone_lengths: { left_hip: 0.12 },
      root_reference: [0, 0.9, 0],
      frames_used: 30,
    });
    expect(vm.calibration).toBe("calibrated");
    expect(vm.calibrationResult?.frames_used).toBe(30);
  });

  it("calibration errors mark failure; other errors are just recorded", () => {
    let vm = initialViewModel();
    vm = applyServerMessage(vm, { type: "error", code: "rate-not-allowed", detail: "" });
    expect(vm.calibration).toBe("idle");
    expect(vm.lastError?.code).toBe("rate-not-allowed");
    vm = applyServerMessage(vm, { type: "error", code: "calibration-error", detail: "degenerate" });
    expect(vm.calibration).toBe("failed");
  });

  it("tracks the chosen camera device", () => {
    let vm = initialViewModel();
    expect(vm.selectedWebcam).toBeNull();
    vm = withSelectedWebcam(vm, "cam-2");
    expect(vm.selectedWebcam).toBe("cam-2");
    vm = withSelectedWebcam(vm, null);
    expect(vm.selectedWebcam).toBeNull();
  });

  it("reducers never mutate the input", () => {
    const vm = initialViewModel();
    const next = withConnection(vm, "open");
    expect(vm.connection).toBe("connecting");
    expect(next.connection).toBe("open");
    const withFrame = applyServerMessage(next, sampleFrame());
    expect(next.frame).toBeNull();
    expect(withFrame.frame).not.toBeNull();
  });
});
