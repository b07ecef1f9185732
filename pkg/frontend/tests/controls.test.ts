/**
 * Automated interaction test: the control panel exposes exactly the
 * learning feature set, and clicking each control emits the one mapped
 * session command.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { buildControlPanel, buildTimeline } from "../src/controls.js";
import type { SessionCommand } from "../src/protocol.js";
import { applyServerMessage, initialViewModel } from "../src/viewmodel.js";
import { sampleSnapshot } from "./helpers.js";

let sent: SessionCommand[];
const send = (cmd: SessionCommand) => sent.push(cmd);

beforeEach(() => {
  sent = [];
  document.body.innerHTML = "";
});

function click(id: string): void {
  const node = document.getElementById(id);
  expect(node, `#${id} exists`).toBeTruthy();
  node!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("control panel", () => {
  it("exposes exactly the learning feature set", () => {
    const panel = buildControlPanel(document, send);
    document.body.append(panel.root);

    for (const id of ["ctl-play", "ctl-pause", "ctl-music", "ctl-beat", "ctl-repeat", "ctl-prev", "ctl-next"]) {
      expect(document.getElementById(id), id).toBeTruthy();
    }
    const rateButtons = Array.from(document.querySelectorAll<HTMLButtonElement>("#ctl-rates button"));
    expect(rateButtons.map((b) => b.dataset.rate)).toEqual(["0.5", "0.75", "1"]);

    const modeOptions = Array.from(document.querySelectorAll<HTMLOptionElement>("#ctl-mode option"));
    expect(modeOptions.map((o) => o.value)).toEqual([
      "joints_only",
      "joints_plus_translucent_body",
      "full_body",
      "invisible",
    ]);
  });

  it("maps every control to exactly one command", () => {
    const panel = buildControlPanel(document, send);
    document.body.append(panel.root);

    const expectations: Array<[string, SessionCommand]> = [
      ["ctl-play", { kind: "play" }],
      ["ctl-pause", { kind: "pause" }],
      ["ctl-music", { kind: "toggle_music" }],
      ["ctl-beat", { kind: "toggle_beat" }],
      ["ctl-repeat", { kind: "toggle_repeat" }],
      ["ctl-prev", { kind: "prev_segment" }],
      ["ctl-next", { kind: "next_segment" }],
      ["ctl-rate-0.5", { kind: "set_rate", rate: 0.5 }],
      ["ctl-rate-0.75", { kind: "set_rate", rate: 0.75 }],
      ["ctl-rate-1", { kind: "set_rate", rate: 1.0 }],
    ];
    for (const [id, expected] of expectations) {
      sent = [];
      click(id);
      expect(sent, id).toEqual([expected]);
    }
  });

  it("affordance mode dropdown emits set_affordance_mode, including invisible", () => {
    const panel = buildControlPanel(document, send);
    document.body.append(panel.root);
    const select = document.getElementById("ctl-mode") as HTMLSelectElement;
    for (const mode of ["invisible", "joints_only"]) {
      sent = [];
      select.value = mode;
      select.dispatchEvent(new Event("change", { bubbles: true }));
      expect(sent).toEqual([{ kind: "set_affordance_mode", mode }]);
    }
  });

  it("renders pressed states from the server snapshot only", () => {
    const panel = buildControlPanel(document, send);
    document.body.append(panel.root);

    let vm = initialViewModel();
    click("ctl-music"); // emits, but must not change the UI by itself
    panel.update(vm);
    expect(document.getElementById("ctl-music")!.getAttribute("aria-pressed")).toBeNull();

    vm = applyServerMessage(vm, {
      type: "state",
      snapshot: sampleSnapshot({ music_on: false, rate: 0.75, playing: true }),
    });
    panel.update(vm);
    expect(document.getElementById("ctl-music")!.getAttribute("aria-pressed")).toBe("false");
    expect(document.getElementById("ctl-rate-0.75")!.getAttribute("aria-pressed")).toBe("true");
    expect(document.getElementById("ctl-play")!.getAttribute("aria-pressed")).toBe("true");
  });
});

describe("timeline bar", () => {
  it("one clickable cell per 8-count emitting seek_segment", () => {
    const timeline = buildTimeline(document, sampleSnapshot(), send);
    document.body.append(timeline.root);
    const cells = Array.from(document.querySelectorAll(".segment"));
    expect(cells).toHaveLength(2);
    click("seg-1");
    expect(sent).toEqual([{ kind: "seek_segment", segment: 1 }]);
  });

  it("marks the current segment and count from the latest frame", () => {
    const timeline = buildTimeline(document, sampleSnapshot(), send);
    document.body.append(timeline.root);
    let vm = initialViewModel();
    vm = applyServerMessage(vm, { type: "state", snapshot: sampleSnapshot() });
    vm = applyServerMessage(vm, {
      type: "frame",
      position_s: 4.25,
      reference_frame: 127,
      affordance_frame: 127,
      segment: 1,
      count: 1,
      phase: 0.5,
      wrapped: false,
      audio_source: "mixed",
      affordance_positions: [],
    });
    timeline.update(vm);
    expect(document.getElementById("seg-1")!.classList.contains("active")).toBe(true);
    expect(document.getElementById("count-label")!.textContent).toBe("count 1");
  });
});
