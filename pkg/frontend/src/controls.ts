/**
 * The learning controls and the 8-count timeline. Every interactive
 * element emits exactly one session command; nothing here mutates the
 * view model — pressed states, the active rate, and the progress marker
 * all re-render from server-confirmed snapshots.
 */

import {
  AFFORDANCE_MODES,
  ALLOWED_RATES,
  type AffordanceMode,
  type SessionCommand,
  type Snapshot,
  command,
} from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export type CommandSink = (cmd: SessionCommand) => void;

export interface ControlPanel {
  root: HTMLElement;
  update(vm: ViewModel): void;
}

export function buildControlPanel(doc: Document, send: CommandSink): ControlPanel {
  const root = doc.createElement("div");
  root.className = "controls";

  const transport = doc.createElement("div");
  transport.className = "row";
  const play = button(doc, "ctl-play", "play", () => send(command("play")));
  const pause = button(doc, "ctl-pause", "pause", () => send(command("pause")));
  transport.append(play, pause);

  const toggles = doc.createElement("div");
  toggles.className = "row";
  const music = button(doc, "ctl-music", "music", () => send(command("toggle_music")));
  const beat = button(doc, "ctl-beat", "beat", () => send(command("toggle_beat")));
  const repeat = button(doc, "ctl-repeat", "repeat", () => send(command("toggle_repeat")));
  toggles.append(music, beat, repeat);

  const rates = doc.createElement("div");
  rates.className = "row";
  rates.id = "ctl-rates";
  const rateButtons = ALLOWED_RATES.map((rate) => {
    const b = button(doc, `ctl-rate-${rate}`, `${rate}x`, () => send(command("set_rate", { rate })));
    b.dataset.rate = String(rate);
    rates.append(b);
    return b;
  });

  const nav = doc.createElement("div");
  nav.className = "row";
  const prev = button(doc, "ctl-prev", "prev 8-count", () => send(command("prev_segment")));
  const next = button(doc, "ctl-next", "next 8-count", () => send(command("next_segment")));
  nav.append(prev, next);

  const modeSelect = doc.createElement("select");
  modeSelect.id = "ctl-mode";
  for (const mode of AFFORDANCE_MODES) {
    const option = doc.createElement("option");
    option.value = mode;
    option.textContent = mode.replace(/_/g, " ");
    modeSelect.append(option);
  }
  modeSelect.addEventListener("change", () => {
    send(command("set_affordance_mode", { mode: modeSelect.value as AffordanceMode }));
  });

  root.append(transport, toggles, rates, nav, modeSelect);

  return {
    root,
    update(vm: ViewModel): void {
      const s = vm.snapshot;
      if (!s) return;
      setPressed(music, s.music_on);
      setPressed(beat, s.beat_on);
      setPressed(repeat, s.repeat);
      setPressed(play, s.playing);
      setPressed(pause, !s.playing);
      for (const b of rateButtons) {
        setPressed(b, Number(b.dataset.rate) === s.rate);
      }
      if (modeSelect.value !== s.affordance_mode) {
        modeSelect.value = s.affordance_mode;
      }
    },
  };
}

export interface TimelineBar {
  root: HTMLElement;
  update(vm: ViewModel): void;
}

/** The clickable 8-count bar with the live progress marker and count label. */
export function buildTimeline(doc: Document, snapshot: Snapshot, send: CommandSink): TimelineBar {
  const root = doc.createElement("div");
  root.className = "timeline";

  const bar = doc.createElement("div");
  bar.className = "segment-bar";
  const cells: HTMLButtonElement[] = snapshot.segments.map((seg) => {
    const cell = button(doc, `seg-${seg.index}`, seg.partial ? `${seg.index + 1}*` : `${seg.index + 1}`, () =>
      send(command("seek_segment", { segment: seg.index })),
    );
    cell.classList.add("segment");
    cell.style.flexGrow = String(seg.end_s - seg.start_s);
    bar.append(cell);
    return cell;
  });

  const marker = doc.createElement("div");
  marker.className = "position-marker";
  const countLabel = doc.createElement("div");
  countLabel.id = "count-label";
  countLabel.className = "count";
  root.append(bar, marker, countLabel);

  return {
    root,
    update(vm: ViewModel): void {
      const s = vm.snapshot;
      if (!s) return;
      const position = vm.frame ? vm.frame.position_s : s.position_s;
      marker.style.left = `${(100 * position) / s.duration_s}%`;
      const count = vm.frame ? vm.frame.count : s.count;
      const segment = vm.frame ? vm.frame.segment : s.current_segment;
      countLabel.textContent = `count ${count}`;
      cells.forEach((cell, i) => {
        cell.classList.toggle("active", i === segment);
        cell.classList.toggle("selected", i === s.selected_segment);
      });
    },
  };
}

function button(doc: Document, id: string, label: string, onClick: () => void): HTMLButtonElement {
  const b = doc.createElement("button");
  b.id = id;
  b.textContent = label;
  b.addEventListener("click", onClick);
  return b;
}

function setPressed(b: HTMLButtonElement, on: boolean): void {
  b.classList.toggle("pressed", on);
  b.setAttribute("aria-pressed", String(on));
}
