/**
 * Studio wiring: pick a bundle, join its session, and run the render loop.
 *
 * Query parameters:
 *   ?server=http://127.0.0.1:8000   gateway base (default: page origin)
 *   ?bundle=<id>                    bundle id (default: first listed)
 *   ?provider=replay|none           user-pose source (default: replay)
 */

import { bindAudioElement } from "./audio.js";
import { SessionClient, fetchBundles, fetchManifest, fetchMotion } from "./client.js";
import { buildControlPanel, buildTimeline } from "./controls.js";
import { ReferencePanel, UserPanel } from "./panels.js";
import type { Snapshot, Vec3 } from "./protocol.js";
import { NonePoseProvider, ReplayPoseProvider, type PoseProvider } from "./provider.js";
import {
  applyServerMessage,
  initialViewModel,
  withCalibration,
  withConnection,
  withSelectedWebcam,
  withWebcam,
  type ViewModel,
} from "./viewmodel.js";

const CALIBRATION_FRAMES = 30;

async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const base = params.get("server") ?? location.origin;
  const providerKind = params.get("provider") ?? "replay";

  let bundleId = params.get("bundle");
  if (!bundleId) {
    const bundles = await fetchBundles(base);
    if (bundles.length === 0) {
      status("no bundles on the server — run `dancekit generate`, then reload");
      return;
    }
    bundleId = bundles[0]!.id;
  }

  const manifest = await fetchManifest(base, bundleId);
  const motion = await fetchMotion(base, bundleId);
  document.title = `studio — ${manifest.title}`;

  let vm: ViewModel = initialViewModel();

  const client = new SessionClient(base, bundleId);
  const send = (cmd: Parameters<SessionClient["sendCommand"]>[0]) => {
    if (client.connected) client.sendCommand(cmd);
  };

  // Panels.
  const userPanel = new UserPanel(
    el<HTMLCanvasElement>("user-overlay"),
    el("user-banner"),
    manifest.emphasized_joints,
  );
  userPanel.prime(motion.affordance.frames);
  const referencePanel = new ReferencePanel(el<HTMLCanvasElement>("reference-canvas"), motion.reference.frames);

  // Controls + timeline (timeline needs the segment table, so it waits for
  // the first snapshot).
  const controls = buildControlPanel(document, send);
  el("controls-slot").append(controls.root);
  let timeline: ReturnType<typeof buildTimeline> | null = null;

  const syncAudio = bindAudioElement(el<HTMLAudioElement>("audio"), base);

  // The user-pose provider feeds calibration and (optionally) live frames.
  const provider: PoseProvider =
    providerKind === "none"
      ? new NonePoseProvider()
      : new ReplayPoseProvider(motion.reference.frames as Vec3[][], motion.reference.fps);

  let streaming = false;
  provider.start((positions) => {
    if (streaming && client.connected) {
      client.send({ type: "user_pose", frame: { t: 0, positions } });
    }
  });

  el("calibrate").addEventListener("click", () => {
    if (!client.connected) return;
    vm = withCalibration(vm, "collecting");
    client.send({ type: "calibration_start" });
    let sent = 0;
    const collector = (positions: Vec3[]) => {
      if (sent >= CALIBRATION_FRAMES) return;
      client.send({ type: "calibration_frame", frame: { t: 0, positions } });
      sent += 1;
      if (sent === CALIBRATION_FRAMES) {
        client.send({ type: "calibration_finish" });
        streaming = true;
      }
    };
    const tap = new ReplayPoseProvider(motion.reference.frames as Vec3[][], motion.reference.fps);
    tap.start((positions) => {
      collector(positions);
      if (sent >= CALIBRATION_FRAMES) tap.stop();
    });
  });

  client.connect({
    onOpen: () => {
      vm = withConnection(vm, "open");
    },
    onClose: () => {
      vm = withConnection(vm, "closed");
    },
    onMessage: (msg) => {
      vm = applyServerMessage(vm, msg);
      if (msg.type === "state" && !timeline) {
        timeline = buildTimeline(document, msg.snapshot as Snapshot, send);
        el("timeline-slot").append(timeline.root);
      }
    },
  });

  const webcamSelect = el<HTMLSelectElement>("webcam-select");
  const openWebcam = () => {
    void startWebcam(vm.selectedWebcam).then((state) => {
      vm = withWebcam(vm, state);
      if (state === "active") void listWebcams(webcamSelect, vm.selectedWebcam);
    });
  };
  openWebcam();
  el("webcam-retry").addEventListener("click", openWebcam);
  webcamSelect.addEventListener("change", () => {
    vm = withSelectedWebcam(vm, webcamSelect.value || null);
    openWebcam();
  });

  const renderLoop = () => {
    controls.update(vm);
    timeline?.update(vm);
    userPanel.draw(vm);
    referencePanel.draw(vm);
    if (vm.snapshot) {
      syncAudio(vm.snapshot, vm.frame ? vm.frame.position_s : vm.snapshot.position_s);
    }
    status(statusLine(vm, bundleId!));
    requestAnimationFrame(renderLoop);
  };
  requestAnimationFrame(renderLoop);
}

async function startWebcam(deviceId: string | null): Promise<"active" | "denied" | "unavailable"> {
  const video = el<HTMLVideoElement>("webcam");
  if (!navigator.mediaDevices?.getUserMedia) return "unavailable";
  try {
    const stream = await navigator.mediaDevices.getUserMedia({
      video: deviceId ? { deviceId: { exact: deviceId } } : true,
      audio: false,
    });
    (video.srcObject as MediaStream | null)?.getTracks().forEach((t) => t.stop());
    video.srcObject = stream;
    await video.play();
    return "active";
  } catch {
    return "denied";
  }
}

async function listWebcams(select: HTMLSelectElement, selected: string | null): Promise<void> {
  if (!navigator.mediaDevices?.enumerateDevices) return;
  const cameras = (await navigator.mediaDevices.enumerateDevices()).filter((d) => d.kind === "videoinput");
  select.innerHTML = "";
  cameras.forEach((cam, i) => {
    const option = document.createElement("option");
    option.value = cam.deviceId;
    option.textContent = cam.label || `camera ${i + 1}`;
    select.append(option);
  });
  if (selected) select.value = selected;
}

function statusLine(vm: ViewModel, bundleId: string): string {
  const bits = [`bundle ${bundleId}`, vm.connection, `calibration: ${vm.calibration}`];
  if (vm.lastError) bits.push(`last error: ${vm.lastError.code}`);
  return bits.join(" · ");
}

function status(text: string): void {
  el("status").textContent = text;
}

function el<T extends HTMLElement = HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

void boot().catch((err) => status(`failed to start: ${err}`));
