/**
 * Gateway access: one WebSocket session plus the HTTP bundle endpoints.
 * The socket factory is injectable so tests can drive the client without
 * a network.
 */

import {
  type ClientMessage,
  type Manifest,
  type MotionDocument,
  type ServerMessage,
  type SessionCommand,
  decodeServer,
  encodeClient,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "close", cb: () => void): void;
  addEventListener(type: "message", cb: (ev: { data: unknown }) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionHandlers {
  onMessage: (msg: ServerMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class SessionClient {
  private socket: SocketLike | null = null;
  private readonly wsBase: string;

  constructor(
    private readonly httpBase: string,
    private readonly bundleId: string,
    private readonly socketFactory: SocketFactory = (url) => new WebSocket(url) as unknown as SocketLike,
  ) {
    this.wsBase = httpBase.replace(/^http/, "ws");
  }

  connect(handlers: SessionHandlers): void {
    if (this.socket) return;
    const socket = this.socketFactory(`${this.wsBase}/session/${this.bundleId}`);
    socket.addEventListener("open", () => handlers.onOpen?.());
    socket.addEventListener("close", () => {
      this.socket = null;
      handlers.onClose?.();
    });
    socket.addEventListener("message", (ev) => {
      let msg: ServerMessage;
      try {
        msg = decodeServer(String(ev.data));
      } catch (err) {
        console.warn("dropping unreadable server message", err);
        return;
      }
      handlers.onMessage(msg);
    });
    this.socket = socket;
  }

  get connected(): boolean {
    return this.socket !== null;
  }

  send(msg: ClientMessage): void {
    if (!this.socket) throw new Error("session not connected");
    this.socket.send(encodeClient(msg));
  }

  sendCommand(cmd: SessionCommand): void {
    this.send({ type: "command", command: cmd });
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}

export async function fetchBundles(base: string): Promise<Array<{ id: string; title: string }>> {
  const doc = await getJson(`${base}/bundles`);
  return (doc as { bundles: Array<{ id: string; title: string }> }).bundles;
}

export async function fetchManifest(base: string, id: string): Promise<Manifest> {
  return (await getJson(`${base}/bundles/${id}/manifest`)) as Manifest;
}

export async function fetchMotion(base: string, id: string): Promise<MotionDocument> {
  return (await getJson(`${base}/bundles/${id}/motion`)) as MotionDocument;
}

/** URL of a pre-rendered audio variant at a playback rate. */
export function audioUrl(base: string, id: string, variant: string, rate: number): string {
  return `${base}/bundles/${id}/audio/${variant}?rate=${rate}`;
}

async function getJson(url: string): Promise<unknown> {
  const resp = await fetch(url);
  if (!resp.ok) throw new Error(`GET ${url} -> ${resp.status}`);
  return resp.json();
}
