// Thin WebSocket wrapper with an injectable constructor so tests can use
// the `ws` package in Node.

export type ClientStatus = "connecting" | "open" | "closed";

export interface ClientOptions {
  onMessage: (msg: Record<string, unknown>) => void;
  onStatus?: (status: ClientStatus) => void;
}

type WebSocketLike = {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
};

export class SessionClient {
  status: ClientStatus = "connecting";
  private ws: WebSocketLike;
  private opts: ClientOptions;

  constructor(
    url: string,
    opts: ClientOptions,
    ctor: new (url: string) => WebSocketLike = WebSocket as unknown as new (url: string) => WebSocketLike,
  ) {
    this.opts = opts;
    this.ws = new ctor(url);
    this.ws.onopen = () => this.setStatus("open");
    this.ws.onclose = () => this.setStatus("closed");
    this.ws.onerror = () => this.setStatus("closed");
    this.ws.onmessage = (ev) => {
      let parsed: unknown;
      try {
        parsed = JSON.parse(String(ev.data));
      } catch {
        console.warn("skipping unparseable message", ev.data);
        return;
      }
      this.opts.onMessage(parsed as Record<string, unknown>);
    };
  }

  /** Input is suppressed unless the connection is open. */
  send(obj: object): boolean {
    if (this.status !== "open") {
      return false;
    }
    this.ws.send(JSON.stringify(obj));
    return true;
  }

  close(): void {
    this.ws.close();
  }

  private setStatus(status: ClientStatus): void {
    this.status = status;
    this.opts.onStatus?.(status);
  }
}
