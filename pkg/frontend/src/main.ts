import { CanvasView } from "./canvasview.js";
import { SessionClient } from "./client.js";
import { PadView } from "./padview.js";
import { menuFromMessage, sceneToOps } from "./render.js";

const params = new URLSearchParams(window.location.search);
const wsUrl = params.get("ws") ?? "ws://127.0.0.1:8765";

const padCanvas = document.getElementById("pad") as HTMLCanvasElement;
const sceneCanvas = document.getElementById("scene") as HTMLCanvasElement;
const statusEl = document.getElementById("status") as HTMLElement;

const canvasView = new CanvasView(sceneCanvas);

// toggled by menu invocations server-side; refresh the label lazily
const TOOL_COMMANDS = new Set(["release_menu", "toggle_move_draw", "undo", "confirm"]);

const client = new SessionClient(wsUrl, {
  onMessage: (msg) => {
    switch (msg.type) {
      case "scene": {
        const ops = sceneToOps(msg);
        if (ops === null) {
          console.warn("skipping malformed scene", msg);
          return;
        }
        canvasView.setScene(ops);
        break;
      }
      case "menu": {
        const menu = menuFromMessage(msg);
        if (menu === null) {
          console.warn("skipping malformed menu", msg);
          return;
        }
        canvasView.setMenu(menu);
        break;
      }
      case "command":
        if (TOOL_COMMANDS.has(String(msg.name))) {
          client.send({ type: "get_document" });
        }
        break;
      case "document": {
        const doc = msg.document as { mode?: string } | undefined;
        if (doc?.mode) {
          canvasView.setTool(doc.mode[0].toUpperCase() + doc.mode.slice(1));
        }
        break;
      }
      default:
        break;
    }
  },
  onStatus: (status) => {
    statusEl.textContent = status;
    canvasView.setConnected(status === "open");
  },
});

const pad = new PadView(padCanvas, (frame) => {
  client.send(frame);
});
pad.start();
