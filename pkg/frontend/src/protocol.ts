// JSON message shapes of the session protocol, as the server speaks them.

export type SparseCell = [number, number, number]; // x, y, pressure

export interface FrameMessage {
  type: "frame";
  seq: number;
  t: number;
  cells: SparseCell[];
}

export interface GestureMessage {
  type: "gesture";
  kind: string;
  fingers: number;
  zone: string;
  x: number;
  y: number;
  t_start: number;
  t_end: number;
}

export interface CommandMessage {
  type: "command";
  name: string;
  t: number;
  zone?: string;
  x?: number;
  y?: number;
}

export interface MenuMessage {
  type: "menu";
  level: "hidden" | "main" | "secondary" | "tertiary";
  items: string[];
  selected: number;
}

export interface SceneStroke {
  points: [number, number][];
  color: [number, number, number]; // HSV
  thickness: number;
}

export interface SceneMessage {
  type: "scene";
  t: number;
  strokes: SceneStroke[];
  particles: [number, number][];
  frame_indices: Record<string, number>;
}

export interface DocumentMessage {
  type: "document";
  document: {
    schema: string;
    mode: string;
    assets: {
      id: number;
      origin: [number, number];
      strokes: { points: [number, number][]; color: number[]; thickness: number }[];
    }[];
    [key: string]: unknown;
  };
}

export type ServerMessage =
  | GestureMessage
  | CommandMessage
  | MenuMessage
  | SceneMessage
  | DocumentMessage
  | { type: string; [key: string]: unknown };
