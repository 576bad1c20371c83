"""WebSocket transport for the session protocol.

Each connection owns one independent session; messages are JSON texts,
one object per frame, exactly as ``Session.handle_message`` defines them.
"""

from __future__ import annotations

import asyncio
import json
import logging

from websockets.asyncio.server import serve as ws_serve

from .session import Session, SessionConfig

log = logging.getLogger(__name__)


async def _client_handler(ws, cfg: SessionConfig) -> None:
    session = Session(cfg)
    async for raw in ws:
        try:
            msg = json.loads(raw)
        except json.JSONDecodeError as exc:
            await ws.send(json.dumps({"type": "error", "error": f"bad json: {exc}"}))
            continue
        try:
            replies = session.handle_message(msg)
        except Exception as exc:  # a bad message must not kill the connection
            log.exception("message handling failed")
            replies = [{"type": "error", "error": str(exc)}]
        for out in replies:
            await ws.send(json.dumps(out))


async def _run(host: str, port: int, cfg: SessionConfig) -> None:
    async def handler(ws):
        await _client_handler(ws, cfg)

    async with ws_serve(handler, host, port) as server:
        bound = server.sockets[0].getsockname()[1] if server.sockets else port
        # machine-readable readiness line; clients wait for it
        print(json.dumps({"type": "ready", "host": host, "port": bound}), flush=True)
        await asyncio.get_running_loop().create_future()


def serve(host: str = "127.0.0.1", port: int = 8765, cfg: SessionConfig | None = None) -> None:
    """Serve until interrupted. ``port=0`` picks a free port."""
    try:
        asyncio.run(_run(host, port, cfg or SessionConfig()))
    except KeyboardInterrupt:
        pass
