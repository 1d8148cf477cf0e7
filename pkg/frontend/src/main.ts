import { Client } from "./api.js";
import { ModeratorApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8085";
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app root element");
}
const app = new ModeratorApp(root, new Client(baseUrl));

const sessionId = params.get("session");
if (sessionId) {
  void app.loadSession(sessionId);
}

// handy for poking around from the devtools console
(window as unknown as { moderator: ModeratorApp }).moderator = app;
