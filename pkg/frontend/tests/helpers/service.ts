// Spawn the Python review service with a bundled session for integration
// tests. The helper prints one JSON line with the service URL, then blocks.

import { spawn, type ChildProcess } from "node:child_process";
import { once } from "node:events";
import { createInterface } from "node:readline";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface ServiceInfo {
  url: string;
  labels: string;
  session_id: string;
  stop: () => Promise<void>;
}

export async function startService(scenario: "vaccine" | "tourism"): Promise<ServiceInfo> {
  const script = join(dirname(fileURLToPath(import.meta.url)), "serve_session.py");
  const child: ChildProcess = spawn("python3", [script, scenario], {
    stdio: ["ignore", "pipe", "inherit"],
  });
  const lines = createInterface({ input: child.stdout! });
  const first = await Promise.race([
    once(lines, "line").then(([line]) => line as string),
    once(child, "exit").then(() => {
      throw new Error("review service exited before printing its URL");
    }),
  ]);
  const info = JSON.parse(first) as { url: string; labels: string; session_id: string };
  return {
    ...info,
    stop: async () => {
      child.kill("SIGTERM");
      await once(child, "exit").catch(() => undefined);
    },
  };
}
