import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { createConnection } from 'node:net';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

export interface Service {
  base: string;
  port: number;
  stateDir: string;
  proc: ChildProcess;
  stop(): Promise<void>;
}

export function tempStateDir(): string {
  return mkdtempSync(join(tmpdir(), 'iemo-ui-'));
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function waitFor(
  check: () => boolean | Promise<boolean>,
  timeoutMs = 20_000,
  label = 'condition',
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (await check()) return;
    await sleep(10);
  }
  throw new Error(`timed out waiting for ${label}`);
}

/** True once something accepts TCP connections on the port. Probing at the
    socket level keeps this independent of the DOM environment's fetch. */
function portOpen(port: number): Promise<boolean> {
  return new Promise((resolve) => {
    const sock = createConnection({ port, host: '127.0.0.1' });
    sock.once('connect', () => { sock.destroy(); resolve(true); });
    sock.once('error', () => resolve(false));
  });
}

/** Launch the real judgment service on a free port and wait until it listens. */
export async function startService(stateDir: string): Promise<Service> {
  for (let attempt = 0; attempt < 4; attempt += 1) {
    const port = 21000 + Math.floor(Math.random() * 20000);
    if (await portOpen(port)) continue; // someone else owns it
    const proc = spawn(
      'iemo',
      ['serve', '--port', String(port), '--state-dir', stateDir],
      { stdio: ['ignore', 'pipe', 'pipe'] },
    );
    let dead = false;
    proc.on('exit', () => { dead = true; });
    const base = `http://127.0.0.1:${port}`;
    const deadline = Date.now() + 20_000;
    while (Date.now() < deadline && !dead) {
      if (await portOpen(port)) {
        return { base, port, stateDir, proc, stop: () => stopProcess(proc) };
      }
      await sleep(50);
    }
    await stopProcess(proc);
  }
  throw new Error('could not start the judgment service');
}

export async function stopProcess(proc: ChildProcess): Promise<void> {
  if (proc.exitCode !== null) return;
  proc.kill('SIGTERM');
  await new Promise<void>((resolve) => {
    const hardKill = setTimeout(() => { proc.kill('SIGKILL'); resolve(); }, 5000);
    proc.on('exit', () => { clearTimeout(hardKill); resolve(); });
  });
}
