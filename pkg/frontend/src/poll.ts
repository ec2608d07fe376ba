// Sequential polling: the next tick is scheduled only after the previous
// handler settles, so polls can never overlap or arrive out of order.

export interface Poller {
  stop(): void;
}

export function startPolling(tick: () => Promise<void>, intervalMs: number): Poller {
  let stopped = false;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const loop = async () => {
    if (stopped) return;
    try {
      await tick();
    } catch {
      // tick handlers surface their own errors; keep polling
    }
    if (!stopped) timer = setTimeout(loop, intervalMs);
  };
  timer = setTimeout(loop, 0);

  return {
    stop() {
      stopped = true;
      if (timer !== null) clearTimeout(timer);
    },
  };
}
