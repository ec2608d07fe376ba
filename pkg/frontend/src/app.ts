import { ApiError, SessionApi } from './api.js';
import { SessionControls } from './controls.js';
import { startPolling, type Poller } from './poll.js';
import { PopulationPanel } from './population_view.js';
import { QueryView } from './query_view.js';
import type { Outcome, SessionConfig, SessionState } from './types.js';

export interface AppElements {
  status: HTMLElement;
  controls: HTMLElement;
  query: HTMLElement;
  population: HTMLElement;
  history?: HTMLElement;
}

export interface AppOptions {
  pollMs?: number;
}

/**
 * Single-page wiring. The client is deliberately thin: every piece of
 * rendered state comes from the service, one mutation may be in flight at
 * a time, and a judgment only counts once the service acknowledged it.
 */
export class App {
  readonly api: SessionApi;
  readonly queryView: QueryView;
  readonly populationPanel: PopulationPanel;
  readonly controls: SessionControls;

  sessionId: string | null = null;
  private statusEl: HTMLElement;
  private historyEl: HTMLElement | null;
  private poller: Poller | null = null;
  private pollMs: number;
  private inFlight = false;
  private lastPairIndex = -1;
  // only acknowledged judgments land here; resets with the page
  private recorded: { pair: number; outcome: Outcome }[] = [];

  constructor(api: SessionApi, els: AppElements, opts: AppOptions = {}) {
    this.api = api;
    this.statusEl = els.status;
    this.historyEl = els.history ?? null;
    this.pollMs = opts.pollMs ?? 1000;
    this.queryView = new QueryView(els.query, (pair, outcome) => {
      void this.judge(pair, outcome);
    });
    this.populationPanel = new PopulationPanel(els.population);
    this.controls = new SessionControls(
      els.controls,
      (config) => { void this.create(config); },
      () => { void this.abort(); },
    );
    this.queryView.render(null);
    this.populationPanel.render(null);
    this.renderHistory();
  }

  /** Create a session from the form, or surface the rejection inline. */
  async create(config: SessionConfig): Promise<void> {
    try {
      const { session_id } = await this.api.createSession(config);
      this.attach(session_id);
    } catch (err) {
      this.controls.showError(err);
    }
  }

  /** Attach to a session (fresh, or restored from the URL after a reload). */
  attach(sessionId: string): void {
    this.sessionId = sessionId;
    this.lastPairIndex = -1;
    this.controls.setAbortVisible(true);
    window.location.hash = `session=${sessionId}`;
    this.poller?.stop();
    this.poller = startPolling(() => this.tick(), this.pollMs);
  }

  private async tick(): Promise<void> {
    if (!this.sessionId) return;
    let state: SessionState;
    try {
      state = await this.api.getState(this.sessionId);
    } catch (err) {
      this.queryView.showBanner('service unreachable');
      return;
    }
    this.renderStatus(state);

    if (state.phase === 'awaiting_judgment') {
      try {
        const { query } = await this.api.getQuery(this.sessionId);
        // stale polls must never step the card backwards
        if (query && query.pair_index >= this.lastPairIndex) {
          if (query.pair_index !== this.queryView.pendingPairIndex()) {
            this.queryView.render(query);
          }
          this.lastPairIndex = query.pair_index;
        }
        this.queryView.showBanner(null);
      } catch {
        this.queryView.showBanner('service unreachable');
      }
    } else if (this.queryView.pendingPairIndex() !== null) {
      this.queryView.render(null);
    }

    try {
      this.populationPanel.render(await this.api.getPopulation(this.sessionId));
    } catch {
      // status banner already covers unreachable; keep the last snapshot
    }

    if (state.phase === 'finished' || state.phase === 'aborted') {
      this.poller?.stop();
      this.poller = null;
      this.controls.setAbortVisible(false);
    }
  }

  /** Submit one judgment; the card stays disabled until the ack lands. */
  async judge(pairIndex: number, outcome: Outcome): Promise<void> {
    if (this.inFlight || !this.sessionId) return;
    this.inFlight = true;
    this.queryView.setBusy(true);
    try {
      await this.api.submitJudgment(this.sessionId, pairIndex, outcome);
      this.recorded.push({ pair: pairIndex, outcome });
      this.renderHistory();
      this.queryView.showBanner(null);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'conflict') {
        // already recorded server-side; the next poll moves us forward
      } else {
        this.queryView.showBanner('judgment not recorded');
        return;
      }
    } finally {
      this.inFlight = false;
      this.queryView.setBusy(false);
    }
    await this.refreshQuery();
  }

  /** Pull the next pending pair right after an ack instead of waiting out
      the poll interval. */
  private async refreshQuery(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const { query } = await this.api.getQuery(this.sessionId);
      if (query && query.pair_index > this.lastPairIndex) {
        this.queryView.render(query);
        this.lastPairIndex = query.pair_index;
      } else if (!query) {
        this.queryView.render(null);
      }
    } catch {
      // the regular poll will retry
    }
  }

  /** Halt polling, e.g. when the page is torn down. */
  stop(): void {
    this.poller?.stop();
    this.poller = null;
  }

  async abort(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.abortSession(this.sessionId);
    } catch (err) {
      this.controls.showError(err);
    }
  }

  /** Judgments acknowledged by the service since this page loaded. */
  private renderHistory(): void {
    if (!this.historyEl) return;
    const items = this.recorded.slice(-30).reverse()
      .map((r) => `<li>pair #${r.pair}: ${r.outcome}</li>`)
      .join('');
    this.historyEl.innerHTML =
      `<p class="history-head">${this.recorded.length} recorded this visit</p>` +
      `<ul class="history">${items}</ul>`;
  }

  private renderStatus(state: SessionState): void {
    const consult = state.current_consultation;
    const progress = consult
      ? `, consultation ${state.consultations}: ${consult.answered}/${consult.total_pairs} pairs`
      : '';
    this.statusEl.textContent =
      `${state.algorithm} on ${state.problem.family} (m=${state.problem.m}): ` +
      `${state.phase}, generation ${state.generation}, ${state.fe_used} evaluations, ` +
      `${state.answered_pairs} judgments${progress}` +
      (state.error ? ` [error: ${state.error}]` : '');
  }
}

/** Browser entry point: bind to the static page and restore from the URL. */
export function mount(): App {
  const api = new SessionApi('');
  const app = new App(api, {
    status: document.getElementById('status')!,
    controls: document.getElementById('controls')!,
    query: document.getElementById('query')!,
    population: document.getElementById('population')!,
    history: document.getElementById('history') ?? undefined,
  });
  const match = window.location.hash.match(/session=([0-9a-f]+)/);
  if (match) app.attach(match[1]);
  return app;
}
