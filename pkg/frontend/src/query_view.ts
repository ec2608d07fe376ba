import { formatVector, objectiveBars, parallelCoords } from './charts.js';
import type { Outcome, QueryCard } from './types.js';

const BAR_LIMIT = 6; // beyond this the per-objective bars stop being readable

/**
 * The pairwise comparison card. Shows both candidates' objective values
 * numerically and graphically and exposes exactly the three judgment
 * choices. Input is disabled while a submission is in flight so a judgment
 * can never be sent twice.
 */
export class QueryView {
  private root: HTMLElement;
  private onJudge: (pairIndex: number, outcome: Outcome) => void;
  private current: QueryCard | null = null;
  private busy = false;

  constructor(root: HTMLElement, onJudge: (pairIndex: number, outcome: Outcome) => void) {
    this.root = root;
    this.onJudge = onJudge;
    this.root.addEventListener('click', (ev) => {
      const target = ev.target as HTMLElement;
      const outcome = target.getAttribute('data-outcome') as Outcome | null;
      if (!outcome || this.busy || !this.current) return;
      this.onJudge(this.current.pair_index, outcome);
    });
  }

  render(query: QueryCard | null): void {
    this.current = query;
    if (!query) {
      this.root.innerHTML =
        '<p class="placeholder">No pending query; the optimizer is running.</p>';
      return;
    }
    const m = query.a.f.length;
    const bars = m <= BAR_LIMIT ? objectiveBars(query.a.f, query.b.f) : '';
    const lines = parallelCoords(
      [{ f: query.a.f, cls: 'candidate-a' }, { f: query.b.f, cls: 'candidate-b' }], m);
    this.root.innerHTML = `
      <div class="query-card" data-pair-index="${query.pair_index}">
        <p class="query-progress">Consultation ${query.consultation}, pair
          ${query.pair_in_consultation + 1} of ${query.total_pairs}
          (overall #${query.pair_index})</p>
        <div class="candidates">
          <div class="candidate"><span class="swatch swatch-a"></span>
            A ${formatVector(query.a.f)}</div>
          <div class="candidate"><span class="swatch swatch-b"></span>
            B ${formatVector(query.b.f)}</div>
        </div>
        ${bars}
        ${lines}
        <div class="choices">
          <button data-outcome="better">A is better</button>
          <button data-outcome="indifferent">Indifferent</button>
          <button data-outcome="worse">A is worse</button>
        </div>
        <div class="banner" hidden></div>
      </div>`;
    this.setBusy(this.busy);
  }

  /** Disable the three choices while a submission is in flight. */
  setBusy(busy: boolean): void {
    this.busy = busy;
    for (const btn of this.root.querySelectorAll('button[data-outcome]')) {
      (btn as HTMLButtonElement).disabled = busy;
    }
  }

  /** Service unreachable or submission failed: show it, lose nothing. */
  showBanner(message: string | null): void {
    const banner = this.root.querySelector('.banner') as HTMLElement | null;
    if (!banner) return;
    if (message) {
      banner.textContent = `${message} (retrying)`;
      banner.hidden = false;
    } else {
      banner.hidden = true;
    }
  }

  pendingPairIndex(): number | null {
    return this.current ? this.current.pair_index : null;
  }
}
