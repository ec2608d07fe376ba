import { ApiError } from './api.js';
import type { SessionConfig } from './types.js';

const ALGORITHMS = ['insga2', 'imoead', 'ir2ibea'];
const FAMILIES = [
  'dtlz1', 'dtlz2', 'dtlz3', 'dtlz4', 'dtlz5', 'dtlz6',
  'dtlz1inv', 'dtlz2inv', 'dtlz3inv', 'dtlz4inv',
  'mdtlz1', 'mdtlz2', 'mdtlz3', 'mdtlz4', 'wfg3',
];

function options(values: string[], selected: string): string {
  return values
    .map((v) => `<option value="${v}"${v === selected ? ' selected' : ''}>${v}</option>`)
    .join('');
}

function numberField(name: string, label: string, value: string, step = '1'): string {
  return `
    <label class="field" data-field="${name}">
      <span>${label}</span>
      <input name="${name}" type="number" step="${step}" value="${value}">
      <span class="field-error" hidden></span>
    </label>`;
}

/**
 * Session creation form mirroring the run configuration, plus the abort
 * control. Server-side validation errors land inline next to the field the
 * service named.
 */
export class SessionControls {
  private root: HTMLElement;
  private onCreate: (config: SessionConfig) => void;
  private onAbort: () => void;

  constructor(root: HTMLElement,
              onCreate: (config: SessionConfig) => void,
              onAbort: () => void) {
    this.root = root;
    this.onCreate = onCreate;
    this.onAbort = onAbort;
    this.root.innerHTML = `
      <form class="session-form">
        <label class="field" data-field="algorithm">
          <span>algorithm</span>
          <select name="algorithm">${options(ALGORITHMS, 'imoead')}</select>
          <span class="field-error" hidden></span>
        </label>
        <label class="field" data-field="problem.family">
          <span>problem</span>
          <select name="family">${options(FAMILIES, 'dtlz2')}</select>
          <span class="field-error" hidden></span>
        </label>
        ${numberField('m', 'objectives (m)', '3')}
        ${numberField('N', 'population (N)', '100')}
        ${numberField('max_fe', 'evaluation budget', '30000')}
        ${numberField('tau', 'consultation period', '10')}
        ${numberField('warmup_gens', 'warmup generations', '')}
        ${numberField('mu', 'promising candidates', '10')}
        ${numberField('eta_step', 'weight step', '0.2', '0.05')}
        ${numberField('seed', 'seed', '1')}
        <div class="form-actions">
          <button type="submit">Start session</button>
          <button type="button" class="abort" hidden>Abort session</button>
        </div>
        <p class="form-error" hidden></p>
      </form>`;
    this.root.querySelector('form')!.addEventListener('submit', (ev) => {
      ev.preventDefault();
      this.clearErrors();
      this.onCreate(this.readConfig());
    });
    this.root.querySelector('button.abort')!.addEventListener('click', () => {
      if (window.confirm('Abort this session? The run cannot be resumed.')) {
        this.onAbort();
      }
    });
  }

  private value(name: string): string {
    const el = this.root.querySelector(`[name="${name}"]`) as
      HTMLInputElement | HTMLSelectElement;
    return el.value;
  }

  readConfig(): SessionConfig {
    const config: SessionConfig = {
      algorithm: this.value('algorithm'),
      problem: { family: this.value('family'), m: Number(this.value('m')) },
      N: Number(this.value('N')),
      max_fe: Number(this.value('max_fe')),
      tau: Number(this.value('tau')),
      mu: Number(this.value('mu')),
      eta_step: Number(this.value('eta_step')),
      seed: Number(this.value('seed')),
    };
    // blank means "use the server default"
    if (this.value('warmup_gens') !== '') {
      config.warmup_gens = Number(this.value('warmup_gens'));
    }
    return config;
  }

  /** Map a service rejection onto the field it names. */
  showError(err: unknown): void {
    if (err instanceof ApiError && err.field) {
      // service field paths use the model name for the nested problem block
      const slot = this.root.querySelector(
        `.field[data-field="${err.field}"] .field-error`) ??
        this.root.querySelector(
          `.field[data-field="${err.field.split('.').pop()}"] .field-error`);
      if (slot) {
        (slot as HTMLElement).textContent = err.message;
        (slot as HTMLElement).hidden = false;
        return;
      }
    }
    const general = this.root.querySelector('.form-error') as HTMLElement;
    general.textContent = err instanceof Error ? err.message : String(err);
    general.hidden = false;
  }

  clearErrors(): void {
    for (const el of this.root.querySelectorAll('.field-error, .form-error')) {
      (el as HTMLElement).hidden = true;
      el.textContent = '';
    }
  }

  setAbortVisible(visible: boolean): void {
    (this.root.querySelector('button.abort') as HTMLElement).hidden = !visible;
  }
}
