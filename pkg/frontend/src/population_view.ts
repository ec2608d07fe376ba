import { parallelCoords, scatterBody } from './charts.js';
import type { PopulationView as Snapshot } from './types.js';

/**
 * Evolving population: scatter with golden-point marker for m <= 3,
 * parallel coordinates above that, nondominated members highlighted.
 *
 * The pan/zoom transform lives outside the re-render path: polling swaps
 * the plot body but reapplies the stored transform, so a refresh never
 * resets the user's viewport.
 */
export class PopulationPanel {
  private root: HTMLElement;
  private golden: number[] | null;
  private zoom = { k: 1, tx: 0, ty: 0 };
  private dragFrom: { x: number; y: number } | null = null;

  constructor(root: HTMLElement, golden: number[] | null = null) {
    this.root = root;
    this.golden = golden;
    this.root.addEventListener('wheel', (ev) => this.onWheel(ev as WheelEvent));
    this.root.addEventListener('pointerdown', (ev) => {
      this.dragFrom = { x: (ev as PointerEvent).clientX, y: (ev as PointerEvent).clientY };
    });
    this.root.addEventListener('pointermove', (ev) => {
      if (!this.dragFrom) return;
      const p = ev as PointerEvent;
      this.zoom.tx += p.clientX - this.dragFrom.x;
      this.zoom.ty += p.clientY - this.dragFrom.y;
      this.dragFrom = { x: p.clientX, y: p.clientY };
      this.applyTransform();
    });
    this.root.addEventListener('pointerup', () => { this.dragFrom = null; });
  }

  render(snapshot: Snapshot | null): void {
    if (!snapshot || snapshot.population.length === 0) {
      this.root.innerHTML = '<p class="placeholder">No population snapshot yet.</p>';
      return;
    }
    const m = snapshot.population[0].f.length;
    const meta =
      `<p class="pop-meta">generation ${snapshot.generation}, ` +
      `${snapshot.fe_used} evaluations, ${snapshot.population.length} members</p>`;
    if (m > 3) {
      const rows = snapshot.population.map((p) => ({
        f: p.f,
        cls: p.rank === 0 ? 'member nondominated' : 'member dominated',
      }));
      this.root.innerHTML = meta + parallelCoords(rows, m);
      return;
    }
    const body = scatterBody(
      snapshot.population.map((p) => ({ f: p.f, nondominated: p.rank === 0 })),
      this.golden, m);
    this.root.innerHTML =
      `${meta}<svg class="chart-scatter" viewBox="0 0 420 240" ` +
      `preserveAspectRatio="xMidYMid meet"><g class="plot">${body}</g></svg>`;
    this.applyTransform();
  }

  setGolden(golden: number[] | null): void {
    this.golden = golden;
  }

  private onWheel(ev: WheelEvent): void {
    const plot = this.root.querySelector('g.plot');
    if (!plot) return;
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    this.zoom.k = Math.min(20, Math.max(0.2, this.zoom.k * factor));
    this.applyTransform();
  }

  private applyTransform(): void {
    const plot = this.root.querySelector('g.plot');
    if (plot) {
      plot.setAttribute('transform',
        `translate(${this.zoom.tx} ${this.zoom.ty}) scale(${this.zoom.k})`);
    }
  }

  transform(): { k: number; tx: number; ty: number } {
    return { ...this.zoom };
  }
}
