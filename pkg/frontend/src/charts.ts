/**
 * String-built SVG charts. No chart library: every view is a pure function
 * from numbers to markup, which keeps rendering deterministic and testable.
 */

const W = 420;
const H = 240;
const PAD = 30;

function svgOpen(cls: string): string {
  return `<svg class="${cls}" viewBox="0 0 ${W} ${H}" ` +
    `preserveAspectRatio="xMidYMid meet" role="img">`;
}

function fmt(v: number): string {
  return Number.isFinite(v) ? v.toPrecision(4) : '?';
}

/** Per-axis [min, max] over rows, widened when degenerate. */
function axisRanges(rows: number[][], m: number): Array<[number, number]> {
  const ranges: Array<[number, number]> = [];
  for (let j = 0; j < m; j++) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const row of rows) {
      if (row[j] < lo) lo = row[j];
      if (row[j] > hi) hi = row[j];
    }
    if (!Number.isFinite(lo)) { lo = 0; hi = 1; }
    if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
    ranges.push([lo, hi]);
  }
  return ranges;
}

/**
 * Two side-by-side bar groups for one candidate pair. Only sensible for a
 * handful of objectives; the caller hides this view for larger m.
 */
export function objectiveBars(a: number[], b: number[]): string {
  const m = a.length;
  const peak = Math.max(1e-12, ...a.map(Math.abs), ...b.map(Math.abs));
  const groupW = (W - 2 * PAD) / m;
  const barW = Math.min(28, groupW / 3);
  const base = H - PAD;
  const scale = (H - 2 * PAD) / peak;

  const parts: string[] = [svgOpen('chart-bars')];
  parts.push(`<line class="axis" x1="${PAD}" y1="${base}" x2="${W - PAD}" y2="${base}"/>`);
  for (let j = 0; j < m; j++) {
    const cx = PAD + groupW * (j + 0.5);
    const ha = Math.abs(a[j]) * scale;
    const hb = Math.abs(b[j]) * scale;
    parts.push(
      `<rect class="bar bar-a" x="${(cx - barW - 1).toFixed(1)}" ` +
      `y="${(base - ha).toFixed(1)}" width="${barW.toFixed(1)}" height="${ha.toFixed(1)}"/>`,
      `<rect class="bar bar-b" x="${(cx + 1).toFixed(1)}" ` +
      `y="${(base - hb).toFixed(1)}" width="${barW.toFixed(1)}" height="${hb.toFixed(1)}"/>`,
      `<text class="tick" x="${cx.toFixed(1)}" y="${H - 8}" text-anchor="middle">f${j + 1}</text>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}

export interface PolyLine {
  f: number[];
  cls: string;
}

/** Parallel-coordinates plot; one polyline per row, normalized per axis. */
export function parallelCoords(rows: PolyLine[], m: number): string {
  const ranges = axisRanges(rows.map((r) => r.f), m);
  const x = (j: number) => PAD + ((W - 2 * PAD) * j) / Math.max(1, m - 1);
  const y = (j: number, v: number) => {
    const [lo, hi] = ranges[j];
    return H - PAD - ((H - 2 * PAD) * (v - lo)) / (hi - lo);
  };

  const parts: string[] = [svgOpen('chart-parallel')];
  for (let j = 0; j < m; j++) {
    parts.push(
      `<line class="axis" x1="${x(j).toFixed(1)}" y1="${PAD}" ` +
      `x2="${x(j).toFixed(1)}" y2="${H - PAD}"/>`,
      `<text class="tick" x="${x(j).toFixed(1)}" y="${H - 8}" text-anchor="middle">f${j + 1}</text>`,
    );
  }
  for (const row of rows) {
    const pts = row.f
      .slice(0, m)
      .map((v, j) => `${x(j).toFixed(1)},${y(j, v).toFixed(1)}`)
      .join(' ');
    parts.push(`<polyline class="pc-line ${row.cls}" points="${pts}" fill="none"/>`);
  }
  parts.push('</svg>');
  return parts.join('');
}

export interface ScatterPoint {
  f: number[];
  nondominated: boolean;
}

// isometric screen basis for the three objective axes
const ISO: Array<[number, number]> = [[-0.866, 0.5], [0.866, 0.5], [0, -1]];

function project(f: number[], m: number): [number, number] {
  if (m === 2) return [f[0], -f[1]];
  let px = 0;
  let py = 0;
  for (let j = 0; j < 3; j++) {
    px += ISO[j][0] * f[j];
    py += ISO[j][1] * f[j];
  }
  return [px, py];
}

/**
 * Population scatter for m <= 3 (m=3 uses an isometric projection of the
 * objective axes). Nondominated members and the golden point get their own
 * marker classes. Returns inner markup only; the caller owns the <svg> so
 * a pan/zoom transform can survive re-renders.
 */
export function scatterBody(points: ScatterPoint[], golden: number[] | null, m: number): string {
  const projected = points.map((p) => project(p.f, m));
  const all = golden ? [...projected, project(golden, m)] : projected;
  let xlo = Infinity; let xhi = -Infinity; let ylo = Infinity; let yhi = -Infinity;
  for (const [px, py] of all) {
    if (px < xlo) xlo = px;
    if (px > xhi) xhi = px;
    if (py < ylo) ylo = py;
    if (py > yhi) yhi = py;
  }
  if (!Number.isFinite(xlo)) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }
  if (xhi - xlo < 1e-12) { xlo -= 0.5; xhi += 0.5; }
  if (yhi - ylo < 1e-12) { ylo -= 0.5; yhi += 0.5; }
  const sx = (W - 2 * PAD) / (xhi - xlo);
  const sy = (H - 2 * PAD) / (yhi - ylo);
  const toX = (px: number) => PAD + (px - xlo) * sx;
  const toY = (py: number) => H - PAD - (py - ylo) * sy;

  const parts: string[] = [];
  points.forEach((p, i) => {
    const [px, py] = projected[i];
    const cls = p.nondominated ? 'pt nondominated' : 'pt dominated';
    parts.push(
      `<circle class="${cls}" cx="${toX(px).toFixed(1)}" cy="${toY(py).toFixed(1)}" ` +
      `r="${p.nondominated ? 3.2 : 2.2}"/>`,
    );
  });
  if (golden) {
    const [px, py] = project(golden, m);
    const gx = toX(px).toFixed(1);
    const gy = toY(py).toFixed(1);
    parts.push(
      `<path class="pt golden" d="M ${gx} ${gy} m -5 0 l 5 -5 l 5 5 l -5 5 z"/>`,
    );
  }
  return parts.join('');
}

export function formatVector(f: number[]): string {
  return `(${f.map(fmt).join(', ')})`;
}
