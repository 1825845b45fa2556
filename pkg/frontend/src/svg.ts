/** Minimal deterministic SVG chart builder: no dates, no randomness, pure
 *  string assembly, so identical inputs give identical bytes. */

export interface Extent {
  min: number;
  max: number;
}

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 40, right: 24, bottom: 48, left: 72 };

export const PALETTE = ["#3465a4", "#cc0000", "#2e3436", "#4e9a06", "#f57900",
                        "#75507b"];

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return v > 0 ? "inf" : "-inf";
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-4) return v.toExponential(3).replace(/e([+-])(\d)$/, "e$10$2");
  return String(Number(v.toPrecision(6)));
}

export function finiteExtent(values: number[], pad = 0.05): Extent {
  const xs = values.filter((v) => Number.isFinite(v));
  if (xs.length === 0) return { min: -1, max: 1 };
  let lo = Math.min(...xs);
  let hi = Math.max(...xs);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const w = hi - lo;
  return { min: lo - pad * w, max: hi + pad * w };
}

export function ticks(e: Extent, count = 6): number[] {
  const span = e.max - e.min;
  const step0 = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(e.min / step) * step;
  const out: number[] = [];
  for (let v = start; v <= e.max + 1e-12 * span; v += step) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

export class Scale {
  constructor(readonly domain: Extent, readonly lo: number, readonly hi: number) {}

  at(v: number): number {
    const t = (v - this.domain.min) / (this.domain.max - this.domain.min);
    const clamped = Math.max(-0.2, Math.min(1.2, t));
    return this.lo + clamped * (this.hi - this.lo);
  }
}

export class Chart {
  private parts: string[] = [];
  readonly x: Scale;
  readonly y: Scale;

  constructor(xdom: Extent, ydom: Extent,
              readonly title: string, readonly xlabel: string, readonly ylabel: string) {
    this.x = new Scale(xdom, MARGIN.left, WIDTH - MARGIN.right);
    this.y = new Scale(ydom, HEIGHT - MARGIN.bottom, MARGIN.top);
  }

  private px(v: number): string {
    return String(Math.round(v * 100) / 100);
  }

  line(xs: number[], ys: number[], color: string, width = 1.75, dash = ""): void {
    // split the polyline at non-finite points so gaps stay gaps
    let seg: string[] = [];
    const flush = () => {
      if (seg.length === 1) {
        const [cx, cy] = seg[0].split(",");
        this.parts.push(`<circle cx="${cx}" cy="${cy}" r="2.5" fill="${color}"/>`);
      } else if (seg.length > 1) {
        const d = dash ? ` stroke-dasharray="${dash}"` : "";
        this.parts.push(`<polyline points="${seg.join(" ")}" fill="none" ` +
          `stroke="${color}" stroke-width="${width}"${d}/>`);
      }
      seg = [];
    };
    for (let i = 0; i < xs.length; i++) {
      if (Number.isFinite(xs[i]) && Number.isFinite(ys[i])) {
        seg.push(`${this.px(this.x.at(xs[i]))},${this.px(this.y.at(ys[i]))}`);
      } else {
        flush();
      }
    }
    flush();
  }

  marker(x: number, y: number, color: string, r = 3): void {
    this.parts.push(`<circle cx="${this.px(this.x.at(x))}" cy="${this.px(this.y.at(y))}" ` +
      `r="${r}" fill="${color}"/>`);
  }

  /** Shade the area between a curve and the top of the plot. */
  shadeAbove(xs: number[], ys: number[], color: string, opacity = 0.12): void {
    const pts: string[] = [];
    const bottom = this.y.domain.min;
    for (let i = 0; i < xs.length; i++) {
      const y = Number.isFinite(ys[i]) ? ys[i] : bottom;
      pts.push(`${this.px(this.x.at(xs[i]))},${this.px(this.y.at(y))}`);
    }
    if (pts.length < 2) return;
    const x0 = this.px(this.x.at(xs[0]));
    const x1 = this.px(this.x.at(xs[xs.length - 1]));
    const top = this.px(MARGIN.top);
    this.parts.push(`<polygon points="${x0},${top} ${pts.join(" ")} ${x1},${top}" ` +
      `fill="${color}" fill-opacity="${opacity}" stroke="none"/>`);
  }

  vline(x: number, color: string, label?: string): void {
    const cx = this.px(this.x.at(x));
    this.parts.push(`<line x1="${cx}" y1="${MARGIN.top}" x2="${cx}" ` +
      `y2="${HEIGHT - MARGIN.bottom}" stroke="${color}" stroke-width="1.25" ` +
      `stroke-dasharray="4,3"/>`);
    if (label) {
      this.parts.push(`<text x="${cx}" y="${MARGIN.top - 6}" font-size="11" ` +
        `text-anchor="middle" fill="${color}">${label}</text>`);
    }
  }

  legend(entries: [string, string][]): void {
    entries.forEach(([label, color], i) => {
      const y = MARGIN.top + 10 + 16 * i;
      const x = WIDTH - MARGIN.right - 150;
      this.parts.push(`<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" ` +
        `stroke="${color}" stroke-width="2"/>`);
      this.parts.push(`<text x="${x + 28}" y="${y + 4}" font-size="12">${label}</text>`);
    });
  }

  render(): string {
    const axes: string[] = [];
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    axes.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" ` +
      `fill="none" stroke="#888" stroke-width="1"/>`);
    for (const t of ticks(this.x.domain)) {
      const cx = this.px(this.x.at(t));
      axes.push(`<line x1="${cx}" y1="${y0}" x2="${cx}" y2="${y0 + 5}" stroke="#888"/>`);
      axes.push(`<text x="${cx}" y="${y0 + 18}" font-size="11" text-anchor="middle">` +
        `${fmt(t)}</text>`);
    }
    for (const t of ticks(this.y.domain)) {
      const cy = this.px(this.y.at(t));
      axes.push(`<line x1="${x0 - 5}" y1="${cy}" x2="${x0}" y2="${cy}" stroke="#888"/>`);
      axes.push(`<text x="${x0 - 8}" y="${cy}" font-size="11" text-anchor="end" ` +
        `dominant-baseline="middle">${fmt(t)}</text>`);
    }
    const labels = [
      `<text x="${(x0 + x1) / 2}" y="22" font-size="15" text-anchor="middle" ` +
        `font-weight="bold">${this.title}</text>`,
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 10}" font-size="12" ` +
        `text-anchor="middle">${this.xlabel}</text>`,
      `<text x="16" y="${(y0 + y1) / 2}" font-size="12" text-anchor="middle" ` +
        `transform="rotate(-90 16 ${(y0 + y1) / 2})">${this.ylabel}</text>`,
    ];
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      ...axes,
      ...this.parts,
      ...labels,
      `</svg>`,
      ``,
    ].join("\n");
  }
}
