/** The five figure kinds rendered from solver CSVs.
 *
 *  Numerical truth lives in the CSVs; these are stylistic reproductions with
 *  the same qualitative layout as the source figures (existence regions shaded
 *  above the boundary curves, belief paths with their cumulative average and a
 *  divergence marker, existence gaps against the tested parameter, and impact
 *  magnitudes against the announcement horizon).
 */

import { SchemaError, Table, columnIndex, numericColumn, stringColumn } from "./csv.js";
import { Chart, PALETTE, finiteExtent } from "./svg.js";

export type FigureKind = "region" | "duration" | "learning-path"
  | "continuous-existence" | "fg-impact";

export const KINDS: FigureKind[] = [
  "region", "duration", "learning-path", "continuous-existence", "fg-impact"];

function conceptsOf(table: Table, prefix: string): string[] {
  return table.header
    .filter((h) => h.startsWith(prefix))
    .map((h) => h.slice(prefix.length));
}

function dedupeSortedBy(xs: number[], ys: number[]): [number[], number[]] {
  const seen = new Map<number, number>();
  for (let i = 0; i < xs.length; i++) seen.set(xs[i], ys[i]);
  const keys = [...seen.keys()].sort((a, b) => a - b);
  return [keys, keys.map((k) => seen.get(k) as number)];
}

export function renderRegion(table: Table): string {
  if (table.rows.length === 0) throw new SchemaError("empty input: no data rows");
  const concepts = conceptsOf(table, "eps_bar_");
  if (concepts.length === 0) throw new SchemaError("missing required column 'eps_bar_*'");
  const axisName = table.header[1] ?? table.header[0];
  const axis = numericColumn(table, axisName);
  const curves = concepts.map((c) => {
    const raw = numericColumn(table, `eps_bar_${c}`);
    return dedupeSortedBy(axis, raw);
  });
  const ally = curves.flatMap(([, ys]) => ys);
  const chart = new Chart(finiteExtent(curves[0][0], 0.02), finiteExtent(ally),
    "Existence regions", axisName, "low-state shock threshold");
  concepts.forEach((c, i) => {
    const [xs, ys] = curves[i];
    chart.shadeAbove(xs, ys, PALETTE[i % PALETTE.length]);
    chart.line(xs, ys, PALETTE[i % PALETTE.length]);
  });
  chart.legend(concepts.map((c, i) => [c, PALETTE[i % PALETTE.length]]));
  return chart.render();
}

export function renderDuration(table: Table): string {
  if (table.rows.length === 0) throw new SchemaError("empty input: no data rows");
  const concepts = conceptsOf(table, "duration_");
  if (concepts.length === 0) throw new SchemaError("missing required column 'duration_*'");
  const eps1 = numericColumn(table, "eps1");
  const series = concepts.map((c) => numericColumn(table, `duration_${c}`));
  const chart = new Chart(finiteExtent(eps1, 0.02), finiteExtent(series.flat()),
    "Maximum expected floor duration", "eps1", "duration (quarters)");
  concepts.forEach((c, i) => chart.line(eps1, series[i], PALETTE[i % PALETTE.length]));
  chart.legend(concepts.map((c, i) => [c, PALETTE[i % PALETTE.length]]));
  return chart.render();
}

function cumulativeAverage(xs: number[]): number[] {
  const out = new Array<number>(xs.length);
  let acc = 0;
  for (let i = 0; i < xs.length; i++) {
    acc += xs[i];
    out[i] = acc / (i + 1);
  }
  return out;
}

export function renderLearningPath(table: Table): string {
  if (table.rows.length === 0) throw new SchemaError("empty input: no data rows");
  const t = numericColumn(table, "t");
  const beliefCols = table.header.filter((h) => h === "pie" || /^pie\d$/.test(h));
  if (beliefCols.length === 0) throw new SchemaError("missing required column 'pie'");
  const diverged = numericColumn(table, "diverged");
  const series = beliefCols.map((c) => numericColumn(table, c));
  const avg = cumulativeAverage(series[0]);
  const chart = new Chart(finiteExtent(t, 0.01),
    finiteExtent(series.flat().concat(avg)),
    "Inflation beliefs under learning", "period", "belief");
  series.forEach((ys, i) => chart.line(t, ys, PALETTE[(i + 2) % PALETTE.length], 1.25));
  chart.line(t, avg, "#cc0000", 2.0);
  const firstDiv = diverged.findIndex((d) => d === 1);
  if (firstDiv >= 0) {
    chart.vline(t[firstDiv], "#a40000", `diverged at t=${t[firstDiv]}`);
  }
  chart.legend(beliefCols.map((c, i) =>
    [c, PALETTE[(i + 2) % PALETTE.length]] as [string, string])
    .concat([["cumulative avg", "#cc0000"]]));
  return chart.render();
}

export function renderContinuousExistence(table: Table): string {
  if (table.rows.length === 0) throw new SchemaError("empty input: no data rows");
  const axisName = table.header[0];
  const axis = numericColumn(table, axisName);
  const gap = numericColumn(table, "gap_at_star");
  const chart = new Chart(finiteExtent(axis, 0.02), finiteExtent(gap.concat([0])),
    "Fixed-point existence margin", axisName, "peak of h(a) - a");
  chart.line(axis, axis.map(() => 0), "#888", 1, "4,4");
  chart.line(axis, gap, PALETTE[0]);
  const exists = numericColumn(table, "exists");
  axis.forEach((x, i) => {
    if (Number.isFinite(gap[i])) {
      chart.marker(x, gap[i], exists[i] === 1 ? PALETTE[3] : PALETTE[1], 2.5);
    }
  });
  chart.legend([["margin", PALETTE[0]], ["two fixed points", PALETTE[3]],
                ["none", PALETTE[1]]]);
  return chart.render();
}

export function renderFgImpact(table: Table): string {
  if (table.rows.length === 0) throw new SchemaError("empty input: no data rows");
  const T = numericColumn(table, "T");
  const kind = stringColumn(table, "kind");
  columnIndex(table, "dpi0_diT");
  const dpi = numericColumn(table, "dpi0_diT");
  const kinds = [...new Set(kind)];
  const chart = new Chart(finiteExtent(T, 0.01),
    finiteExtent(dpi.map(Math.abs).concat([0])),
    "Announcement impact by horizon", "horizon T", "|dpi0/diT|");
  kinds.forEach((k, i) => {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let j = 0; j < T.length; j++) {
      if (kind[j] === k) {
        xs.push(T[j]);
        ys.push(Math.abs(dpi[j]));
      }
    }
    chart.line(xs, ys, PALETTE[i % PALETTE.length]);
  });
  chart.legend(kinds.map((k, i) => [k, PALETTE[i % PALETTE.length]]));
  return chart.render();
}

const RENDERERS: Record<FigureKind, (t: Table) => string> = {
  "region": renderRegion,
  "duration": renderDuration,
  "learning-path": renderLearningPath,
  "continuous-existence": renderContinuousExistence,
  "fg-impact": renderFgImpact,
};

export function render(kind: FigureKind, table: Table): string {
  const fn = RENDERERS[kind];
  if (!fn) {
    throw new SchemaError(`unknown figure kind '${kind}' (choose from ${KINDS.join(", ")})`);
  }
  return fn(table);
}
