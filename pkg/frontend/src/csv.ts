/** CSV tables as written by the solver CLI: header row, numeric or label cells,
 *  "+inf"/"-inf" for infinities and empty cells for missing values. */

export type Cell = number | string;

export interface Table {
  header: string[];
  rows: Cell[][];
}

export class SchemaError extends Error {}

function parseCell(s: string): Cell {
  if (s === "") return NaN;
  if (s === "+inf") return Infinity;
  if (s === "-inf") return -Infinity;
  const v = Number(s);
  return Number.isNaN(v) && s.trim() !== "NaN" ? s : v;
}

export function parseCsv(text: string): Table {
  const lines = text.replace(/\r\n/g, "\n").split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty input: no header row");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(",").map(parseCell));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `row width ${row.length} does not match header width ${header.length}`);
    }
  }
  return { header, rows };
}

/** Column index lookup that names the missing column in its error. */
export function columnIndex(table: Table, name: string): number {
  const i = table.header.indexOf(name);
  if (i < 0) {
    throw new SchemaError(`missing required column '${name}' ` +
      `(have: ${table.header.join(", ")})`);
  }
  return i;
}

export function numericColumn(table: Table, name: string): number[] {
  const i = columnIndex(table, name);
  return table.rows.map((r) => {
    const v = r[i];
    return typeof v === "number" ? v : NaN;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const i = columnIndex(table, name);
  return table.rows.map((r) => String(r[i]));
}
