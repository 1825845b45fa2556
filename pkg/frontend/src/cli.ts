#!/usr/bin/env node
/** figgen <kind> --in <csv> --out <svg>
 *
 *  Renders one solver CSV into a deterministic SVG (no timestamps embedded).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv, SchemaError } from "./csv.js";
import { FigureKind, KINDS, render } from "./figures.js";

function usage(): never {
  process.stderr.write(
    `usage: figgen <${KINDS.join("|")}> --in <csv> --out <svg>\n`);
  process.exit(2);
}

export function main(argv: string[]): number {
  const args = argv.slice(2);
  if (args.length === 0) usage();
  const kind = args[0] as FigureKind;
  if (!KINDS.includes(kind)) usage();
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 1; i < args.length; i += 2) {
    const flag = args[i];
    const value = args[i + 1];
    if (value === undefined) usage();
    if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else usage();
  }
  if (!input || !output) usage();

  let text: string;
  try {
    text = readFileSync(input, "utf-8");
  } catch (err) {
    process.stderr.write(`figgen: cannot read ${input}: ${err}\n`);
    return 2;
  }
  try {
    const svg = render(kind, parseCsv(text));
    writeFileSync(output, svg, "utf-8");
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`figgen: schema error: ${err.message}\n`);
      return 3;
    }
    throw err;
  }
  process.stderr.write(`wrote ${output}\n`);
  return 0;
}

process.exit(main(process.argv));
