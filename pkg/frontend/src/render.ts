#!/usr/bin/env node
/**
 * render --kind K --in CSV --out IMG
 *
 * Reads one harness CSV, writes one standalone SVG. The input is never
 * modified. Exit codes: 0 written, 2 usage or schema problem.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): Args {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--kind") kind = argv[++i];
    else if (arg === "--in") input = argv[++i];
    else if (arg === "--out") output = argv[++i];
    else throw new Error(`unknown argument '${arg}'`);
  }
  if (!kind || !input || !output) {
    throw new Error("usage: render --kind KIND --in CSV --out IMG");
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown figure kind '${kind}'; expected one of ${FIGURE_KINDS.join(", ")}`);
  }
  return { kind: kind as FigureKind, input, output };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  let csvText: string;
  try {
    csvText = readFileSync(args.input, "utf8");
  } catch (err) {
    console.error(`cannot read ${args.input}: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
  try {
    const svg = renderFigure(args.kind, csvText);
    writeFileSync(args.output, svg, "utf8");
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      return 2;
    }
    throw err;
  }
  console.log(`wrote ${args.output}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("render.js")) {
  process.exit(main(process.argv.slice(2)));
}
