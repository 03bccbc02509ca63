/** Report generator: reads the harness's results.csv and curves.csv from
 * --input (a directory or a single CSV file) and writes one SVG chart per
 * property plus a markdown summary table to --out. */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseCsv, properties, ResultRow } from "./csv.js";
import { renderCurves } from "./curves.js";
import { renderTable } from "./table.js";

interface Args {
  input: string;
  out: string;
  properties: string[];
}

export function parseArgs(argv: string[]): Args {
  const args: Args = { input: "", out: "", properties: [] };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (flag === "--input" && value !== undefined) {
      args.input = value;
      i += 1;
    } else if (flag === "--out" && value !== undefined) {
      args.out = value;
      i += 1;
    } else if (flag === "--properties" && value !== undefined) {
      args.properties = value.split(",").filter((s) => s.length > 0);
      i += 1;
    } else {
      throw new Error(`unknown or incomplete argument: ${flag}`);
    }
  }
  if (!args.input || !args.out) {
    throw new Error("usage: report --input <dir|csv> --out <dir> [--properties a,b]");
  }
  return args;
}

function loadRows(input: string, name: string): ResultRow[] {
  const file = fs.statSync(input).isDirectory() ? path.join(input, name) : input;
  return parseCsv(fs.readFileSync(file, "utf8"));
}

export function generate(args: Args): string[] {
  const curveRows = loadRows(args.input, "curves.csv");
  const tableRows = loadRows(args.input, "results.csv");
  const selected =
    args.properties.length > 0 ? args.properties : properties(curveRows);
  fs.mkdirSync(args.out, { recursive: true });
  const written: string[] = [];
  for (const property of selected) {
    const svg = renderCurves(curveRows, property);
    const file = path.join(args.out, `curves_${property}.svg`);
    fs.writeFileSync(file, svg);
    written.push(file);
  }
  const table = renderTable(tableRows, args.properties);
  const tableFile = path.join(args.out, "table.md");
  fs.writeFileSync(tableFile, table);
  written.push(tableFile);
  return written;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  try {
    const written = generate(parseArgs(process.argv.slice(2)));
    for (const file of written) {
      console.log(file);
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    process.exit(1);
  }
}
