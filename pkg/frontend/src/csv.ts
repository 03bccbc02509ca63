/** Minimal CSV reader for the harness output (no quoting, no embedded commas). */

export interface ResultRow {
  property: string;
  rho: number;
  eta: number;
  length: string; // a number in curves.csv, a "lo-hi" bucket in results.csv
  violating: number;
  detected: number;
  detection_pct: number;
  events_kept_pct: number;
  false_positives: number;
}

export const REQUIRED_COLUMNS = [
  "property",
  "rho",
  "eta",
  "length",
  "violating",
  "detected",
  "detection_pct",
  "events_kept_pct",
  "false_positives",
] as const;

export function parseCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV input");
  }
  const header = lines[0].split(",");
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new Error(`missing column: ${column}`);
    }
  }
  const at = (cells: string[], column: string) => cells[index.get(column)!];
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    return {
      property: at(cells, "property"),
      rho: Number(at(cells, "rho")),
      eta: Number(at(cells, "eta")),
      length: at(cells, "length"),
      violating: Number(at(cells, "violating")),
      detected: Number(at(cells, "detected")),
      detection_pct: Number(at(cells, "detection_pct")),
      events_kept_pct: Number(at(cells, "events_kept_pct")),
      false_positives: Number(at(cells, "false_positives")),
    };
  });
}

export function properties(rows: ResultRow[]): string[] {
  return [...new Set(rows.map((r) => r.property))].sort();
}

/** (rho, eta) combinations in ascending order; the table column grid. */
export function seriesKeys(rows: ResultRow[]): Array<[number, number]> {
  const seen = new Map<string, [number, number]>();
  for (const row of rows) {
    seen.set(`${row.rho}|${row.eta}`, [row.rho, row.eta]);
  }
  return [...seen.values()].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}
