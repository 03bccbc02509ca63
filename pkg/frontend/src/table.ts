/** Markdown summary tables: one table per length bucket, one row per
 * property, one column per (rho, eta) combination, cells as "NN% (count)". */

import { ResultRow, properties, seriesKeys } from "./csv.js";

function bucketOrder(a: string, b: string): number {
  const lo = (s: string) => Number(s.split("-")[0]);
  return lo(a) - lo(b);
}

export function cell(row: ResultRow): string {
  return `${Math.round(row.detection_pct)}% (${row.violating})`;
}

export function renderTable(rows: ResultRow[], filter: string[] = []): string {
  const selected =
    filter.length === 0 ? rows : rows.filter((r) => filter.includes(r.property));
  const buckets = [...new Set(selected.map((r) => r.length))].sort(bucketOrder);
  const keys = seriesKeys(selected);
  const props = properties(selected);
  const out: string[] = ["# Detection rates", ""];
  for (const bucket of buckets) {
    const inBucket = selected.filter((r) => r.length === bucket);
    if (inBucket.length === 0) {
      continue;
    }
    out.push(`## Lengths ${bucket}`, "");
    const header = ["Property", ...keys.map(([rho, eta]) => `rho: ${rho}, eta: ${eta}`)];
    out.push(`| ${header.join(" | ")} |`);
    out.push(`|${header.map(() => "---").join("|")}|`);
    for (const property of props) {
      const cells = keys.map(([rho, eta]) => {
        const row = inBucket.find(
          (r) => r.property === property && r.rho === rho && r.eta === eta,
        );
        return row ? cell(row) : "-";
      });
      if (cells.every((c) => c === "-")) {
        continue; // empty bucket for this property
      }
      out.push(`| ${property} | ${cells.join(" | ")} |`);
    }
    out.push("");
  }
  return out.join("\n");
}
