/** Detection-rate-versus-length line charts, one SVG per property with one
 * line per (rho, eta) series.  Everything is computed with deterministic
 * string formatting so identical input yields identical bytes. */

import { ResultRow, seriesKeys } from "./csv.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 56, right: 16, top: 40, bottom: 48 };
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function fmt(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

export function renderCurves(rows: ResultRow[], property: string): string {
  const mine = rows.filter(
    (r) => r.property === property && /^\d+$/.test(r.length),
  );
  if (mine.length === 0) {
    throw new Error(`no per-length rows for property: ${property}`);
  }
  const keys = seriesKeys(mine);
  const lengths = [...new Set(mine.map((r) => Number(r.length)))].sort(
    (a, b) => a - b,
  );
  const x0 = lengths[0];
  const x1 = lengths[lengths.length - 1];
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (len: number) =>
    MARGIN.left + (x1 === x0 ? 0.5 : (len - x0) / (x1 - x0)) * plotW;
  const sy = (pct: number) => MARGIN.top + (1 - pct / 100) * plotH;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="15" font-family="sans-serif">${property}: detected violations vs trace length</text>`,
  ];

  // axes and gridlines
  for (let pct = 0; pct <= 100; pct += 20) {
    const y = fmt(sy(pct));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11" font-family="sans-serif">${pct}%</text>`,
    );
  }
  for (const len of lengths) {
    if (lengths.length <= 12 || len % 5 === 0) {
      const x = fmt(sx(len));
      parts.push(
        `<text x="${x}" y="${HEIGHT - MARGIN.bottom + 16}" text-anchor="middle" font-size="11" font-family="sans-serif">${len}</text>`,
      );
    }
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${HEIGHT - MARGIN.bottom}" stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${HEIGHT - MARGIN.bottom}" x2="${WIDTH - MARGIN.right}" y2="${HEIGHT - MARGIN.bottom}" stroke="black"/>`,
    `<text x="${WIDTH / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="12" font-family="sans-serif">trace length</text>`,
    `<text x="16" y="${HEIGHT / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 ${HEIGHT / 2})">violations detected</text>`,
  );

  keys.forEach(([rho, eta], i) => {
    const color = COLORS[i % COLORS.length];
    const series = lengths
      .map((len) =>
        mine.find((r) => r.rho === rho && r.eta === eta && Number(r.length) === len),
      )
      .filter((r): r is ResultRow => r !== undefined);
    const points = series
      .map((r) => `${fmt(sx(Number(r.length)))},${fmt(sy(r.detection_pct))}`)
      .join(" ");
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.8" points="${points}" data-series="rho=${rho},eta=${eta}"/>`,
    );
    const ly = MARGIN.top + 14 * i;
    parts.push(
      `<line x1="${WIDTH - 170}" y1="${ly}" x2="${WIDTH - 146}" y2="${ly}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${WIDTH - 140}" y="${ly + 4}" font-size="11" font-family="sans-serif">rho=${rho}, eta=${eta}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}
