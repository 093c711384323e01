// Pure rendering helpers: data in, strings/arrays out. The views attach
// these to the DOM; keeping the shaping logic here makes it testable
// without a browser.

import type {
  ClassifiedEvent,
  ClusterStatus,
  PortRow,
  SamplePoint,
} from "./api.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function portsTableRows(rows: PortRow[]): string[][] {
  return rows.map((row) => [
    row.container_name,
    String(row.container_port),
    String(row.node_port),
  ]);
}

export function tableHtml(headers: string[], rows: string[][], raw = false): string {
  const head = headers.map((h) => `<th>${escapeHtml(h)}</th>`).join("");
  const cell = (c: string) => `<td>${raw ? c : escapeHtml(c)}</td>`;
  const body = rows
    .map((row) => `<tr>${row.map(cell).join("")}</tr>`)
    .join("");
  return `<table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export interface BatchGroup {
  batchIndex: number;
  events: ClassifiedEvent[];
}

export function groupEventsByBatch(events: ClassifiedEvent[]): BatchGroup[] {
  const byBatch = new Map<number, ClassifiedEvent[]>();
  for (const event of events) {
    const bucket = byBatch.get(event.batch_index) ?? [];
    bucket.push(event);
    byBatch.set(event.batch_index, bucket);
  }
  return [...byBatch.entries()]
    .sort(([a], [b]) => a - b)
    .map(([batchIndex, grouped]) => ({ batchIndex, events: grouped }));
}

export function eventRow(event: ClassifiedEvent): string[] {
  return [
    String(event.batch_index),
    `${event.start_offset}-${event.end_offset}`,
    event.kind,
    event.confidence.toFixed(3),
  ];
}

// Polyline path for the sample window, scaled into a viewBox of the given
// size. An empty window yields an empty path.
export function samplePlotPath(
  window: SamplePoint[],
  width = 800,
  height = 220,
  pad = 8,
): string {
  if (window.length === 0) {
    return "";
  }
  const values = window.map((p) => p.v);
  const min = Math.min(...values);
  const max = Math.max(...values);
  const span = max - min || 1;
  const step = window.length > 1 ? (width - 2 * pad) / (window.length - 1) : 0;
  return window
    .map((point, i) => {
      const x = pad + i * step;
      const y = height - pad - ((point.v - min) / span) * (height - 2 * pad);
      return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

export function capacityBar(used: number, capacity: number): string {
  const percent = capacity > 0 ? Math.round((used / capacity) * 100) : 0;
  return `<div class="bar"><div class="bar-fill" style="width:${percent}%"></div><span>${used}/${capacity} (${percent}%)</span></div>`;
}

// Node rows are pre-escaped HTML (they embed capacity bars) and must be
// rendered with tableHtml(..., raw=true); pod rows are plain text.
export function statusRows(status: ClusterStatus): {
  nodes: string[][];
  pods: string[][];
} {
  return {
    nodes: status.nodes.map((n) => [
      escapeHtml(n.name),
      escapeHtml(n.node_type),
      capacityBar(n.cpu_used_millicores, n.cpu_capacity_millicores),
      capacityBar(n.memory_used_mi, n.memory_capacity_mi),
    ]),
    pods: status.pods.map((p) => [
      p.pod_id,
      p.deployment_id,
      p.node ?? "-",
      p.phase,
      String(p.restart_count),
    ]),
  };
}
