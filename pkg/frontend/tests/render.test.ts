import { describe, expect, it } from "vitest";

import type { ClassifiedEvent, PipelineSnapshot } from "../src/api.js";
import {
  eventRow,
  groupEventsByBatch,
  portsTableRows,
  samplePlotPath,
  statusRows,
  tableHtml,
} from "../src/render.js";

describe("ports table", () => {
  it("renders served rows verbatim, in served order", () => {
    const served = [
      { container_name: "alpha", container_port: 443, node_port: 30002 },
      { container_name: "zeta", container_port: 80, node_port: 30001 },
      { container_name: "zeta", container_port: 9090, node_port: 30000 },
    ];
    expect(portsTableRows(served)).toEqual([
      ["alpha", "443", "30002"],
      ["zeta", "80", "30001"],
      ["zeta", "9090", "30000"],
    ]);
    const html = tableHtml(["container", "container port", "node port"], portsTableRows(served));
    expect(html).toContain("<td>alpha</td><td>443</td><td>30002</td>");
    expect(html).toContain("<td>zeta</td><td>9090</td><td>30000</td>");
  });

  it("escapes markup in cell content", () => {
    const html = tableHtml(["c"], [["<script>alert(1)</script>"]]);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("pipeline view shaping", () => {
  // Canned snapshot equivalent to a 2000-row replay: four classified batches.
  const event = (batch_index: number, kind: string): ClassifiedEvent => ({
    batch_index,
    start_offset: 10 * batch_index,
    end_offset: 10 * batch_index + 2,
    kind,
    confidence: 0.875,
  });
  const snapshot: PipelineSnapshot = {
    window: Array.from({ length: 2000 }, (_, i) => ({ t: i, v: Math.sin(i / 40) })),
    events: [
      event(0, "bump"),
      event(1, "depression"),
      event(1, "bump"),
      event(2, "bump"),
      event(3, "depression"),
    ],
    skipped_count: 0,
  };

  it("groups events into one group per batch, ordered by batch index", () => {
    const groups = groupEventsByBatch(snapshot.events);
    expect(groups.map((g) => g.batchIndex)).toEqual([0, 1, 2, 3]);
    expect(groups.map((g) => g.events.length)).toEqual([1, 2, 1, 1]);
  });

  it("orders groups even when events arrive shuffled", () => {
    const shuffled = [...snapshot.events].reverse();
    expect(groupEventsByBatch(shuffled).map((g) => g.batchIndex)).toEqual([0, 1, 2, 3]);
  });

  it("renders event rows with offsets, kind and confidence", () => {
    expect(eventRow(snapshot.events[0])).toEqual(["0", "0-2", "bump", "0.875"]);
  });

  it("builds one svg path segment per window sample", () => {
    const path = samplePlotPath(snapshot.window);
    expect(path.startsWith("M")).toBe(true);
    expect(path.match(/L/g)?.length).toBe(1999);
  });

  it("yields an empty path for an empty window", () => {
    expect(samplePlotPath([])).toBe("");
  });

  it("flat windows stay within the viewbox", () => {
    const path = samplePlotPath([{ t: 0, v: 1 }, { t: 1, v: 1 }], 100, 50, 5);
    for (const match of path.matchAll(/[ML]([\d.]+),([\d.]+)/g)) {
      expect(Number(match[1])).toBeGreaterThanOrEqual(0);
      expect(Number(match[1])).toBeLessThanOrEqual(100);
      expect(Number(match[2])).toBeGreaterThanOrEqual(0);
      expect(Number(match[2])).toBeLessThanOrEqual(50);
    }
  });
});

describe("cluster status shaping", () => {
  it("renders capacity bars and pod rows", () => {
    const rows = statusRows({
      nodes: [
        {
          name: "amd-a",
          node_type: "amd",
          cpu_capacity_millicores: 2000,
          cpu_used_millicores: 500,
          memory_capacity_mi: 2048,
          memory_used_mi: 256,
        },
      ],
      pods: [
        {
          pod_id: "pod-00002",
          deployment_id: "dep-00001",
          node: "amd-a",
          phase: "Running",
          restart_count: 1,
        },
      ],
      services: [],
    });
    expect(rows.nodes[0][0]).toBe("amd-a");
    expect(rows.nodes[0][2]).toContain("500/2000 (25%)");
    expect(rows.pods[0]).toEqual(["pod-00002", "dep-00001", "amd-a", "Running", "1"]);
  });

  it("shows a dash for unplaced pods", () => {
    const rows = statusRows({
      nodes: [],
      pods: [
        {
          pod_id: "pod-00001",
          deployment_id: "dep-00001",
          node: null,
          phase: "Pending",
          restart_count: 0,
        },
      ],
      services: [],
    });
    expect(rows.pods[0][2]).toBe("-");
  });
});
