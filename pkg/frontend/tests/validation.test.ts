// The client must reject every vector the server rejects for shape reasons.
// These vectors mirror the server-side test table one for one.

import { describe, expect, it } from "vitest";

import {
  parsePortsInput,
  validateDeployForm,
  type DeployFormModel,
} from "../src/validation.js";

const VALID: DeployFormModel = {
  containerName: "nginx",
  image: "nginx",
  ports: [80],
  cpuMillicores: 500,
  memoryMi: 256,
};

// Same shapes the server's validation table rejects.
const SERVER_REJECTED: Partial<DeployFormModel>[] = [
  { containerName: "UPPER" },
  { containerName: "" },
  { containerName: "-lead" },
  { containerName: "trail-" },
  { containerName: "x".repeat(64) },
  { ports: [] },
  { ports: [0] },
  { ports: [70000] },
  { ports: [80, 80] },
  { ports: [8.5] },
  { cpuMillicores: 0 },
  { cpuMillicores: 2.5 },
  { memoryMi: 0 },
  { image: "" },
  { gpuCores: -1 },
];

describe("deploy form validation", () => {
  it("accepts the valid baseline", () => {
    expect(validateDeployForm(VALID)).toEqual([]);
  });

  it.each(SERVER_REJECTED.map((mutation) => [JSON.stringify(mutation), mutation]))(
    "rejects server-rejected vector %s",
    (_label, mutation) => {
      const model = { ...VALID, ...(mutation as Partial<DeployFormModel>) };
      expect(validateDeployForm(model).length).toBeGreaterThan(0);
    },
  );

  it("accepts the longest legal name", () => {
    expect(validateDeployForm({ ...VALID, containerName: "a".repeat(63) })).toEqual([]);
  });

  it("accepts a zero gpu reservation", () => {
    expect(validateDeployForm({ ...VALID, gpuCores: 0 })).toEqual([]);
  });
});

describe("ports input parsing", () => {
  it("splits comma separated ports", () => {
    expect(parsePortsInput("80, 443,9090")).toEqual([80, 443, 9090]);
  });

  it("flags non-numeric pieces as NaN so validation rejects them", () => {
    const parsed = parsePortsInput("80, http");
    expect(parsed[0]).toBe(80);
    expect(Number.isNaN(parsed[1])).toBe(true);
    expect(
      validateDeployForm({ ...VALID, ports: parsed }).length,
    ).toBeGreaterThan(0);
  });

  it("ignores empty pieces", () => {
    expect(parsePortsInput(" 80 , ,")).toEqual([80]);
  });
});
