// Client-side validation mirroring the server's deployment invariants, so
// the form never submits a value the API would reject for shape reasons.

export interface DeployFormModel {
  containerName: string;
  image: string;
  ports: number[];
  cpuMillicores: number;
  memoryMi: number;
  gpuCores?: number;
}

const NAME_PATTERN = /^[a-z0-9]([a-z0-9-]*[a-z0-9])?$/;
const MAX_NAME_LENGTH = 63;

export const CPU_SLIDER = { min: 100, max: 4000, step: 100 };
export const MEMORY_SLIDER = { min: 64, max: 8192, step: 64 };
export const GPU_SLIDER = { min: 0, max: 8, step: 1 };

export function validateDeployForm(model: DeployFormModel): string[] {
  const errors: string[] = [];
  if (!model.containerName) {
    errors.push("container name is required");
  } else if (model.containerName.length > MAX_NAME_LENGTH) {
    errors.push(`container name must be at most ${MAX_NAME_LENGTH} characters`);
  } else if (!NAME_PATTERN.test(model.containerName)) {
    errors.push("container name must be lowercase alphanumerics and hyphens");
  }
  if (!model.image) {
    errors.push("image name is required");
  }
  if (model.ports.length === 0) {
    errors.push("at least one port is required");
  }
  const seen = new Set<number>();
  for (const port of model.ports) {
    if (!Number.isInteger(port) || port < 1 || port > 65535) {
      errors.push(`port ${port} is outside 1-65535`);
    } else if (seen.has(port)) {
      errors.push(`port ${port} is listed twice`);
    }
    seen.add(port);
  }
  if (!Number.isInteger(model.cpuMillicores) || model.cpuMillicores < 1) {
    errors.push("cpu limit must be a positive integer (millicores)");
  }
  if (!Number.isInteger(model.memoryMi) || model.memoryMi < 1) {
    errors.push("memory limit must be a positive integer (Mi)");
  }
  if (
    model.gpuCores !== undefined &&
    (!Number.isInteger(model.gpuCores) || model.gpuCores < 0)
  ) {
    errors.push("gpu cores must be a non-negative integer");
  }
  return errors;
}

export function parsePortsInput(raw: string): number[] {
  return raw
    .split(",")
    .map((piece) => piece.trim())
    .filter((piece) => piece.length > 0)
    .map((piece) => (/^\d+$/.test(piece) ? Number(piece) : NaN));
}
