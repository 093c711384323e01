// REST client for the control plane. Every call attaches the session
// credentials as the two auth headers; error bodies carry a machine-readable
// code that views map to user-facing messages.

export interface Credentials {
  folderId: string;
  apiKey: string;
}

export interface PortBinding {
  container_port: number;
  node_port: number;
}

export interface DeploymentReceipt {
  deployment_id: string;
  folder_id: string;
  selected_node_type: string;
  port_bindings: PortBinding[];
  status: string;
}

export interface PortRow {
  container_name: string;
  container_port: number;
  node_port: number;
}

export interface NodeStatus {
  name: string;
  node_type: string;
  cpu_capacity_millicores: number;
  cpu_used_millicores: number;
  memory_capacity_mi: number;
  memory_used_mi: number;
}

export interface PodStatus {
  pod_id: string;
  deployment_id: string;
  node: string | null;
  phase: string;
  restart_count: number;
}

export interface ClusterStatus {
  nodes: NodeStatus[];
  pods: PodStatus[];
  services: { deployment_id: string; port_bindings: PortBinding[] }[];
}

export interface SamplePoint {
  t: number;
  v: number;
}

export interface ClassifiedEvent {
  batch_index: number;
  start_offset: number;
  end_offset: number;
  kind: string;
  confidence: number;
}

export interface PipelineSnapshot {
  window: SamplePoint[];
  events: ClassifiedEvent[];
  skipped_count: number;
}

export interface DeployPayload {
  container_name: string;
  image: string;
  ports: number[];
  cpu_millicores: number;
  memory_mi: number;
  gpu_cores?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export const ERROR_MESSAGES: Record<string, string> = {
  AuthFailed: "invalid credentials",
  Forbidden: "you do not have access to this resource",
  ValidationError: "the request was rejected as invalid",
  DuplicateUser: "that folder id is already registered",
  DuplicateName: "a deployment with that container name already exists",
  UnsupportedImage: "unsupported image architecture",
  NoCompatibleNode: "no cluster node matches the image's architectures",
  PortExhausted: "no free node port is left in the configured range",
  NotFound: "not found",
  RegistryUnavailable: "the image registry is unreachable",
};

export function errorMessage(error: unknown): string {
  if (error instanceof ApiError) {
    return ERROR_MESSAGES[error.code] ?? error.message;
  }
  return "the server is unreachable";
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly credentials: () => Credentials | null,
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private headers(json: boolean): HeadersInit {
    const creds = this.credentials();
    const headers: Record<string, string> = {};
    if (creds) {
      headers["X-Folder-Id"] = creds.folderId;
      headers["X-Api-Key"] = creds.apiKey;
    }
    if (json) {
      headers["Content-Type"] = "application/json";
    }
    return headers;
  }

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "Unknown";
      let message = `request failed with status ${response.status}`;
      try {
        const payload = await response.json();
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the defaults
      }
      throw new ApiError(response.status, code, message);
    }
    return response;
  }

  async login(): Promise<void> {
    await this.request("POST", "/auth/login");
  }

  async registerUser(folderId: string, apiKey: string): Promise<void> {
    await this.request("POST", "/users", { folder_id: folderId, api_key: apiKey });
  }

  async createDeployment(payload: DeployPayload): Promise<DeploymentReceipt> {
    const response = await this.request("POST", "/deployments", payload);
    return response.json();
  }

  async listPorts(): Promise<PortRow[]> {
    const response = await this.request("GET", "/deployments/ports");
    return response.json();
  }

  async clusterStatus(): Promise<ClusterStatus> {
    const response = await this.request("GET", "/cluster/status");
    return response.json();
  }

  async pipelineSnapshot(): Promise<PipelineSnapshot> {
    const response = await this.request("GET", "/pipeline/visualization");
    return response.json();
  }
}
