// View layer: each view renders into the app container and returns a
// cleanup callback; the router cancels polling timers on navigation.

import {
  ApiClient,
  ApiError,
  errorMessage,
  type DeployPayload,
  type PipelineSnapshot,
} from "./api.js";
import {
  eventRow,
  groupEventsByBatch,
  portsTableRows,
  samplePlotPath,
  statusRows,
  tableHtml,
} from "./render.js";
import { clearSession, credentials, isAdmin, startSession } from "./session.js";
import {
  CPU_SLIDER,
  GPU_SLIDER,
  MEMORY_SLIDER,
  parsePortsInput,
  validateDeployForm,
} from "./validation.js";

export const PORTS_POLL_MS = 5000;
export const STATUS_POLL_MS = 5000;
export const PIPELINE_POLL_MS = 1000;

export type Cleanup = () => void;

type Navigate = (view: string) => void;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  html = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.innerHTML = html;
  return node;
}

export function loginView(root: HTMLElement, api: ApiClient, navigate: Navigate): Cleanup {
  root.innerHTML = `
    <section class="card">
      <h2>Sign in</h2>
      <form id="login-form">
        <label>Folder id <input name="folder" autocomplete="off" required></label>
        <label>API key <input name="key" type="password" required></label>
        <p class="error" id="login-error" hidden></p>
        <p class="banner" id="login-banner" hidden></p>
        <button type="submit">Login</button>
      </form>
    </section>`;
  const form = root.querySelector<HTMLFormElement>("#login-form")!;
  const error = root.querySelector<HTMLElement>("#login-error")!;
  const banner = root.querySelector<HTMLElement>("#login-banner")!;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const folderId = String(data.get("folder") ?? "").trim();
    const apiKey = String(data.get("key") ?? "");
    if (!folderId || !apiKey) {
      error.textContent = "both fields are required";
      error.hidden = false;
      return;
    }
    startSession({ folderId, apiKey }, false);
    try {
      await api.login();
      // Only the administrator can read cluster status; probe once so the
      // nav can show the admin view without a separate role endpoint.
      let admin = false;
      try {
        await api.clusterStatus();
        admin = true;
      } catch {
        admin = false;
      }
      startSession({ folderId, apiKey }, admin);
      navigate("deploy");
    } catch (failure) {
      clearSession();
      if (failure instanceof ApiError) {
        error.textContent = errorMessage(failure);
        error.hidden = false;
        banner.hidden = true;
      } else {
        banner.textContent = "server unreachable - check the connection and retry";
        banner.hidden = false;
      }
    }
  });
  return () => undefined;
}

export function deployView(root: HTMLElement, api: ApiClient, navigate: Navigate): Cleanup {
  root.innerHTML = `
    <section class="card">
      <h2>Deploy an application</h2>
      <form id="deploy-form">
        <label>Container name <input name="name" autocomplete="off"></label>
        <label>Image name <input name="image" autocomplete="off"></label>
        <label>Ports (comma separated) <input name="ports" placeholder="80, 443"></label>
        <label>CPU limit: <output id="cpu-out">500</output> m
          <input type="range" name="cpu" min="${CPU_SLIDER.min}" max="${CPU_SLIDER.max}"
                 step="${CPU_SLIDER.step}" value="500"></label>
        <label>Memory limit: <output id="mem-out">256</output> Mi
          <input type="range" name="memory" min="${MEMORY_SLIDER.min}" max="${MEMORY_SLIDER.max}"
                 step="${MEMORY_SLIDER.step}" value="256"></label>
        <label>GPU cores (reserved - not applied to placement):
          <output id="gpu-out">0</output>
          <input type="range" name="gpu" min="${GPU_SLIDER.min}" max="${GPU_SLIDER.max}"
                 step="${GPU_SLIDER.step}" value="0"></label>
        <ul class="error" id="deploy-errors" hidden></ul>
        <button type="submit">Deploy</button>
      </form>
      <div id="receipt" hidden></div>
    </section>
    <section class="card" id="ports-card">
      <h2>Exposed ports</h2>
      <div id="ports-table"><p class="empty">no deployments yet</p></div>
    </section>`;

  const form = root.querySelector<HTMLFormElement>("#deploy-form")!;
  const errorList = root.querySelector<HTMLElement>("#deploy-errors")!;
  const receiptBox = root.querySelector<HTMLElement>("#receipt")!;
  for (const [range, output] of [
    ["cpu", "cpu-out"],
    ["memory", "mem-out"],
    ["gpu", "gpu-out"],
  ] as const) {
    const slider = form.querySelector<HTMLInputElement>(`[name=${range}]`)!;
    const out = root.querySelector<HTMLElement>(`#${output}`)!;
    slider.addEventListener("input", () => (out.textContent = slider.value));
  }

  const refreshPorts = () => renderPortsInto(root.querySelector("#ports-table")!, api);
  void refreshPorts();

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const gpu = Number(data.get("gpu") ?? 0);
    const model = {
      containerName: String(data.get("name") ?? "").trim(),
      image: String(data.get("image") ?? "").trim(),
      ports: parsePortsInput(String(data.get("ports") ?? "")),
      cpuMillicores: Number(data.get("cpu")),
      memoryMi: Number(data.get("memory")),
      gpuCores: gpu,
    };
    const problems = validateDeployForm(model);
    if (problems.length > 0) {
      errorList.innerHTML = problems.map((p) => `<li>${p}</li>`).join("");
      errorList.hidden = false;
      return;
    }
    errorList.hidden = true;
    const payload: DeployPayload = {
      container_name: model.containerName,
      image: model.image,
      ports: model.ports,
      cpu_millicores: model.cpuMillicores,
      memory_mi: model.memoryMi,
    };
    if (gpu > 0) {
      payload.gpu_cores = gpu;
    }
    try {
      const receipt = await api.createDeployment(payload);
      receiptBox.innerHTML = tableHtml(
        ["deployment", "node type", "bindings", "status"],
        [[
          receipt.deployment_id,
          receipt.selected_node_type,
          receipt.port_bindings.map((b) => `${b.container_port} -> ${b.node_port}`).join(", "),
          receipt.status,
        ]],
      );
      receiptBox.hidden = false;
      form.reset();
      await refreshPorts();
    } catch (failure) {
      errorList.innerHTML = `<li>${errorMessage(failure)}</li>`;
      errorList.hidden = false;
      if (failure instanceof ApiError && failure.status === 401) {
        clearSession();
        navigate("login");
      }
    }
  });
  return () => undefined;
}

async function renderPortsInto(container: Element, api: ApiClient): Promise<void> {
  try {
    const rows = await api.listPorts();
    container.innerHTML =
      rows.length === 0
        ? '<p class="empty">no deployments yet</p>'
        : tableHtml(["container", "container port", "node port"], portsTableRows(rows));
  } catch (failure) {
    container.innerHTML = `<p class="error">${errorMessage(failure)}</p>`;
  }
}

export function portsView(root: HTMLElement, api: ApiClient, navigate: Navigate): Cleanup {
  root.innerHTML = `
    <section class="card">
      <h2>Exposed ports</h2>
      <div id="ports-table"><p class="empty">loading...</p></div>
    </section>`;
  const container = root.querySelector("#ports-table")!;
  const refresh = async () => {
    try {
      const rows = await api.listPorts();
      container.innerHTML =
        rows.length === 0
          ? '<p class="empty">no deployments yet</p>'
          : tableHtml(["container", "container port", "node port"], portsTableRows(rows));
    } catch (failure) {
      if (failure instanceof ApiError && failure.status === 401) {
        clearSession();
        navigate("login");
        return;
      }
      container.innerHTML = `<p class="error">${errorMessage(failure)}</p>`;
    }
  };
  void refresh();
  const timer = window.setInterval(refresh, PORTS_POLL_MS);
  return () => window.clearInterval(timer);
}

export function statusView(root: HTMLElement, api: ApiClient, _navigate: Navigate): Cleanup {
  if (!isAdmin()) {
    root.innerHTML = '<section class="card"><p class="error">cluster status is restricted to the administrator</p></section>';
    return () => undefined;
  }
  root.innerHTML = `
    <section class="card"><h2>Nodes</h2><div id="nodes"></div></section>
    <section class="card"><h2>Pods</h2><div id="pods"></div></section>`;
  const nodesBox = root.querySelector("#nodes")!;
  const podsBox = root.querySelector("#pods")!;
  const refresh = async () => {
    try {
      const status = await api.clusterStatus();
      const rows = statusRows(status);
      nodesBox.innerHTML = tableHtml(["node", "type", "cpu", "memory"], rows.nodes, true);
      podsBox.innerHTML =
        rows.pods.length === 0
          ? '<p class="empty">no pods scheduled</p>'
          : tableHtml(["pod", "deployment", "node", "phase", "restarts"], rows.pods);
    } catch (failure) {
      nodesBox.innerHTML = `<p class="error">${errorMessage(failure)}</p>`;
    }
  };
  void refresh();
  const timer = window.setInterval(refresh, STATUS_POLL_MS);
  return () => window.clearInterval(timer);
}

export function pipelineView(root: HTMLElement, api: ApiClient, _navigate: Navigate): Cleanup {
  root.innerHTML = `
    <section class="card">
      <h2>Sample window</h2>
      <svg id="plot" viewBox="0 0 800 220" preserveAspectRatio="none">
        <path id="plot-path" d="" fill="none" stroke="currentColor" stroke-width="1"></path>
      </svg>
      <p class="empty" id="plot-empty">no samples yet</p>
    </section>
    <section class="card">
      <h2>Classified events</h2>
      <p id="skipped" class="empty"></p>
      <div id="events"></div>
    </section>`;
  const path = root.querySelector<SVGPathElement>("#plot-path")!;
  const emptyNote = root.querySelector<HTMLElement>("#plot-empty")!;
  const eventsBox = root.querySelector("#events")!;
  const skipped = root.querySelector<HTMLElement>("#skipped")!;
  const refresh = async () => {
    let snapshot: PipelineSnapshot;
    try {
      snapshot = await api.pipelineSnapshot();
    } catch (failure) {
      eventsBox.innerHTML = `<p class="error">${errorMessage(failure)}</p>`;
      return;
    }
    path.setAttribute("d", samplePlotPath(snapshot.window));
    emptyNote.hidden = snapshot.window.length > 0;
    skipped.textContent = `skipped payloads: ${snapshot.skipped_count}`;
    const groups = groupEventsByBatch(snapshot.events);
    eventsBox.innerHTML =
      groups.length === 0
        ? '<p class="empty">no classified events yet</p>'
        : groups
            .map(
              (group) =>
                `<h3>Batch ${group.batchIndex}</h3>` +
                tableHtml(
                  ["batch", "offsets", "kind", "confidence"],
                  group.events.map(eventRow),
                ),
            )
            .join("");
  };
  void refresh();
  const timer = window.setInterval(refresh, PIPELINE_POLL_MS);
  return () => window.clearInterval(timer);
}

export function logoutView(_root: HTMLElement, _api: ApiClient, navigate: Navigate): Cleanup {
  clearSession();
  navigate("login");
  return () => undefined;
}

export function requireSession(view: string): string {
  return credentials() === null && view !== "login" ? "login" : view;
}

export const VIEWS: Record<
  string,
  (root: HTMLElement, api: ApiClient, navigate: Navigate) => Cleanup
> = {
  login: loginView,
  deploy: deployView,
  ports: portsView,
  status: statusView,
  pipeline: pipelineView,
  logout: logoutView,
};

export { el };
