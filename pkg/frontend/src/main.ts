// App shell: hash-based navigation with one active view at a time; the
// previous view's cleanup (its polling timer) runs before the next mounts.

import { ApiClient } from "./api.js";
import { credentials, isAdmin } from "./session.js";
import { requireSession, VIEWS, type Cleanup } from "./views.js";

const api = new ApiClient(credentials);

let cleanup: Cleanup = () => undefined;

function navigate(view: string): void {
  window.location.hash = `#/${view}`;
}

function mount(): void {
  const root = document.getElementById("app");
  const nav = document.getElementById("nav");
  if (!root || !nav) {
    return;
  }
  const requested = window.location.hash.replace(/^#\//, "") || "login";
  const view = requireSession(requested in VIEWS ? requested : "login");
  if (view !== requested) {
    navigate(view);
    return;
  }
  cleanup();
  nav.innerHTML =
    credentials() === null
      ? ""
      : [
          `<a href="#/deploy">deploy</a>`,
          `<a href="#/ports">ports</a>`,
          isAdmin() ? `<a href="#/status">cluster</a>` : "",
          `<a href="#/pipeline">pipeline</a>`,
          `<a href="#/logout">logout</a>`,
        ].join("");
  cleanup = VIEWS[view](root, api, navigate);
}

window.addEventListener("hashchange", mount);
window.addEventListener("DOMContentLoaded", mount);
