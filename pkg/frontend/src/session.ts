// Session credentials live only in memory for the lifetime of the page;
// nothing is written to durable browser storage.

import type { Credentials } from "./api.js";

let current: Credentials | null = null;
let admin = false;

export function startSession(credentials: Credentials, isAdmin: boolean): void {
  current = credentials;
  admin = isAdmin;
}

export function credentials(): Credentials | null {
  return current;
}

export function isAdmin(): boolean {
  return admin;
}

export function clearSession(): void {
  current = null;
  admin = false;
}
