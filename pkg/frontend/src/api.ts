/** Thin fetch wrappers; failures (HTTP or network) come back as values. */

import type { ApiFailure, ApiResult } from "./types.js";

async function failureFrom(response: Response): Promise<ApiFailure> {
  let body: Record<string, unknown> = {};
  try {
    body = (await response.json()) as Record<string, unknown>;
  } catch {
    // non-JSON error body; keep the status line
  }
  return {
    status: response.status,
    error: typeof body.error === "string" ? body.error : "http",
    detail: typeof body.detail === "string" ? body.detail : response.statusText,
    offset: typeof body.offset === "number" ? body.offset : undefined,
    line: typeof body.line === "number" ? body.line : undefined,
  };
}

async function request<T>(url: string, init?: RequestInit): Promise<ApiResult<T>> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (error) {
    return {
      ok: false,
      failure: { status: 0, error: "network", detail: String(error) },
    };
  }
  if (!response.ok) {
    return { ok: false, failure: await failureFrom(response) };
  }
  return { ok: true, value: (await response.json()) as T };
}

export function getJson<T>(base: string, path: string): Promise<ApiResult<T>> {
  return request<T>(base + path);
}

export function postJson<T>(base: string, path: string, body: unknown): Promise<ApiResult<T>> {
  return request<T>(base + path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

export async function getText(base: string, path: string): Promise<ApiResult<string>> {
  let response: Response;
  try {
    response = await fetch(base + path);
  } catch (error) {
    return { ok: false, failure: { status: 0, error: "network", detail: String(error) } };
  }
  if (!response.ok) {
    return { ok: false, failure: await failureFrom(response) };
  }
  return { ok: true, value: await response.text() };
}
