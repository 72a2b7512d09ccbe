import type {
  AccessibilityDocument,
  ComparisonDocument,
  JobDocument,
  NetworkDocument,
  SubmitResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

/** Thin typed client over the service API; the UI never computes
 * accessibility itself, every number comes from here. */
export class ApiClient {
  constructor(private baseUrl: string = "") {}

  getNetwork(): Promise<NetworkDocument> {
    return request(`${this.baseUrl}/api/network`);
  }

  getAccessibility(scenarioId?: string): Promise<AccessibilityDocument> {
    const suffix = scenarioId ? `?scenario=${encodeURIComponent(scenarioId)}` : "";
    return request(`${this.baseUrl}/api/accessibility${suffix}`);
  }

  postScenario(addEdges: [string, string][], radius: number): Promise<SubmitResponse> {
    return request(`${this.baseUrl}/api/scenarios`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ add_edges: addEdges, radius }),
    });
  }

  getJob(jobId: string): Promise<JobDocument> {
    return request(`${this.baseUrl}/api/jobs/${encodeURIComponent(jobId)}`);
  }

  getComparison(jobId: string): Promise<ComparisonDocument> {
    return request(
      `${this.baseUrl}/api/scenarios/${encodeURIComponent(jobId)}/comparison`,
    );
  }
}
