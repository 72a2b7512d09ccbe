/** Documents served by the accesswalk HTTP API. */

export interface NetworkNode {
  id: string;
  x: number | null;
  y: number | null;
}

export interface NetworkDocument {
  node_count: number;
  edge_count: number;
  has_coordinates: boolean;
  nodes: NetworkNode[];
  edges: [string, string][];
}

export interface AccessibilityNode {
  id: string;
  mean_oa: number;
  oa: number[];
}

export interface AccessibilityDocument {
  steps: number;
  node_count: number;
  nodes: AccessibilityNode[];
}

export type JobState = "queued" | "running" | "done" | "failed";

export interface JobDocument {
  id: string;
  state: JobState;
  progress: number;
  error: string | null;
  position: number | null;
}

export interface SubmitResponse {
  job_id: string;
  position: number;
}

export interface ComparisonDocument {
  added_edges: [string, string][];
  radius: number;
  region: string[];
  steps: number;
  baseline_curve: number[];
  enhanced_curve: number[];
  relative_change: (number | null)[];
}
