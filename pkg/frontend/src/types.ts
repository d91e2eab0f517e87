/** JSON shapes of the /v1 API. */

export interface RetrievedSample {
  id: string;
  score: number;
  input: string;
  command: string;
  class: string;
}

export interface InterpretTrace {
  raw_responses: string[];
  retries_used: number;
  classifier_retrieved: [string, number][];
}

export interface InterpretResponse {
  entry_id: string;
  session_id: string;
  class: string;
  used_fallback: boolean;
  retrieved: RetrievedSample[];
  command: string;
  valid: boolean;
  trace: InterpretTrace;
}

export type Decision = 'pending' | 'approved' | 'rejected';

export interface DryRun {
  validated: boolean;
  violations: { position: number; message: string }[];
  executed: boolean;
}

export interface Entry {
  entry_id: string;
  session_id: string;
  created_at: number;
  instruction: string;
  class: string;
  command: string;
  valid: boolean;
  decision: Decision;
  decided_at: number | null;
  dry_run: DryRun | null;
  retrieved: RetrievedSample[];
  classification: {
    class_name: string;
    used_fallback: boolean;
    raw_response: string;
    retrieved: [string, number][];
  };
  generation: {
    raw_response: string;
    retries_used: number;
    retrieved: [string, number][];
  };
}

export interface CommandClassInfo {
  name: string;
  description: string;
  system_prompt: string;
  base_commands: string[];
  flags: { name: string; arg_patterns: string[][] }[];
}

export interface ClassStatsInfo {
  accuracy: number;
  precision: number;
  n: number;
}

export interface EvalReportInfo {
  report_id: string;
  created_at?: number;
  schema_version: number;
  accuracy: number;
  mean_unigram_precision: number;
  n: number;
  per_class: Record<string, ClassStatsInfo>;
  confusion: { true: string; predicted: string; count: number }[];
  config_snapshot: Record<string, unknown>;
}

export interface HealthResponse {
  status: string;
  backend: { healthy: boolean; reason: string | null };
}

export interface GenerationFailureDetails {
  step: string;
  raw_responses: string[];
  extracted: string | null;
  class: string | null;
  violations: { position: number; message: string }[];
}
