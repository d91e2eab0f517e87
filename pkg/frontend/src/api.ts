/** Typed client for the /v1 API.
 *
 * Every capability of the console flows through this client, and the
 * client only ever talks to paths under /v1 on the configured base URL:
 * a request to anything else throws before fetch is called.
 */

import type {
  CommandClassInfo,
  Decision,
  Entry,
  EvalReportInfo,
  HealthResponse,
  InterpretResponse,
} from './types.js';

const API_PREFIX = '/v1/';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    if (!path.startsWith(API_PREFIX)) {
      throw new Error(`refusing request outside the API allowlist: ${path}`);
    }
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        headers: { 'Content-Type': 'application/json' },
        ...init,
      });
    } catch (err) {
      throw new ApiError(0, 'network_error', `cannot reach the service: ${err}`);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(
        response.status,
        body?.code ?? 'unknown_error',
        body?.message ?? response.statusText,
        body?.details ?? null,
      );
    }
    return body as T;
  }

  interpret(instruction: string, sessionId?: string | null): Promise<InterpretResponse> {
    return this.request('/v1/interpret', {
      method: 'POST',
      body: JSON.stringify({ instruction, session_id: sessionId ?? null }),
    });
  }

  decide(entryId: string, decision: Exclude<Decision, 'pending'>): Promise<Entry> {
    return this.request(`/v1/entries/${encodeURIComponent(entryId)}/decision`, {
      method: 'POST',
      body: JSON.stringify({ decision }),
    });
  }

  getEntry(entryId: string): Promise<Entry> {
    return this.request(`/v1/entries/${encodeURIComponent(entryId)}`);
  }

  getSessionEntries(sessionId: string): Promise<{ session_id: string; entries: Entry[] }> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  getClasses(): Promise<{ classes: CommandClassInfo[] }> {
    return this.request('/v1/classes');
  }

  getReports(): Promise<{ reports: EvalReportInfo[] }> {
    return this.request('/v1/eval/reports');
  }

  runEval(body: {
    path?: string;
    examples?: Record<string, string>[];
    rag_enabled?: boolean;
  }): Promise<EvalReportInfo> {
    return this.request('/v1/eval', { method: 'POST', body: JSON.stringify(body) });
  }

  health(): Promise<HealthResponse> {
    return this.request('/v1/healthz');
  }
}
