import type {
  JudgmentAck,
  Outcome,
  PopulationView,
  QueryView,
  SessionConfig,
  SessionState,
} from './types.js';

export class ApiError extends Error {
  code: string;
  field: string | null;
  status: number;

  constructor(status: number, code: string, message: string, field?: string) {
    super(message);
    this.status = status;
    this.code = code;
    this.field = field ?? null;
  }
}

type FetchFn = typeof fetch;

/** Thin client over the five /v1 session endpoints plus abort. */
export class SessionApi {
  private base: string;
  private fetchFn: FetchFn;

  constructor(base = '', fetchFn: FetchFn = fetch) {
    this.base = base.replace(/\/$/, '');
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(`${this.base}${path}`, init);
    const data = await res.json().catch(() => null);
    if (!res.ok) {
      if (data && typeof data.code === 'string') {
        throw new ApiError(res.status, data.code, data.message, data.field);
      }
      throw new ApiError(res.status, 'http_error', `request failed: ${res.status}`);
    }
    return data as T;
  }

  createSession(config: SessionConfig): Promise<{ session_id: string }> {
    return this.request('POST', '/v1/sessions', config);
  }

  listSessions(): Promise<{ sessions: SessionState[] }> {
    return this.request('GET', '/v1/sessions');
  }

  getState(id: string): Promise<SessionState> {
    return this.request('GET', `/v1/sessions/${id}`);
  }

  getQuery(id: string): Promise<QueryView> {
    return this.request('GET', `/v1/sessions/${id}/query`);
  }

  submitJudgment(id: string, pairIndex: number, outcome: Outcome): Promise<JudgmentAck> {
    return this.request('POST', `/v1/sessions/${id}/judgment`, {
      pair_index: pairIndex,
      outcome,
    });
  }

  getPopulation(id: string): Promise<PopulationView> {
    return this.request('GET', `/v1/sessions/${id}/population`);
  }

  abortSession(id: string): Promise<{ aborting: boolean }> {
    return this.request('DELETE', `/v1/sessions/${id}`);
  }
}
