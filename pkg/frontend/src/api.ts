/**
 * Typed client for the planner service. The fetch function is injectable so
 * tests can stub the server, and every exchange is recorded so tests can
 * trace rendered output back to response fields.
 */

import type {
  ApiErrorBody,
  DiffPayload,
  JobPayload,
  PlanPayload,
  ScenarioPayload,
} from './types.js';

export interface RecordedExchange {
  method: string;
  path: string;
  requestBody?: unknown;
  status: number;
  responseBody: unknown;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly recorded: RecordedExchange[] = [];

  constructor(
    private baseUrl = '',
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async exchange<T>(method: string, path: string, body?: unknown, raw = false): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      if (raw) {
        init.body = body as string;
        init.headers = { 'content-type': 'text/plain' };
      } else {
        init.body = JSON.stringify(body);
        init.headers = { 'content-type': 'application/json' };
      }
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    let parsed: unknown = text;
    const contentType = response.headers.get('content-type') ?? '';
    if (contentType.includes('json') || text.startsWith('{') || text.startsWith('[')) {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = text;
      }
    }
    this.recorded.push({
      method,
      path,
      requestBody: body,
      status: response.status,
      responseBody: parsed,
    });
    if (!response.ok) {
      const err = parsed as Partial<ApiErrorBody>;
      throw new ApiError(response.status, err.code ?? 'unknown_error', err.message ?? text);
    }
    return parsed as T;
  }

  getWardDocument(wardId: string): Promise<string> {
    return this.exchange<string>('GET', `/wards/${wardId}`);
  }

  putWardDocument(wardId: string, document: string): Promise<{ ward_id: string; version: number }> {
    return this.exchange('PUT', `/wards/${wardId}`, document, true);
  }

  getScenario(scenarioId: string): Promise<ScenarioPayload> {
    return this.exchange('GET', `/scenarios/${scenarioId}`);
  }

  listScenarios(): Promise<{ scenarios: string[] }> {
    return this.exchange('GET', '/scenarios');
  }

  createScenario(body: Record<string, unknown>): Promise<ScenarioPayload> {
    return this.exchange('POST', '/scenarios', body);
  }

  updateScenario(scenarioId: string, body: Record<string, unknown>): Promise<ScenarioPayload> {
    return this.exchange('PUT', `/scenarios/${scenarioId}`, body);
  }

  generateScenario(
    scenarioId: string,
    params: { ward_ref: string; patients: number; days: number; seed: number; contagion_rate?: number },
  ): Promise<ScenarioPayload> {
    return this.exchange('POST', `/scenarios/${scenarioId}/generate`, params);
  }

  startPlan(scenarioId: string, config: Record<string, unknown> = {}): Promise<JobPayload> {
    return this.exchange('POST', `/scenarios/${scenarioId}/plan`, config);
  }

  getJob(jobId: string): Promise<JobPayload> {
    return this.exchange('GET', `/jobs/${jobId}`);
  }

  getPlan(planId: string): Promise<PlanPayload> {
    return this.exchange('GET', `/plans/${planId}`);
  }

  getDiff(planA: string, planB: string): Promise<DiffPayload> {
    return this.exchange('GET', `/plans/${planA}/diff/${planB}`);
  }
}
