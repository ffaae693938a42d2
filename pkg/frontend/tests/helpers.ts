import { readFileSync } from 'node:fs';

export function jsonFixture<T>(name: string): T {
  return JSON.parse(readFileSync(new URL(`../fixtures/${name}`, import.meta.url), 'utf-8')) as T;
}

export function textFixture(name: string): string {
  return readFileSync(new URL(`../fixtures/${name}`, import.meta.url), 'utf-8');
}

export interface StubRoute {
  status?: number;
  body: unknown;
  /** rotate through bodies on repeated calls (e.g. job polling) */
  sequence?: unknown[];
}

/** Minimal fake server: routes keyed by "METHOD /path". */
export function stubFetch(routes: Record<string, StubRoute>) {
  const hits: Record<string, number> = {};
  return async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? 'GET';
    const key = `${method} ${url}`;
    const route = routes[key];
    if (!route) {
      return new Response(JSON.stringify({ code: 'not_found', message: `no stub for ${key}` }), {
        status: 404,
        headers: { 'content-type': 'application/json' },
      });
    }
    hits[key] = (hits[key] ?? 0) + 1;
    let body = route.body;
    if (route.sequence) {
      body = route.sequence[Math.min(hits[key] - 1, route.sequence.length - 1)];
    }
    const isText = typeof body === 'string';
    return new Response(isText ? (body as string) : JSON.stringify(body), {
      status: route.status ?? 200,
      headers: { 'content-type': isText ? 'text/plain' : 'application/json' },
    });
  };
}
