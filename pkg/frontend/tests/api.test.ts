import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import type { PlanPayload } from '../src/types.js';
import { jsonFixture, stubFetch, textFixture } from './helpers.js';

describe('api client', () => {
  it('fetches typed payloads and records the exchange', async () => {
    const plan = jsonFixture<PlanPayload>('plan.json');
    const api = new ApiClient('', stubFetch({ 'GET /plans/plan-base': { body: plan } }));
    const got = await api.getPlan('plan-base');
    expect(got.summary.total_days).toBe(plan.summary.total_days);
    expect(api.recorded).toHaveLength(1);
    expect(api.recorded[0]).toMatchObject({
      method: 'GET',
      path: '/plans/plan-base',
      status: 200,
    });
    expect(api.recorded[0].responseBody).toEqual(plan);
  });

  it('returns ward documents as text', async () => {
    const ward = textFixture('ward.txt');
    const api = new ApiClient('', stubFetch({ 'GET /wards/main': { body: ward } }));
    expect(await api.getWardDocument('main')).toBe(ward);
  });

  it('raises machine-readable errors', async () => {
    const api = new ApiClient(
      '',
      stubFetch({
        'GET /wards/ghost': {
          status: 404,
          body: { code: 'ward_not_found', message: "ward 'ghost' not found" },
        },
      }),
    );
    const err = await api.getWardDocument('ghost').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe('ward_not_found');
  });

  it('surfaces version conflicts distinctly', async () => {
    const api = new ApiClient(
      '',
      stubFetch({
        'PUT /scenarios/s1': {
          status: 409,
          body: { code: 'version_conflict', message: 'stale' },
        },
      }),
    );
    const err = await api.updateScenario('s1', { version: 1 }).catch((e) => e);
    expect(err.code).toBe('version_conflict');
    expect(err.status).toBe(409);
  });
});
