import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { pollJob } from '../src/pollJob.js';
import { stubFetch } from './helpers.js';

describe('pollJob', () => {
  it('keeps polling until the job is done', async () => {
    const api = new ApiClient(
      '',
      stubFetch({
        'GET /jobs/j1': {
          body: null,
          sequence: [
            { job_id: 'j1', scenario_id: 's', status: 'running' },
            { job_id: 'j1', scenario_id: 's', status: 'running' },
            { job_id: 'j1', scenario_id: 's', status: 'done', plan_id: 's' },
          ],
        },
      }),
    );
    const job = await pollJob(api, 'j1', 1);
    expect(job.status).toBe('done');
    expect(job.plan_id).toBe('s');
    expect(api.recorded).toHaveLength(3);
  });

  it('rejects with the job error on failure', async () => {
    const api = new ApiClient(
      '',
      stubFetch({
        'GET /jobs/j2': {
          body: {
            job_id: 'j2',
            scenario_id: 's',
            status: 'failed',
            error: { code: 'solver_budget_exceeded', message: 'day 4 timed out' },
          },
        },
      }),
    );
    await expect(pollJob(api, 'j2', 1)).rejects.toThrow('solver_budget_exceeded');
  });
});
