import type { ApiClient } from './api.js';
import type { JobPayload } from './types.js';

/**
 * Poll a plan job until it leaves the running state. Resolves with the job
 * on success, rejects with the job's error on failure.
 */
export async function pollJob(
  api: ApiClient,
  jobId: string,
  intervalMs = 500,
  maxAttempts = 600,
): Promise<JobPayload> {
  for (let attempt = 0; attempt < maxAttempts; attempt++) {
    const job = await api.getJob(jobId);
    if (job.status === 'done') {
      return job;
    }
    if (job.status === 'failed') {
      throw new Error(job.error ? `${job.error.code}: ${job.error.message}` : 'plan job failed');
    }
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
  throw new Error(`job ${jobId} still running after ${maxAttempts} polls`);
}
