/**
 * Dashboard wiring. Four flows:
 *   1. ward editor: load /wards/{id}, add/remove/change rooms, PUT back
 *   2. scenario editor: paste CSV or run the synthetic generator
 *   3. plan runs: start job, poll, render day grids with a scrubber
 *   4. what-if: re-plan a variant scenario and render the diff view
 */

import { ApiClient, ApiError } from './api.js';
import { buildDiffView } from './diffView.js';
import { buildGridView } from './gridView.js';
import { pollJob } from './pollJob.js';
import { renderDiff, renderGrid } from './render.js';
import type { PlanPayload, ScenarioPayload } from './types.js';
import {
  parseWardDocument,
  removeRoom,
  serializeWardDocument,
  upsertRoom,
  type WardDocument,
} from './wardDoc.js';

const api = new ApiClient('');

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function flash(message: string, isError = false): void {
  const box = el<HTMLDivElement>('messages');
  box.textContent = message;
  box.className = isError ? 'messages messages--error' : 'messages';
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.status === 409) {
      return `${err.code}: ${err.message} — reload the resource and retry`;
    }
    return `${err.code}: ${err.message}`;
  }
  return String(err);
}

// -- ward editor ------------------------------------------------------------

let wardDoc: WardDocument | null = null;

function renderRoomTable(): void {
  if (!wardDoc) return;
  const tbody = el<HTMLTableSectionElement>('room-rows');
  tbody.innerHTML = '';
  for (const room of wardDoc.rooms) {
    const row = document.createElement('tr');
    row.innerHTML =
      `<td>${room.room_id}</td><td>${room.capacity}</td><td>${room.category}</td>` +
      `<td><button data-remove="${room.room_id}">remove</button></td>`;
    tbody.appendChild(row);
  }
  tbody.querySelectorAll('button[data-remove]').forEach((button) => {
    button.addEventListener('click', () => {
      wardDoc = removeRoom(wardDoc!, (button as HTMLButtonElement).dataset.remove!);
      renderRoomTable();
    });
  });
  const selector = el<HTMLSelectElement>('room-category');
  selector.innerHTML = wardDoc.categories
    .map((c) => `<option value="${c}">${c}</option>`)
    .join('');
}

async function loadWard(): Promise<void> {
  const wardId = el<HTMLInputElement>('ward-id').value.trim();
  try {
    const text = await api.getWardDocument(wardId);
    wardDoc = parseWardDocument(text);
    renderRoomTable();
    flash(`ward ${wardId}: ${wardDoc.rooms.length} rooms loaded`);
  } catch (err) {
    flash(describeError(err), true);
  }
}

async function saveWard(): Promise<void> {
  if (!wardDoc) return;
  const wardId = el<HTMLInputElement>('ward-id').value.trim();
  try {
    const result = await api.putWardDocument(wardId, serializeWardDocument(wardDoc));
    flash(`ward ${result.ward_id} saved (v${result.version})`);
  } catch (err) {
    flash(describeError(err), true);
  }
}

// -- scenario editor ----------------------------------------------------------

async function uploadCsv(): Promise<void> {
  const scenarioId = el<HTMLInputElement>('scenario-id').value.trim();
  const wardId = el<HTMLInputElement>('ward-id').value.trim();
  const csv = el<HTMLTextAreaElement>('scenario-csv').value;
  try {
    const scenario = await api.createScenario({
      scenario_id: scenarioId,
      ward_ref: wardId,
      csv,
    });
    flash(`scenario ${scenario.scenario_id}: ${scenario.patients.length} patients over ${scenario.horizon_days} days`);
  } catch (err) {
    flash(describeError(err), true);
  }
}

async function generateScenario(): Promise<void> {
  const scenarioId = el<HTMLInputElement>('scenario-id').value.trim();
  const wardId = el<HTMLInputElement>('ward-id').value.trim();
  try {
    const scenario = await api.generateScenario(scenarioId, {
      ward_ref: wardId,
      patients: parseInt(el<HTMLInputElement>('gen-patients').value, 10),
      days: parseInt(el<HTMLInputElement>('gen-days').value, 10),
      seed: parseInt(el<HTMLInputElement>('gen-seed').value, 10),
      contagion_rate: parseFloat(el<HTMLInputElement>('gen-contagion').value),
    });
    flash(`generated ${scenario.patients.length} patients over ${scenario.horizon_days} days`);
  } catch (err) {
    flash(describeError(err), true);
  }
}

// -- plan runs ----------------------------------------------------------------

let currentPlan: PlanPayload | null = null;
let currentScenario: ScenarioPayload | null = null;

function showDay(day: number): void {
  if (!currentPlan || !wardDoc) return;
  const view = buildGridView(currentPlan, day, wardDoc.rooms, currentScenario ?? undefined);
  el<HTMLDivElement>('grid-host').innerHTML = renderGrid(view);
  el<HTMLSpanElement>('scrubber-label').textContent =
    `day ${day} / ${currentPlan.summary.total_days}`;
}

async function runPlan(): Promise<void> {
  const scenarioId = el<HTMLInputElement>('scenario-id').value.trim();
  try {
    flash('planning…');
    currentScenario = await api.getScenario(scenarioId);
    const job = await api.startPlan(scenarioId, {});
    const finished = await pollJob(api, job.job_id);
    currentPlan = await api.getPlan(finished.plan_id!);
    const scrubber = el<HTMLInputElement>('day-scrubber');
    scrubber.min = '1';
    scrubber.max = String(currentPlan.summary.total_days);
    scrubber.value = '1';
    showDay(1);
    const skipped = currentPlan.summary.infeasible_days.length;
    flash(
      `plan ${currentPlan.plan_id}: ${currentPlan.summary.total_days} days, ` +
        `${currentPlan.summary.total_moves} moves` +
        (skipped ? `, ${skipped} infeasible day(s)` : ''),
    );
  } catch (err) {
    flash(describeError(err), true);
  }
}

// -- what-if comparison ---------------------------------------------------------

async function comparePlans(): Promise<void> {
  const planA = el<HTMLInputElement>('diff-plan-a').value.trim();
  const planB = el<HTMLInputElement>('diff-plan-b').value.trim();
  try {
    const diff = await api.getDiff(planA, planB);
    el<HTMLDivElement>('diff-host').innerHTML = renderDiff(buildDiffView(diff));
    flash(`diff: ${diff.days.length} day(s) differ, move delta ${diff.move_delta}`);
  } catch (err) {
    flash(describeError(err), true);
  }
}

export function wire(): void {
  el<HTMLButtonElement>('ward-load').addEventListener('click', loadWard);
  el<HTMLButtonElement>('ward-save').addEventListener('click', saveWard);
  el<HTMLButtonElement>('room-add').addEventListener('click', () => {
    if (!wardDoc) return;
    wardDoc = upsertRoom(wardDoc, {
      room_id: el<HTMLInputElement>('room-id').value.trim(),
      capacity: parseInt(el<HTMLInputElement>('room-capacity').value, 10),
      category: el<HTMLSelectElement>('room-category').value,
    });
    renderRoomTable();
  });
  el<HTMLButtonElement>('scenario-upload').addEventListener('click', uploadCsv);
  el<HTMLButtonElement>('scenario-generate').addEventListener('click', generateScenario);
  el<HTMLButtonElement>('plan-run').addEventListener('click', runPlan);
  el<HTMLInputElement>('day-scrubber').addEventListener('input', (event) => {
    showDay(parseInt((event.target as HTMLInputElement).value, 10));
  });
  el<HTMLButtonElement>('diff-run').addEventListener('click', comparePlans);
}

if (typeof document !== 'undefined' && document.getElementById('ward-load')) {
  wire();
}
