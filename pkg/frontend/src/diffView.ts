/**
 * What-if comparison view model: a 1:1 presentation of the diff endpoint's
 * payload (kept verbatim in `raw` so tests can assert exact fidelity).
 */

import type { DiffPayload } from './types.js';

export interface DiffRow {
  day: number;
  statusA: string | null;
  statusB: string | null;
  statusChanged: boolean;
  reassignments: { patientId: string; from: string; to: string }[];
  droppedPatients: string[];
  addedPatients: string[];
}

export interface DiffView {
  planA: string;
  planB: string;
  moveDelta: number;
  moveDeltaLabel: string;
  newlyInfeasibleDays: number[];
  recoveredDays: number[];
  rows: DiffRow[];
  raw: DiffPayload;
}

export function buildDiffView(diff: DiffPayload): DiffView {
  return {
    planA: diff.plan_a,
    planB: diff.plan_b,
    moveDelta: diff.move_delta,
    moveDeltaLabel: diff.move_delta > 0 ? `+${diff.move_delta}` : `${diff.move_delta}`,
    newlyInfeasibleDays: diff.infeasible_delta.only_b,
    recoveredDays: diff.infeasible_delta.only_a,
    rows: diff.days.map((d) => ({
      day: d.day,
      statusA: d.status_a,
      statusB: d.status_b,
      statusChanged: d.status_a !== d.status_b,
      reassignments: d.changed.map((c) => ({
        patientId: c.patient_id,
        from: c.room_a,
        to: c.room_b,
      })),
      droppedPatients: d.only_a,
      addedPatients: d.only_b,
    })),
    raw: diff,
  };
}
