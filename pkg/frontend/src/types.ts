/** Payload shapes of the planner service API. */

export interface PatientPayload {
  patient_id: string;
  gender: string;
  contagious: boolean;
  diagnosis: string;
  arrival_day: number;
}

export interface ScenarioPayload {
  scenario_id: string;
  ward_ref: string;
  horizon_days: number;
  patients: PatientPayload[];
  version: number;
}

export interface AllocationEntry {
  patient_id: string;
  room_id: string;
  gender: string;
  moved: boolean;
}

export type DayStatus = 'feasible' | 'infeasible' | 'budget_exceeded';

export interface PlanDayPayload {
  day: number;
  status: DayStatus;
  allocations?: AllocationEntry[];
}

export interface PlanPayload {
  plan_id: string;
  scenario_id: string;
  ward_id: string;
  parallel_tasks: boolean;
  days: PlanDayPayload[];
  summary: {
    total_days: number;
    total_moves: number;
    infeasible_days: number[];
    budget_exceeded_days: number[];
  };
}

export interface JobPayload {
  job_id: string;
  scenario_id: string;
  status: 'running' | 'done' | 'failed';
  plan_id?: string;
  plan?: PlanPayload;
  error?: { code: string; message: string };
}

export interface DiffChange {
  patient_id: string;
  room_a: string;
  room_b: string;
}

export interface DiffDay {
  day: number;
  status_a: string | null;
  status_b: string | null;
  changed: DiffChange[];
  only_a: string[];
  only_b: string[];
}

export interface DiffPayload {
  plan_a: string;
  plan_b: string;
  days: DiffDay[];
  move_delta: number;
  infeasible_delta: { only_a: number[]; only_b: number[] };
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
