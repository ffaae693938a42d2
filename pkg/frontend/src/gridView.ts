/**
 * Room-grid view model for one plan day. Chips are placed purely from the
 * fetched plan payload (room_id, gender, moved per patient); the grid never
 * recomputes placements. Room shape comes from the ward document response,
 * the contagious flag from the scenario response.
 */

import type { PlanDayPayload, PlanPayload, ScenarioPayload } from './types.js';
import type { RoomSpec } from './wardDoc.js';

export const GENDER_COLOR: Record<string, string> = {
  M: 'chip--male', // blue
  F: 'chip--female', // red
};

export interface OccupantChip {
  patientId: string;
  gender: string;
  colorClass: string;
  moved: boolean;
  contagious: boolean;
}

export interface RoomCell {
  roomId: string;
  capacity: number;
  category: string;
  chips: OccupantChip[];
  freeBays: number;
}

export interface RoomGridView {
  day: number;
  status: PlanDayPayload['status'];
  banner: string | null;
  rooms: RoomCell[];
}

export function buildGridView(
  plan: PlanPayload,
  day: number,
  rooms: RoomSpec[],
  scenario?: ScenarioPayload,
): RoomGridView {
  const dayEntry = plan.days.find((d) => d.day === day);
  if (!dayEntry) {
    throw new Error(`plan ${plan.plan_id} has no day ${day}`);
  }
  const contagiousBy = new Map<string, boolean>(
    (scenario?.patients ?? []).map((p) => [p.patient_id, p.contagious]),
  );
  const cells = rooms.map((room) => ({
    roomId: room.room_id,
    capacity: room.capacity,
    category: room.category,
    chips: [] as OccupantChip[],
    freeBays: room.capacity,
  }));
  const byRoom = new Map(cells.map((c) => [c.roomId, c]));
  for (const entry of dayEntry.allocations ?? []) {
    const cell = byRoom.get(entry.room_id);
    if (!cell) {
      throw new Error(`allocation references unknown room ${entry.room_id}`);
    }
    cell.chips.push({
      patientId: entry.patient_id,
      gender: entry.gender,
      colorClass: GENDER_COLOR[entry.gender] ?? 'chip--other',
      moved: entry.moved,
      contagious: contagiousBy.get(entry.patient_id) ?? false,
    });
    cell.freeBays -= 1;
  }
  let banner: string | null = null;
  if (dayEntry.status === 'infeasible') {
    banner = `Day ${day}: no feasible allocation — previous placements kept`;
  } else if (dayEntry.status === 'budget_exceeded') {
    banner = `Day ${day}: solver budget exceeded — previous placements kept`;
  }
  return { day, status: dayEntry.status, banner, rooms: cells };
}
