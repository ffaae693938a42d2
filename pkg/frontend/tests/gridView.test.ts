import { describe, expect, it } from 'vitest';

import { GENDER_COLOR, buildGridView } from '../src/gridView.js';
import { renderGrid } from '../src/render.js';
import type { PlanPayload, ScenarioPayload } from '../src/types.js';
import { parseWardDocument } from '../src/wardDoc.js';
import { jsonFixture, textFixture } from './helpers.js';

const plan = jsonFixture<PlanPayload>('plan.json');
const scenario = jsonFixture<ScenarioPayload>('scenario.json');
const rooms = parseWardDocument(textFixture('ward.txt')).rooms;

describe('room grid view', () => {
  it('places every chip exactly as the plan payload says', () => {
    const feasible = plan.days.filter((d) => d.status === 'feasible');
    expect(feasible.length).toBeGreaterThan(0);
    for (const day of feasible) {
      const view = buildGridView(plan, day.day, rooms, scenario);
      const chips = view.rooms.flatMap((room) =>
        room.chips.map((chip) => ({ ...chip, roomId: room.roomId })),
      );
      expect(chips).toHaveLength(day.allocations!.length);
      for (const entry of day.allocations!) {
        const chip = chips.find((c) => c.patientId === entry.patient_id)!;
        expect(chip.roomId).toBe(entry.room_id);
        expect(chip.gender).toBe(entry.gender);
        expect(chip.moved).toBe(entry.moved);
        expect(chip.colorClass).toBe(GENDER_COLOR[entry.gender]);
        const patient = scenario.patients.find((p) => p.patient_id === entry.patient_id)!;
        expect(chip.contagious).toBe(patient.contagious);
      }
    }
  });

  it('tracks free bays against room capacity', () => {
    const day = plan.days.find((d) => d.status === 'feasible')!;
    const view = buildGridView(plan, day.day, rooms, scenario);
    for (const room of view.rooms) {
      expect(room.freeBays).toBe(room.capacity - room.chips.length);
      expect(room.freeBays).toBeGreaterThanOrEqual(0);
    }
  });

  it('shows a banner on skipped days and no chips', () => {
    const skipped = plan.days.find((d) => d.status === 'infeasible');
    expect(skipped).toBeDefined();
    const view = buildGridView(plan, skipped!.day, rooms, scenario);
    expect(view.banner).toMatch(/no feasible allocation/);
    expect(view.rooms.every((room) => room.chips.length === 0)).toBe(true);
    const html = renderGrid(view);
    expect(html).toContain('banner--infeasible');
  });

  it('renders gender colors, move badges and contagion hatching', () => {
    const day = plan.days.find(
      (d) => d.status === 'feasible' && d.allocations!.some((a) => a.moved),
    )!;
    const view = buildGridView(plan, day.day, rooms, scenario);
    const html = renderGrid(view);
    for (const entry of day.allocations!) {
      expect(html).toContain(`data-patient="${entry.patient_id}"`);
    }
    expect(html).toContain('chip--male');
    expect(html).toContain('chip--female');
    expect(html).toContain('badge--moved');
    const contagiousPlaced = day.allocations!.some(
      (a) => scenario.patients.find((p) => p.patient_id === a.patient_id)!.contagious,
    );
    expect(html.includes('chip--contagious')).toBe(contagiousPlaced);
  });

  it('refuses days outside the plan', () => {
    expect(() => buildGridView(plan, 999, rooms, scenario)).toThrow(/no day 999/);
  });
});
