/** HTML renderers: pure string builders over the view models. */

import type { DiffView } from './diffView.js';
import type { RoomGridView } from './gridView.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderGrid(view: RoomGridView): string {
  const parts: string[] = [`<section class="day-grid" data-day="${view.day}">`];
  if (view.banner) {
    parts.push(`<div class="banner banner--${view.status}">${escapeHtml(view.banner)}</div>`);
  }
  for (const room of view.rooms) {
    parts.push(
      `<div class="room" data-room="${escapeHtml(room.roomId)}">` +
        `<header>${escapeHtml(room.roomId)}` +
        `<span class="badge badge--category">${escapeHtml(room.category)}</span>` +
        `<span class="bays">${room.chips.length}/${room.capacity}</span></header>`,
    );
    for (const chip of room.chips) {
      const classes = ['chip', chip.colorClass];
      if (chip.contagious) classes.push('chip--contagious');
      parts.push(
        `<span class="${classes.join(' ')}" data-patient="${escapeHtml(chip.patientId)}">` +
          escapeHtml(chip.patientId) +
          (chip.moved ? '<span class="badge badge--moved">&#8618;</span>' : '') +
          '</span>',
      );
    }
    for (let i = 0; i < room.freeBays; i++) {
      parts.push('<span class="chip chip--empty">&nbsp;</span>');
    }
    parts.push('</div>');
  }
  parts.push('</section>');
  return parts.join('');
}

export function renderDiff(view: DiffView): string {
  const parts: string[] = ['<section class="diff-view">'];
  parts.push(
    `<p class="diff-summary">Plan <b>${escapeHtml(view.planB)}</b> vs <b>${escapeHtml(view.planA)}</b>: ` +
      `move delta <b>${view.moveDeltaLabel}</b>` +
      (view.newlyInfeasibleDays.length
        ? `, newly infeasible days: ${view.newlyInfeasibleDays.join(', ')}`
        : '') +
      (view.recoveredDays.length
        ? `, recovered days: ${view.recoveredDays.join(', ')}`
        : '') +
      '</p>',
  );
  if (!view.rows.length) {
    parts.push('<p class="diff-empty">The plans are identical.</p>');
  }
  for (const row of view.rows) {
    parts.push(`<div class="diff-day" data-day="${row.day}"><h4>Day ${row.day}</h4>`);
    if (row.statusChanged) {
      parts.push(
        `<p class="diff-status">status: ${escapeHtml(String(row.statusA))} &rarr; ` +
          `${escapeHtml(String(row.statusB))}</p>`,
      );
    }
    for (const r of row.reassignments) {
      parts.push(
        `<p class="diff-change" data-patient="${escapeHtml(r.patientId)}">` +
          `${escapeHtml(r.patientId)}: ${escapeHtml(r.from)} &rarr; ${escapeHtml(r.to)}</p>`,
      );
    }
    if (row.droppedPatients.length) {
      parts.push(`<p class="diff-dropped">only in A: ${row.droppedPatients.map(escapeHtml).join(', ')}</p>`);
    }
    if (row.addedPatients.length) {
      parts.push(`<p class="diff-added">only in B: ${row.addedPatients.map(escapeHtml).join(', ')}</p>`);
    }
    parts.push('</div>');
  }
  parts.push('</section>');
  return parts.join('');
}
