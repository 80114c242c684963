// Pure render functions: latest server responses in, HTML strings out.
// Every displayed number comes from an API field, stringified verbatim;
// re-rendering the same responses reproduces the identical view.

import type {
  ConstraintReport,
  IngestStats,
  RecommendationPage,
  TeamView,
  UserRecord,
} from "./types.js";
import { TERMINAL_STATES } from "./types.js";

export function escapeHtml(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function stateBadge(state: string): string {
  return `<span class="badge badge-${escapeHtml(state)}" data-role="state-badge">${escapeHtml(state)}</span>`;
}

export function userPanel(user: UserRecord): string {
  const areas = user.skills.map((s) => escapeHtml(s.display)).join(", ");
  return [
    '<div class="user-panel">',
    `<h2>${escapeHtml(user.display_name)}</h2>`,
    `<p class="designation">${escapeHtml(user.designation)}</p>`,
    `<p class="expertise">Areas of expertise: ${areas || "(none on file)"}</p>`,
    "</div>",
  ].join("");
}

export function recommendationCard(team: TeamView, selected: boolean): string {
  const title = team.call.title ?? team.call_id;
  const members = team.members
    .map((m) => `${escapeHtml(m.display_name)} (${m.score})`)
    .join(", ");
  const budget =
    team.proposed_budget === null
      ? "budget unknown"
      : `proposed total budget $${team.proposed_budget}`;
  const deadline = team.call.deadline
    ? `deadline ${escapeHtml(team.call.deadline)}`
    : "no upcoming deadline";
  return [
    `<article class="card${selected ? " selected" : ""}" data-team-id="${escapeHtml(team.team_id)}">`,
    `<h3>${escapeHtml(title)}</h3>`,
    `<p class="agency">${escapeHtml(team.call.agency_id)} &middot; ${deadline}</p>`,
    `<p class="members">Team: ${members}</p>`,
    `<p class="budget">${budget}</p>`,
    stateBadge(team.state),
    "</article>",
  ].join("");
}

export function cardList(
  page: RecommendationPage | null,
  selectedTeamId: string | null,
): string {
  if (page === null) {
    return '<p class="empty">Pick a username to load recommendations.</p>';
  }
  if (page.total_recommendations === 0) {
    return '<p class="empty" data-role="empty-state">No recommendations yet. Check back after the next reindex.</p>';
  }
  if (page.recommendations.length === 0) {
    return '<p class="empty" data-role="empty-state">No recommendations on this page.</p>';
  }
  const cards = page.recommendations
    .map((team) => recommendationCard(team, team.team_id === selectedTeamId))
    .join("");
  const pager =
    `<nav class="pager" data-role="pager">page ${page.page} of ${page.total_pages}` +
    ` (${page.total_recommendations} recommendations)</nav>`;
  return cards + pager;
}

export function reportTable(report: ConstraintReport): string {
  const rows = report.entries
    .map(
      (entry) =>
        `<tr class="${entry.satisfied ? "ok" : "violated"}" data-constraint="${escapeHtml(entry.constraint)}">` +
        `<td>${escapeHtml(entry.constraint)}</td>` +
        `<td>${entry.satisfied ? "satisfied" : "violated"}</td>` +
        `<td>${escapeHtml(entry.explanation)}</td></tr>`,
    )
    .join("");
  const verdict = report.all_satisfied ? "all satisfied" : "has violations";
  return (
    `<table class="report" data-role="report" data-verdict="${verdict}">` +
    `<thead><tr><th>constraint</th><th>status</th><th>detail</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** Accept/decline controls: only members see buttons, and they go inert in
 * terminal states or once that member has responded (server stays
 * authoritative either way). */
export function respondControls(team: TeamView, currentUser: string): string {
  const isMember = team.members.some((m) => m.user_id === currentUser);
  if (!isMember) {
    return "";
  }
  const responded = currentUser in team.responses;
  const disabled =
    TERMINAL_STATES.has(team.state) || team.state === "proposed" || responded
      ? " disabled"
      : "";
  return (
    `<div class="respond" data-role="respond-controls">` +
    `<button data-action="accept" data-team-id="${escapeHtml(team.team_id)}"${disabled}>Accept</button>` +
    `<button data-action="decline" data-team-id="${escapeHtml(team.team_id)}"${disabled}>Decline</button>` +
    (responded ? `<span class="note">you responded: ${escapeHtml(team.responses[currentUser])}</span>` : "") +
    `</div>`
  );
}

export function detailPane(team: TeamView | null, currentUser: string): string {
  if (team === null) {
    return '<p class="empty">Select a recommendation to see the details.</p>';
  }
  const title = team.call.title ?? team.call_id;
  const rows = [
    `<h3>${escapeHtml(title)}</h3>`,
    stateBadge(team.state),
    `<dl>`,
    `<dt>Agency</dt><dd>${escapeHtml(team.call.agency_id)}</dd>`,
    `<dt>Link</dt><dd><a href="${escapeHtml(team.call.url)}">${escapeHtml(team.call.url)}</a></dd>`,
    `<dt>Deadline</dt><dd>${escapeHtml(team.call.deadline ?? "none upcoming")}</dd>`,
    `<dt>Lead</dt><dd>${escapeHtml(team.lead.display_name)} (score ${team.lead.score})</dd>`,
    `<dt>Members</dt><dd>${team.members
      .map((m) => `${escapeHtml(m.display_name)} (score ${m.score})`)
      .join(", ")}</dd>`,
    `<dt>Proposed total budget</dt><dd>${
      team.proposed_budget === null ? "unknown" : `$${team.proposed_budget}`
    }</dd>`,
    `<dt>Per-member allocation</dt><dd>${
      team.per_member_allocation === null ? "-" : `$${team.per_member_allocation}`
    }</dd>`,
    `</dl>`,
    reportTable(team.report),
    respondControls(team, currentUser),
  ];
  return `<div class="detail" data-team-id="${escapeHtml(team.team_id)}">${rows.join("")}</div>`;
}

export function statsTable(stats: IngestStats): string {
  const rows = Object.entries(stats.fields)
    .map(
      ([name, tally]) =>
        `<tr><td>${escapeHtml(name)}</td><td>${tally.extracted}</td>` +
        `<td>${tally.percent}${tally.empty_denominator ? " (no records)" : ""}</td></tr>`,
    )
    .join("");
  const funnel = stats.funnel
    ? `<p class="funnel">roster: ${Object.entries(stats.funnel)
        .map(([key, value]) => `${escapeHtml(key)}=${value}`)
        .join(", ")}</p>`
    : "";
  return (
    `<table class="stats" data-role="ingest-stats">` +
    `<thead><tr><th>type</th><th>number</th><th>% extracted</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    funnel
  );
}

export function errorBanner(code: string, message: string): string {
  return `<div class="error" data-role="error" data-code="${escapeHtml(code)}">${escapeHtml(message)}</div>`;
}
