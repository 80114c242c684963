// Browser wiring: a username picker, the paginated card list with detail
// pane (participant view), and an admin view with call-centric teams,
// constraint what-ifs, and ingest/reindex.  All data comes from the API;
// the page re-renders from the latest responses after every call.

import { ApiClient, ApiRequestError } from "./api.js";
import { cardList, detailPane, errorBanner, reportTable, statsTable, userPanel } from "./render.js";
import {
  applyWorkflowResult,
  initialState,
  selectedTeam,
  withPage,
  withSelection,
  type ViewState,
} from "./state.js";
import type { ExplainAction, RespondAction } from "./types.js";

const api = new ApiClient("");
let state: ViewState = initialState("");
let pageNumber = 1;

function element(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found;
}

function showError(target: HTMLElement, error: unknown): void {
  if (error instanceof ApiRequestError) {
    target.innerHTML = errorBanner(error.code, `${error.status}: ${error.message}`);
  } else {
    target.innerHTML = errorBanner("error", String(error));
  }
}

function renderParticipant(): void {
  element("cards").innerHTML = cardList(state.page, state.selectedTeamId);
  element("detail").innerHTML = detailPane(selectedTeam(state), state.username);
}

async function loadUser(): Promise<void> {
  const username = (element("username") as HTMLInputElement).value.trim();
  if (!username) return;
  state = initialState(username);
  pageNumber = 1;
  try {
    const [user, page] = await Promise.all([
      api.getUser(username),
      api.getRecommendations(username, pageNumber),
    ]);
    element("user-panel").innerHTML = userPanel(user);
    state = withPage(state, page);
    element("messages").innerHTML = "";
  } catch (error) {
    showError(element("messages"), error);
  }
  renderParticipant();
}

async function loadPage(delta: number): Promise<void> {
  if (!state.page) return;
  const next = Math.max(1, pageNumber + delta);
  try {
    const page = await api.getRecommendations(state.username, next);
    if (page.recommendations.length === 0 && next > 1) return;
    pageNumber = next;
    state = withPage(state, page);
  } catch (error) {
    showError(element("messages"), error);
  }
  renderParticipant();
}

async function respond(teamId: string, action: RespondAction): Promise<void> {
  try {
    const result = await api.respond(teamId, state.username, action);
    state = applyWorkflowResult(state, result);
    element("messages").innerHTML = "";
  } catch (error) {
    // surfaced, never applied locally: the stored state is authoritative
    showError(element("messages"), error);
  }
  renderParticipant();
}

// --- admin view -----------------------------------------------------------

async function loadTeamsForCall(): Promise<void> {
  const callId = (element("admin-call") as HTMLInputElement).value.trim();
  if (!callId) return;
  const target = element("admin-teams");
  try {
    const teams = await api.getTeamsForCall(callId);
    if (teams.length === 0) {
      target.innerHTML = '<p class="empty">No teams for this call.</p>';
      return;
    }
    target.innerHTML = teams
      .map(
        (team) =>
          `<section class="admin-team" data-team-id="${team.team_id}">` +
          `<h4>${team.team_id} (${team.state})</h4>` +
          reportTable(team.report) +
          "</section>",
      )
      .join("");
  } catch (error) {
    showError(target, error);
  }
}

async function runWhatIf(): Promise<void> {
  const teamId = (element("whatif-team") as HTMLInputElement).value.trim();
  const action = (element("whatif-action") as HTMLSelectElement)
    .value as ExplainAction;
  const userId = (element("whatif-user") as HTMLInputElement).value.trim();
  const inUserId = (element("whatif-in-user") as HTMLInputElement).value.trim();
  const target = element("whatif-report");
  try {
    const result = await api.explain(
      teamId,
      action,
      userId,
      inUserId || undefined,
    );
    // rendered verbatim from the response; the service is the oracle
    target.innerHTML = reportTable(result.report);
  } catch (error) {
    showError(target, error);
  }
}

async function runIngest(): Promise<void> {
  const target = element("admin-stats");
  try {
    api.role = "admin";
    const stats = await api.adminIngest();
    target.innerHTML = statsTable(stats);
  } catch (error) {
    showError(target, error);
  }
}

async function runReindex(): Promise<void> {
  const target = element("admin-stats");
  try {
    api.role = "admin";
    const result = await api.adminReindex();
    target.innerHTML = `<p>reindexed: ${result.teams} teams over ${result.calls} calls for ${result.users} users</p>`;
  } catch (error) {
    showError(target, error);
  }
}

function wire(): void {
  element("load-user").addEventListener("click", () => void loadUser());
  element("prev-page").addEventListener("click", () => void loadPage(-1));
  element("next-page").addEventListener("click", () => void loadPage(1));
  element("cards").addEventListener("click", (event) => {
    const card = (event.target as HTMLElement).closest<HTMLElement>("[data-team-id]");
    if (card?.dataset.teamId) {
      state = withSelection(state, card.dataset.teamId);
      renderParticipant();
    }
  });
  element("detail").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>(
      "button[data-action]",
    );
    if (button && !button.disabled && button.dataset.teamId) {
      void respond(button.dataset.teamId, button.dataset.action as RespondAction);
    }
  });
  element("admin-load").addEventListener("click", () => void loadTeamsForCall());
  element("whatif-run").addEventListener("click", () => void runWhatIf());
  element("admin-ingest").addEventListener("click", () => void runIngest());
  element("admin-reindex").addEventListener("click", () => void runReindex());
}

document.addEventListener("DOMContentLoaded", wire);
