// View state is a pure function of the latest server responses.  These
// helpers fold a server response into the state; nothing is updated
// optimistically, the server-reported values always win.

import type {
  RecommendationPage,
  RespondResult,
  TeamView,
} from "./types.js";

export interface ViewState {
  username: string;
  page: RecommendationPage | null;
  selectedTeamId: string | null;
}

export function initialState(username: string): ViewState {
  return { username, page: null, selectedTeamId: null };
}

export function withPage(state: ViewState, page: RecommendationPage): ViewState {
  const stillVisible = page.recommendations.some(
    (team) => team.team_id === state.selectedTeamId,
  );
  return {
    ...state,
    page,
    selectedTeamId: stillVisible ? state.selectedTeamId : null,
  };
}

export function withSelection(state: ViewState, teamId: string | null): ViewState {
  return { ...state, selectedTeamId: teamId };
}

export function selectedTeam(state: ViewState): TeamView | null {
  if (!state.page || !state.selectedTeamId) return null;
  return (
    state.page.recommendations.find((t) => t.team_id === state.selectedTeamId) ??
    null
  );
}

/** Fold a respond (or notify) result into the page: the badge state and
 * response map become exactly what the server reported. */
export function applyWorkflowResult(
  state: ViewState,
  result: RespondResult | { team_id: string; state: string },
): ViewState {
  if (!state.page) return state;
  const recommendations = state.page.recommendations.map((team) =>
    team.team_id === result.team_id
      ? {
          ...team,
          state: result.state,
          responses: "responses" in result ? result.responses : team.responses,
        }
      : team,
  );
  return { ...state, page: { ...state.page, recommendations } };
}
