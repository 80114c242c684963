// Typed client over fetch.  Concurrent identical GETs share one in-flight
// request; responses are never cached, so every render reflects the latest
// server state.

import type {
  ExplainAction,
  ExplainResult,
  IngestStats,
  NotifyResult,
  RecommendationPage,
  RespondAction,
  RespondResult,
  ServerConfig,
  TeamView,
  UserRecord,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

async function parseError(response: Response): Promise<ApiRequestError> {
  let code = "error";
  let message = response.statusText;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON body: keep the status text
  }
  return new ApiRequestError(response.status, code, message);
}

export class ApiClient {
  private inFlight = new Map<string, Promise<unknown>>();

  constructor(
    private readonly base: string = "",
    public role: string = "participant",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, {
      ...init,
      headers: {
        "Content-Type": "application/json",
        "X-Role": this.role,
        ...(init?.headers ?? {}),
      },
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  /** GET with de-duplication: concurrent calls to one path share a request. */
  private get<T>(path: string): Promise<T> {
    const pending = this.inFlight.get(path);
    if (pending) {
      return pending as Promise<T>;
    }
    const request = this.request<T>(path).finally(() => {
      this.inFlight.delete(path);
    });
    this.inFlight.set(path, request);
    return request;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  getConfig(): Promise<ServerConfig> {
    return this.get("/config");
  }

  getUser(username: string): Promise<UserRecord> {
    return this.get(`/users/${encodeURIComponent(username)}`);
  }

  getRecommendations(username: string, page: number): Promise<RecommendationPage> {
    return this.get(
      `/recommendations/user/${encodeURIComponent(username)}?page=${page}`,
    );
  }

  getTeamsForCall(callId: string): Promise<TeamView[]> {
    return this.get(`/teams?call_id=${encodeURIComponent(callId)}`);
  }

  notify(teamId: string): Promise<NotifyResult> {
    return this.post(`/teams/${encodeURIComponent(teamId)}/notify`);
  }

  respond(
    teamId: string,
    username: string,
    action: RespondAction,
  ): Promise<RespondResult> {
    return this.post(`/teams/${encodeURIComponent(teamId)}/respond`, {
      username,
      action,
    });
  }

  explain(
    teamId: string,
    action: ExplainAction,
    userId: string,
    inUserId?: string,
  ): Promise<ExplainResult> {
    return this.post(`/teams/${encodeURIComponent(teamId)}/explain`, {
      action,
      user_id: userId,
      in_user_id: inUserId ?? null,
    });
  }

  sendFeedback(
    username: string,
    callId: string,
    rating: number,
  ): Promise<{ sequence: number }> {
    return this.post("/feedback", { username, call_id: callId, rating });
  }

  adminIngest(): Promise<IngestStats> {
    return this.post("/admin/ingest");
  }

  adminReindex(): Promise<{ calls: number; users: number; teams: number }> {
    return this.post("/admin/reindex");
  }
}
