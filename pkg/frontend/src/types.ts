// Client-side mirror of the API payloads.  The UI renders only
// server-supplied data; nothing here is computed on the client.

export interface CallSummary {
  call_id: string;
  agency_id: string;
  title: string | null;
  url: string;
  deadline: string | null;
  deadlines: string[];
  is_open: boolean;
}

export interface MemberView {
  user_id: string;
  display_name: string;
  score: number;
}

export interface ConstraintEntry {
  constraint: string;
  satisfied: boolean;
  explanation: string;
}

export interface ConstraintReport {
  all_satisfied: boolean;
  entries: ConstraintEntry[];
}

export interface TeamView {
  team_id: string;
  call_id: string;
  call: CallSummary;
  lead: MemberView;
  members: MemberView[];
  proposed_budget: number | null;
  per_member_allocation: number | null;
  report: ConstraintReport;
  state: string;
  responses: Record<string, string>;
}

export interface RecommendationPage {
  username: string;
  page: number;
  page_size: number;
  total_recommendations: number;
  total_pages: number;
  recommendations: TeamView[];
}

export interface SkillView {
  display: string;
  canon: string[];
}

export interface UserRecord {
  user_id: string;
  username: string;
  display_name: string;
  designation: string;
  role: string;
  skills: SkillView[];
}

export interface ServerConfig {
  page_size: number;
  k: number;
  team_cap: number;
  relevance_floor: number;
  [key: string]: unknown;
}

export interface RespondResult {
  team_id: string;
  state: string;
  responses: Record<string, string>;
}

export interface NotifyResult {
  team_id: string;
  state: string;
}

export interface ExplainResult {
  team_id: string;
  report: ConstraintReport;
}

export interface FieldCoverage {
  extracted: number;
  total: number;
  percent: number;
  empty_denominator: boolean;
}

export interface IngestStats {
  fields: Record<string, FieldCoverage>;
  funnel: Record<string, number> | null;
}

export type RespondAction = "accept" | "decline";
export type ExplainAction = "add" | "remove" | "swap";

export const TERMINAL_STATES = new Set(["confirmed", "declined", "expired"]);
