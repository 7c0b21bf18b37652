export interface RewardBreakdown {
  r: string;
  att_score: string;
  opt_score: string | null;
  price_score: number;
  r_type: string;
  matched_att: number;
  matched_opt: number;
  n_att: number;
  n_opt: number;
}

export interface Observation {
  session_id: string;
  goal_id: string;
  instruction: string;
  page: string;
  rendered_text: string;
  actions: string[];
  done: boolean;
  reward?: string;
  reward_float?: number;
  breakdown?: RewardBreakdown;
}

export interface GoalSummary {
  goal_id: string;
  instruction: string;
}

export interface RecordStep {
  action: string;
  page: string;
  obs: string;
  t: number;
}

export interface TrajectoryRecordJson {
  session_id: string;
  goal_id: string;
  actor: string;
  steps: RecordStep[];
  breakdown: RewardBreakdown | null;
  truncated: boolean;
}

export interface ReplayStep {
  action: string;
  page: string;
  rendered_text: string;
  reward: string;
}

export interface ReplayPayload {
  record: TrajectoryRecordJson;
  steps: ReplayStep[];
  replay_ok: boolean;
  mismatches: string[];
}
