// JSON shapes served by the session service (/v1). The UI renders these
// verbatim and never fabricates values.

export type Phase = 'running' | 'awaiting_judgment' | 'finished' | 'aborted';

export type Outcome = 'better' | 'worse' | 'indifferent';

export interface ProblemConfig {
  family: string;
  m: number;
  n?: number;
}

export interface SessionConfig {
  algorithm: string;
  problem: ProblemConfig;
  N?: number;
  max_fe?: number;
  tau?: number;
  warmup_gens?: number;
  mu?: number;
  eta_step?: number;
  hidden_dim?: number;
  sigma?: number;
  seed?: number;
}

export interface SessionState {
  session_id: string;
  phase: Phase;
  algorithm: string;
  problem: ProblemConfig;
  generation: number;
  fe_used: number;
  consultations: number;
  answered_pairs: number;
  current_consultation: { total_pairs: number; answered: number } | null;
  error: string | null;
}

export interface QueryCard {
  pair_index: number;
  pair_in_consultation: number;
  total_pairs: number;
  consultation: number;
  a: { f: number[] };
  b: { f: number[] };
}

export interface QueryView {
  phase: Phase;
  query: QueryCard | null;
}

export interface PopulationMember {
  f: number[];
  rank: number;
  utility: number | null;
}

export interface PopulationView {
  phase: Phase;
  generation: number;
  fe_used: number;
  population: PopulationMember[];
}

export interface JudgmentAck {
  accepted: boolean;
  pair_index: number;
  answered_pairs: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}
