// Wire types for the annotation service API. Task payloads never carry the
// sample's original gold label; only the service knows it.

export type Verdict = 'valid' | 'invalid' | 'unsure';

export interface Task {
  sample_id: string;
  sentence: string;
  predicted_dialect: string;
}

export interface Page {
  kind: 'instructions' | 'example';
  title: string;
  body: string;
}

export interface InstructionsResponse {
  pages: Page[];
  verdicts: Verdict[];
}

export interface NextTaskResponse {
  task: Task | null;
  lease_seconds: number;
}

export interface JudgmentBody {
  sample_id: string;
  annotator: string;
  dialect: string;
  verdict: Verdict;
}

export type Stage = 'instructions' | 'examples' | 'annotating' | 'finished';

export interface Credentials {
  annotator: string;
  token: string;
}
