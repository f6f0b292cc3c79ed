import type { Credentials, InstructionsResponse, JudgmentBody, NextTaskResponse } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly creds: Credentials,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private headers(): Record<string, string> {
    return {
      'Content-Type': 'application/json',
      'X-Annotator-Token': this.creds.token,
    };
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      headers: { ...this.headers(), ...(init?.headers ?? {}) },
    });
    if (!res.ok) {
      let code = `http_${res.status}`;
      let message = res.statusText;
      try {
        const body = await res.json();
        code = body.error ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, code, message);
    }
    return (await res.json()) as T;
  }

  getInstructions(): Promise<InstructionsResponse> {
    return this.request<InstructionsResponse>('/api/instructions');
  }

  ackInstructions(): Promise<void> {
    const q = encodeURIComponent(this.creds.annotator);
    return this.request<void>(`/api/instructions/ack?annotator=${q}`, { method: 'POST' });
  }

  nextTask(): Promise<NextTaskResponse> {
    const q = encodeURIComponent(this.creds.annotator);
    return this.request<NextTaskResponse>(`/api/tasks/next?annotator=${q}`);
  }

  submitJudgment(body: JudgmentBody): Promise<void> {
    return this.request<void>('/api/judgments', {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }
}
