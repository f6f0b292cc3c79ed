import { ApiClient } from './api.js';
import { JudgmentQueue } from './queue.js';
import type { Credentials, Page, Stage, Task, Verdict } from './types.js';

export type Choice = 'yes' | 'no' | 'unsure';

export const CHOICE_TO_VERDICT: Record<Choice, Verdict> = {
  yes: 'valid',
  no: 'invalid',
  unsure: 'unsure',
};

export interface SessionView {
  stage: Stage;
  page: Page | null;
  pageNumber: number;
  pageCount: number;
  task: Task | null;
  completed: number;
  offline: boolean;
  error: string | null;
}

/**
 * Drives the annotator flow: instructions page, worked examples, then one
 * task at a time until the queue for this annotator's dialect runs dry.
 * Stage transitions only go forward, except examples -> instructions review.
 */
export class Session {
  private stage: Stage = 'instructions';
  private pages: Page[] = [];
  private pageIndex = 0;
  private task: Task | null = null;
  private completed = 0;
  private offline = false;
  private error: string | null = null;
  private busy = false;
  private judgedCurrent = false;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly queue: JudgmentQueue,
    readonly creds: Credentials,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  view(): SessionView {
    return {
      stage: this.stage,
      page: this.pages[this.pageIndex] ?? null,
      pageNumber: this.pageIndex + 1,
      pageCount: this.pages.length,
      task: this.task,
      completed: this.completed,
      offline: this.offline,
      error: this.error,
    };
  }

  async start(): Promise<void> {
    try {
      const res = await this.api.getInstructions();
      this.pages = res.pages;
      this.stage = 'instructions';
      this.pageIndex = 0;
      this.offline = false;
    } catch {
      this.offline = true;
    }
    this.notify();
  }

  /** Move forward through instructions and examples; the last page unlocks tasks. */
  async advancePage(): Promise<void> {
    if (this.stage !== 'instructions' && this.stage !== 'examples') return;
    if (this.pageIndex + 1 < this.pages.length) {
      this.pageIndex += 1;
      this.stage = this.pages[this.pageIndex]?.kind === 'example' ? 'examples' : 'instructions';
      this.notify();
      return;
    }
    try {
      await this.api.ackInstructions();
      this.stage = 'annotating';
      this.offline = false;
      this.notify();
      await this.fetchNext();
    } catch {
      this.offline = true;
      this.notify();
    }
  }

  /** The one allowed backward transition. */
  reviewInstructions(): void {
    if (this.stage !== 'examples') return;
    this.stage = 'instructions';
    this.pageIndex = 0;
    this.notify();
  }

  private async fetchNext(): Promise<void> {
    try {
      const res = await this.api.nextTask();
      this.task = res.task;
      this.offline = false;
      if (this.task === null) this.stage = 'finished';
    } catch {
      this.task = null;
      this.offline = true;
    }
    this.notify();
  }

  /** Submit the displayed task; duplicates are impossible by construction. */
  async choose(choice: Choice): Promise<void> {
    if (this.stage !== 'annotating' || this.task === null || this.busy) return;
    this.busy = true;
    try {
      this.queue.enqueue({
        sample_id: this.task.sample_id,
        annotator: this.creds.annotator,
        dialect: this.task.predicted_dialect,
        verdict: CHOICE_TO_VERDICT[choice],
      });
      this.judgedCurrent = true;
      await this.settle();
    } finally {
      this.busy = false;
    }
  }

  /** Re-send queued judgments and move on; wired to the retry banner. */
  async retry(): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await this.settle();
    } finally {
      this.busy = false;
    }
  }

  private async settle(): Promise<void> {
    const flushed = await this.queue.flush();
    if (!flushed) {
      this.offline = true;
      this.notify();
      return;
    }
    this.offline = false;
    if (this.judgedCurrent) {
      this.judgedCurrent = false;
      this.completed += 1;
      this.task = null;
    }
    if (this.stage === 'annotating' && this.task === null) {
      await this.fetchNext();
    } else {
      this.notify();
    }
  }
}
