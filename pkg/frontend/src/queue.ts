import { ApiClient, ApiError } from './api.js';
import type { JudgmentBody } from './types.js';

// A judgment the server answers 409 for was already stored (double click,
// replayed queue entry): dropping it is the correct resolution.
const DROPPABLE = new Set([409]);

export interface QueueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const KEY = 'adi-audit:judgment-queue:v1';

export class MemoryStorage implements QueueStorage {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

/** FIFO queue of unsent judgments; nothing is lost while the service is down. */
export class JudgmentQueue {
  constructor(
    private readonly api: ApiClient,
    private readonly storage: QueueStorage = new MemoryStorage(),
  ) {}

  private load(): JudgmentBody[] {
    try {
      return JSON.parse(this.storage.getItem(KEY) ?? '[]') as JudgmentBody[];
    } catch {
      return [];
    }
  }

  private save(items: JudgmentBody[]): void {
    this.storage.setItem(KEY, JSON.stringify(items));
  }

  get size(): number {
    return this.load().length;
  }

  enqueue(body: JudgmentBody): void {
    const items = this.load();
    if (!items.some((it) => it.sample_id === body.sample_id && it.annotator === body.annotator)) {
      items.push(body);
    }
    this.save(items);
  }

  /** Send queued judgments in order; stop at the first network failure. */
  async flush(): Promise<boolean> {
    let items = this.load();
    while (items.length > 0) {
      const head = items[0]!;
      try {
        await this.api.submitJudgment(head);
      } catch (err) {
        if (!(err instanceof ApiError && DROPPABLE.has(err.status))) {
          this.save(items);
          return false;
        }
      }
      items = items.slice(1);
      this.save(items);
    }
    return true;
  }
}
