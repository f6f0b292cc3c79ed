import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { JudgmentQueue, MemoryStorage } from '../src/queue.js';
import type { JudgmentBody } from '../src/types.js';

const CREDS = { annotator: 'a1', token: 't1' };

function judgment(id: string, verdict: JudgmentBody['verdict'] = 'valid'): JudgmentBody {
  return { sample_id: id, annotator: 'a1', dialect: 'Egypt', verdict };
}

describe('judgment queue', () => {
  it('keeps items across failed flushes and preserves order', async () => {
    const sent: string[] = [];
    let up = false;
    const api = new ApiClient('', CREDS, async (url, init) => {
      if (!up) throw new TypeError('fetch failed');
      sent.push(JSON.parse(String(init?.body)).sample_id);
      return new Response('{}', { status: 200 });
    });
    const queue = new JudgmentQueue(api, new MemoryStorage());
    queue.enqueue(judgment('a'));
    queue.enqueue(judgment('b'));
    queue.enqueue(judgment('c'));

    expect(await queue.flush()).toBe(false);
    expect(queue.size).toBe(3);

    up = true;
    expect(await queue.flush()).toBe(true);
    expect(sent).toEqual(['a', 'b', 'c']);
    expect(queue.size).toBe(0);
  });

  it('drops duplicate enqueues for the same sample and annotator', () => {
    const api = new ApiClient('', CREDS, async () => new Response('{}', { status: 200 }));
    const queue = new JudgmentQueue(api, new MemoryStorage());
    queue.enqueue(judgment('a', 'valid'));
    queue.enqueue(judgment('a', 'invalid')); // double click: first verdict stands
    expect(queue.size).toBe(1);
  });

  it('treats a 409 conflict as delivered', async () => {
    const api = new ApiClient(
      '',
      CREDS,
      async () =>
        new Response(JSON.stringify({ error: 'duplicate_judgment', message: 'dup' }), {
          status: 409,
        }),
    );
    const queue = new JudgmentQueue(api, new MemoryStorage());
    queue.enqueue(judgment('a'));
    expect(await queue.flush()).toBe(true);
    expect(queue.size).toBe(0);
  });

  it('stops at a hard server error without losing the item', async () => {
    const api = new ApiClient(
      '',
      CREDS,
      async () =>
        new Response(JSON.stringify({ error: 'auth_error', message: 'bad token' }), {
          status: 401,
        }),
    );
    const queue = new JudgmentQueue(api, new MemoryStorage());
    queue.enqueue(judgment('a'));
    expect(await queue.flush()).toBe(false);
    expect(queue.size).toBe(1);
  });
});
