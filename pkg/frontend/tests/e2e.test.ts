// End-to-end run against the real annotation service: start the Python
// backend, drive a full scripted session over live HTTP, then check what the
// service durably stored.

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, type FetchLike } from '../src/api.js';
import { JudgmentQueue, MemoryStorage } from '../src/queue.js';
import { Session, type Choice } from '../src/session.js';

const PORT = 18500 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
const CREDS = { annotator: 'ann_egypt', token: 'tok-egypt' };

let server: ChildProcess | null = null;
const traffic: string[] = [];

const recordingFetch: FetchLike = async (url, init) => {
  traffic.push(url);
  if (typeof init?.body === 'string') traffic.push(init.body);
  const res = await fetch(url, init);
  const clone = res.clone();
  traffic.push(await clone.text());
  return res;
};

async function waitUntilUp(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/api/progress`);
      if (res.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error('annotation service did not come up');
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), 'adi-audit-e2e-'));
  const tasks = ['id\tsentence\tpredicted\toriginal'];
  for (let i = 1; i <= 12; i += 1) {
    tasks.push(`t${i}\tجملة تجريبية رقم ${i}\tEgypt\tSECRETGOLD`);
  }
  writeFileSync(join(dir, 'fps.tsv'), tasks.join('\n') + '\n');
  writeFileSync(
    join(dir, 'annotators.tsv'),
    'annotator_id\tdialect\ttoken\nann_egypt\tEgypt\ttok-egypt\n',
  );
  server = spawn(
    'python3',
    [
      '-m', 'adi_audit.cli', '--quiet', 'serve',
      '--tasks', join(dir, 'fps.tsv'),
      '--store', join(dir, 'store'),
      '--annotators', join(dir, 'annotators.tsv'),
      '--port', String(PORT),
    ],
    { stdio: 'ignore' },
  );
  await waitUntilUp(20_000);
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe('against the live service', () => {
  it('completes the scripted flow and the export matches the choices', async () => {
    const api = new ApiClient(BASE, CREDS, recordingFetch);
    const session = new Session(api, new JudgmentQueue(api, new MemoryStorage()), CREDS);
    await session.start();
    expect(session.view().pageCount).toBe(4); // instructions + three examples
    for (let page = 0; page < 4; page += 1) await session.advancePage();
    expect(session.view().stage).toBe('annotating');

    const script: Choice[] = ['yes', 'no', 'yes', 'unsure', 'no', 'yes', 'yes', 'no', 'yes', 'no'];
    for (const choice of script) {
      expect(session.view().task).not.toBeNull();
      await session.choose(choice);
    }
    expect(session.view().completed).toBe(10);

    const exportText = await (await fetch(`${BASE}/api/export`)).text();
    const stored = exportText
      .split('\n')
      .filter((line) => line && !line.startsWith('#'))
      .map((line) => JSON.parse(line) as { verdict: string; sample_id: string });
    expect(stored.map((j) => j.verdict)).toEqual([
      'valid', 'invalid', 'valid', 'unsure', 'invalid',
      'valid', 'valid', 'invalid', 'valid', 'invalid',
    ]);

    const wire = traffic.join('\n');
    expect(wire).not.toContain('SECRETGOLD');
    expect(wire).not.toContain('original');

    const progress = await (await fetch(`${BASE}/api/progress`)).json();
    expect(progress.per_dialect.Egypt.done).toBe(10);
    // the session already leased task 11 while displaying it
    expect(progress.per_dialect.Egypt.assigned).toBe(1);
    expect(progress.per_dialect.Egypt.pending).toBe(1);
  }, 30_000);
});
