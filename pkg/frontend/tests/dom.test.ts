// @vitest-environment happy-dom

import { beforeEach, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { mount } from '../src/dom.js';
import { JudgmentQueue, MemoryStorage } from '../src/queue.js';
import { Session } from '../src/session.js';
import { MockServer, makeTasks } from './mockServer.js';

const CREDS = { annotator: 'ann_egypt', token: 'tok-egypt' };

function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function setup(taskCount: number) {
  document.body.innerHTML = '<main id="app"></main>';
  const root = document.getElementById('app') as HTMLElement;
  const server = new MockServer(makeTasks(taskCount));
  const api = new ApiClient('', CREDS, server.fetch);
  const session = new Session(api, new JudgmentQueue(api, new MemoryStorage()), CREDS);
  mount(session, root);
  return { server, session, root };
}

function click(root: HTMLElement, selector: string): void {
  const button = root.querySelector<HTMLButtonElement>(selector);
  expect(button, `expected a button matching ${selector}`).not.toBeNull();
  button!.click();
}

function press(key: string): void {
  document.dispatchEvent(new KeyboardEvent('keydown', { key, bubbles: true, cancelable: true }));
}

describe('annotation page', () => {
  beforeEach(() => {
    document.body.innerHTML = '';
  });

  it('renders the full scripted flow through the real DOM', async () => {
    const { server, session, root } = setup(10);
    await session.start();

    expect(root.querySelector('h1')?.textContent).toBe('Instructions');
    for (let page = 0; page < 4; page += 1) {
      click(root, '[data-action=continue]');
      await tick();
    }

    // judgment screen: RTL sentence, dialect named, exactly three choices
    expect(root.querySelector('.sentence')?.getAttribute('dir')).toBe('rtl');
    expect(root.querySelector('.sentence')?.getAttribute('lang')).toBe('ar');
    expect(root.querySelector('h1')?.textContent).toContain('Egypt');
    expect(root.querySelectorAll('[data-choice]')).toHaveLength(3);

    const clicks = ['yes', 'no', 'yes', 'no', 'yes', 'no', 'yes', 'no', 'yes'] as const;
    for (const choice of clicks) {
      click(root, `[data-choice=${choice}]`);
      await tick();
    }
    press('3'); // final judgment via keyboard: Maybe / Not Sure
    await tick();

    expect(root.textContent).toContain('You judged 10 sentence(s).');
    expect(server.judgments).toHaveLength(10);
    expect(server.judgments[9]?.verdict).toBe('unsure');
    expect(server.traffic.join('\n')).not.toContain('original');
  });

  it('is operable with the keyboard alone', async () => {
    const { server, session, root } = setup(2);
    await session.start();

    for (let page = 0; page < 4; page += 1) {
      press('Enter');
      await tick();
    }
    expect(root.querySelectorAll('[data-choice]')).toHaveLength(3);
    press('y');
    await tick();
    press('2');
    await tick();
    expect(server.judgments.map((j) => j.verdict)).toEqual(['valid', 'invalid']);
    expect(root.textContent).toContain('You judged 2 sentence(s).');
  });

  it('submits a double-clicked verdict exactly once', async () => {
    const { server, session, root } = setup(2);
    await session.start();
    for (let page = 0; page < 4; page += 1) {
      click(root, '[data-action=continue]');
      await tick();
    }
    const yes = root.querySelector<HTMLButtonElement>('[data-choice=yes]')!;
    yes.click();
    yes.click(); // double click before the first request settles
    await tick();
    await tick();
    const forFirst = server.judgments.filter((j) => j.sample_id === 't1');
    expect(forFirst).toHaveLength(1);
  });

  it('shows a retry banner when the service is unreachable and loses nothing', async () => {
    const { server, session, root } = setup(2);
    await session.start();
    for (let page = 0; page < 4; page += 1) {
      click(root, '[data-action=continue]');
      await tick();
    }
    server.offline = true;
    click(root, '[data-choice=yes]');
    await tick();
    expect(root.querySelector('.banner')).not.toBeNull();
    expect(server.judgments).toHaveLength(0);

    server.offline = false;
    click(root, '[data-action=retry]');
    await tick();
    expect(root.querySelector('.banner')).toBeNull();
    expect(server.judgments).toHaveLength(1);
    expect(root.textContent).toContain('Sentences judged: 1');
  });

  it('lets the annotator go back to the instructions from an example page', async () => {
    const { session, root } = setup(1);
    await session.start();
    click(root, '[data-action=continue]');
    await tick();
    expect(root.querySelector('h1')?.textContent).toBe('Example 1');
    click(root, '[data-action=review]');
    await tick();
    expect(root.querySelector('h1')?.textContent).toBe('Instructions');
  });
});
