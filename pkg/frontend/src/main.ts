import { ApiClient } from './api.js';
import { mount } from './dom.js';
import { JudgmentQueue, MemoryStorage, type QueueStorage } from './queue.js';
import { Session } from './session.js';
import type { Credentials } from './types.js';

interface Config {
  baseUrl: string;
}

async function loadConfig(): Promise<Config> {
  try {
    const res = await fetch('config.json');
    if (res.ok) return (await res.json()) as Config;
  } catch {
    // fall through to same-origin default
  }
  return { baseUrl: '' };
}

function credentialsFromUrl(): Credentials | null {
  const params = new URLSearchParams(window.location.search);
  const annotator = params.get('annotator');
  const token = params.get('token');
  return annotator && token ? { annotator, token } : null;
}

function promptCredentials(root: HTMLElement, onReady: (creds: Credentials) => void): void {
  root.innerHTML = `
    <section class="login">
      <h1>Annotator sign-in</h1>
      <label>ID <input id="annotator" autocomplete="username"></label>
      <label>Token <input id="token" type="password" autocomplete="current-password"></label>
      <button id="enter">Enter</button>
    </section>`;
  const enter = root.querySelector<HTMLButtonElement>('#enter')!;
  enter.addEventListener('click', () => {
    const annotator = root.querySelector<HTMLInputElement>('#annotator')!.value.trim();
    const token = root.querySelector<HTMLInputElement>('#token')!.value.trim();
    if (annotator && token) onReady({ annotator, token });
  });
}

function storage(): QueueStorage {
  try {
    window.localStorage.setItem('adi-audit:probe', '1');
    return window.localStorage;
  } catch {
    return new MemoryStorage();
  }
}

async function boot(creds: Credentials, root: HTMLElement): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config.baseUrl, creds);
  const queue = new JudgmentQueue(api, storage());
  const session = new Session(api, queue, creds);
  window.addEventListener('online', () => void session.retry());
  mount(session, root);
  await session.start();
}

const root = document.getElementById('app');
if (root !== null) {
  const creds = credentialsFromUrl();
  if (creds !== null) {
    void boot(creds, root);
  } else {
    promptCredentials(root, (entered) => void boot(entered, root));
  }
}
