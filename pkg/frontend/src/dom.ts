import type { Choice, Session } from './session.js';

const CHOICE_KEYS: Record<string, Choice> = {
  '1': 'yes',
  y: 'yes',
  '2': 'no',
  n: 'no',
  '3': 'unsure',
  m: 'unsure',
};

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = '',
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

/** Mount the annotation flow into `root` and keep it in sync with the session. */
export function mount(session: Session, root: HTMLElement): void {
  const doc = root.ownerDocument;

  const render = (): void => {
    const view = session.view();
    root.textContent = '';

    if (view.offline) {
      const banner = el(doc, 'div', { class: 'banner', role: 'alert' });
      banner.append(
        el(doc, 'span', {}, 'Connection problem. Your answers are kept and re-sent.'),
        el(doc, 'button', { 'data-action': 'retry', accesskey: 'r' }, 'Retry (R)'),
      );
      root.append(banner);
    }

    if (view.stage === 'instructions' || view.stage === 'examples') {
      if (view.page === null) return;
      const section = el(doc, 'section', { class: `page page-${view.page.kind}` });
      section.append(
        el(doc, 'h1', {}, view.page.title),
        el(doc, 'p', { class: 'page-body' }, view.page.body),
        el(doc, 'p', { class: 'page-count' }, `Page ${view.pageNumber} of ${view.pageCount}`),
      );
      if (view.stage === 'examples') {
        section.append(
          el(doc, 'button', { 'data-action': 'review' }, 'Back to instructions'),
        );
      }
      section.append(
        el(doc, 'button', { 'data-action': 'continue', autofocus: '' }, 'Continue (Enter)'),
      );
      root.append(section);
      return;
    }

    if (view.stage === 'annotating') {
      const section = el(doc, 'section', { class: 'judging' });
      if (view.task !== null) {
        section.append(
          el(
            doc,
            'h1',
            {},
            `Is this sentence valid in ${view.task.predicted_dialect} Arabic?`,
          ),
          // the raw tweet text, right-to-left, never normalized for humans
          el(doc, 'p', { class: 'sentence', dir: 'rtl', lang: 'ar' }, view.task.sentence),
        );
        const buttons = el(doc, 'div', { class: 'choices', role: 'group' });
        buttons.append(
          el(doc, 'button', { 'data-choice': 'yes', autofocus: '' }, 'Yes (1)'),
          el(doc, 'button', { 'data-choice': 'no' }, 'No (2)'),
          el(doc, 'button', { 'data-choice': 'unsure' }, 'Maybe / Not Sure (3)'),
        );
        section.append(buttons);
      }
      section.append(
        el(doc, 'p', { class: 'progress' }, `Sentences judged: ${view.completed}`),
      );
      root.append(section);
      return;
    }

    if (view.stage === 'finished') {
      const section = el(doc, 'section', { class: 'finished' });
      section.append(
        el(doc, 'h1', {}, 'All done, thank you!'),
        el(doc, 'p', { class: 'progress' }, `You judged ${view.completed} sentence(s).`),
      );
      root.append(section);
    }
  };

  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement | null;
    if (target === null || target.tagName !== 'BUTTON') return;
    const choice = target.getAttribute('data-choice') as Choice | null;
    if (choice !== null) {
      void session.choose(choice);
      return;
    }
    switch (target.getAttribute('data-action')) {
      case 'continue':
        void session.advancePage();
        break;
      case 'review':
        session.reviewInstructions();
        break;
      case 'retry':
        void session.retry();
        break;
    }
  });

  doc.addEventListener('keydown', (event) => {
    const view = session.view();
    if (view.stage === 'annotating' && view.task !== null) {
      const choice = CHOICE_KEYS[event.key.toLowerCase()];
      if (choice !== undefined) {
        event.preventDefault();
        void session.choose(choice);
        return;
      }
    }
    if ((view.stage === 'instructions' || view.stage === 'examples') && event.key === 'Enter') {
      const active = doc.activeElement;
      if (active === null || active.tagName !== 'BUTTON') {
        event.preventDefault();
        void session.advancePage();
      }
    }
    if (view.offline && event.key.toLowerCase() === 'r') {
      void session.retry();
    }
  });

  session.onChange(render);
  render();
}
