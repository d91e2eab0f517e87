/** DOM builders. No framework: each function returns a detached element. */

import type { EntryView } from './state.js';
import type {
  CommandClassInfo,
  EvalReportInfo,
  GenerationFailureDetails,
  RetrievedSample,
} from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function pct(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}

function evidenceList(samples: RetrievedSample[]): HTMLElement {
  const container = el('div', 'evidence');
  container.appendChild(el('h4', undefined, 'Retrieved evidence'));
  const list = el('ol', 'evidence-list');
  for (const sample of samples) {
    const item = el('li', 'evidence-item');
    item.appendChild(el('span', 'evidence-score', sample.score.toFixed(3)));
    item.appendChild(el('span', 'evidence-input', sample.input));
    const command = el('code', 'evidence-command', sample.command);
    item.appendChild(command);
    list.appendChild(item);
  }
  container.appendChild(list);
  return container;
}

export interface CardHandlers {
  onDecide(entryId: string, decision: 'approved' | 'rejected'): void;
}

export function renderEntryCard(view: EntryView, handlers: CardHandlers): HTMLElement {
  const { entry } = view;
  const card = el('article', `entry-card decision-${entry.decision}`);
  card.dataset.entryId = entry.entry_id;

  const header = el('header', 'entry-header');
  header.appendChild(el('span', 'class-badge', entry.class));
  if (entry.classification.used_fallback) {
    header.appendChild(el('span', 'fallback-badge', 'fallback'));
  }
  header.appendChild(
    el('span', `validity ${entry.valid ? 'valid' : 'invalid'}`,
      entry.valid ? 'valid' : 'invalid'),
  );
  card.appendChild(header);

  card.appendChild(el('p', 'instruction', entry.instruction));
  card.appendChild(el('code', 'command', entry.command));
  card.appendChild(evidenceList(entry.retrieved));

  const actions = el('div', 'actions');
  const pending = entry.decision === 'pending' && !view.decisionInFlight;
  const approve = el('button', 'approve', 'Approve');
  approve.disabled = !pending;
  approve.addEventListener('click', () => handlers.onDecide(entry.entry_id, 'approved'));
  const reject = el('button', 'reject', 'Reject');
  reject.disabled = !pending;
  reject.addEventListener('click', () => handlers.onDecide(entry.entry_id, 'rejected'));
  actions.appendChild(approve);
  actions.appendChild(reject);
  card.appendChild(actions);

  if (entry.decision === 'approved' && entry.dry_run) {
    card.appendChild(
      el('p', 'dry-run-confirmation',
        entry.dry_run.validated
          ? 'dry run recorded: command re-validated, not executed'
          : 'dry run recorded: validation failed'),
    );
  }
  if (entry.decision === 'rejected') {
    card.appendChild(el('p', 'rejected-note', 'rejected'));
  }
  if (view.conflict) {
    card.appendChild(el('p', 'conflict-note', 'already decided elsewhere'));
  }
  return card;
}

export function renderFailureCard(
  instruction: string,
  details: GenerationFailureDetails,
  message: string,
): HTMLElement {
  const card = el('article', 'entry-card failure-card');
  card.appendChild(el('p', 'instruction', instruction));
  card.appendChild(el('p', 'failure-message', message));
  if (details.extracted) {
    card.appendChild(el('code', 'command invalid-command', details.extracted));
  }
  const raw = el('details', 'raw-output');
  raw.appendChild(el('summary', undefined, 'raw model output'));
  for (const response of details.raw_responses) {
    raw.appendChild(el('pre', undefined, response));
  }
  card.appendChild(raw);
  const violations = el('ul', 'violations');
  for (const violation of details.violations) {
    violations.appendChild(el('li', 'violation', violation.message));
  }
  card.appendChild(violations);
  return card; // deliberately no approve/reject: nothing valid to approve
}

export function renderBanner(kind: string, message: string): HTMLElement {
  return el('div', `banner banner-${kind}`, message);
}

export function renderClasses(classes: CommandClassInfo[]): HTMLElement {
  const table = el('table', 'classes-table');
  const head = el('tr');
  for (const title of ['class', 'description', 'base commands']) {
    head.appendChild(el('th', undefined, title));
  }
  table.appendChild(head);
  for (const cls of classes) {
    const row = el('tr', 'class-row');
    row.appendChild(el('td', 'class-name', cls.name));
    row.appendChild(el('td', undefined, cls.description));
    row.appendChild(el('td', 'base-commands', cls.base_commands.join(', ')));
    table.appendChild(row);
  }
  return table;
}

export function renderReports(reports: EvalReportInfo[]): HTMLElement {
  if (reports.length === 0) {
    return el('p', 'empty-state', 'No eval reports yet.');
  }
  const table = el('table', 'reports-table');
  const head = el('tr');
  for (const title of ['RAG', 'Accuracy', 'uni-gram precision', 'n']) {
    head.appendChild(el('th', undefined, title));
  }
  table.appendChild(head);
  for (const report of reports) {
    const row = el('tr', 'report-row');
    row.appendChild(
      el('td', undefined, report.config_snapshot['rag_enabled'] ? 'yes' : 'no'),
    );
    row.appendChild(el('td', undefined, pct(report.accuracy)));
    row.appendChild(el('td', undefined, pct(report.mean_unigram_precision)));
    row.appendChild(el('td', undefined, String(report.n)));
    table.appendChild(row);
  }
  return table;
}

export function renderEmptySession(): HTMLElement {
  return el('p', 'empty-state', 'No requests yet. Describe what the network should do.');
}
