/** Console wiring: tabs, the request form, and server-confirmed updates. */

import { ApiClient, ApiError } from './api.js';
import { ConsoleState } from './state.js';
import {
  renderBanner,
  renderClasses,
  renderEmptySession,
  renderEntryCard,
  renderFailureCard,
  renderReports,
} from './render.js';
import type { GenerationFailureDetails } from './types.js';

const api = new ApiClient('');
const state = new ConsoleState(api, window.sessionStorage);

const app = document.getElementById('app')!;

function build(): void {
  app.innerHTML = `
    <header class="top">
      <h1>netword console</h1>
      <nav>
        <button data-tab="console" class="tab active">Console</button>
        <button data-tab="classes" class="tab">Classes</button>
        <button data-tab="reports" class="tab">Eval reports</button>
      </nav>
    </header>
    <div id="banner-slot"></div>
    <section id="tab-console" class="tab-panel">
      <form id="request-form">
        <textarea id="instruction" rows="3"
          placeholder="e.g. Could you please give me the list of active users since 2 March."></textarea>
        <button id="submit" type="submit" disabled>Interpret</button>
      </form>
      <div id="entries"></div>
    </section>
    <section id="tab-classes" class="tab-panel" hidden></section>
    <section id="tab-reports" class="tab-panel" hidden></section>
  `;
}

function banner(kind: string, message: string): void {
  const slot = document.getElementById('banner-slot')!;
  slot.innerHTML = '';
  if (message) slot.appendChild(renderBanner(kind, message));
}

function redrawEntries(): void {
  const container = document.getElementById('entries')!;
  const failures = container.querySelectorAll('.failure-card');
  container.innerHTML = '';
  const views = state.list();
  if (views.length === 0 && failures.length === 0) {
    container.appendChild(renderEmptySession());
  }
  // newest first
  for (const view of [...views].reverse()) {
    container.appendChild(renderEntryCard(view, { onDecide: decide }));
  }
  for (const failure of failures) {
    container.appendChild(failure);
  }
}

async function decide(entryId: string, decision: 'approved' | 'rejected'): Promise<void> {
  try {
    await state.decide(entryId, decision);
    banner('', '');
  } catch (err) {
    banner('error', err instanceof ApiError ? err.message : String(err));
  }
  redrawEntries();
}

async function submit(instruction: string): Promise<void> {
  const button = document.getElementById('submit') as HTMLButtonElement;
  button.disabled = true;
  try {
    await state.submit(instruction);
    banner('', '');
    redrawEntries();
  } catch (err) {
    if (err instanceof ApiError && err.status === 502) {
      banner('unreachable', `inference server unreachable — ${err.message}`);
    } else if (err instanceof ApiError && err.status === 422) {
      const container = document.getElementById('entries')!;
      container.prepend(
        renderFailureCard(
          instruction,
          err.details as GenerationFailureDetails,
          err.message,
        ),
      );
      banner('', '');
    } else {
      banner('error', err instanceof ApiError ? err.message : String(err));
    }
  } finally {
    const field = document.getElementById('instruction') as HTMLTextAreaElement;
    button.disabled = field.value.trim() === '';
  }
}

async function showTab(name: string): Promise<void> {
  for (const panel of app.querySelectorAll<HTMLElement>('.tab-panel')) {
    panel.hidden = panel.id !== `tab-${name}`;
  }
  for (const tab of app.querySelectorAll<HTMLButtonElement>('.tab')) {
    tab.classList.toggle('active', tab.dataset.tab === name);
  }
  try {
    if (name === 'classes') {
      const panel = document.getElementById('tab-classes')!;
      const body = await api.getClasses();
      panel.innerHTML = '';
      panel.appendChild(renderClasses(body.classes));
    } else if (name === 'reports') {
      const panel = document.getElementById('tab-reports')!;
      const body = await api.getReports();
      panel.innerHTML = '';
      panel.appendChild(renderReports(body.reports));
    }
  } catch (err) {
    banner('error', err instanceof ApiError ? err.message : String(err));
  }
}

export async function start(): Promise<void> {
  build();

  const form = document.getElementById('request-form') as HTMLFormElement;
  const field = document.getElementById('instruction') as HTMLTextAreaElement;
  const button = document.getElementById('submit') as HTMLButtonElement;

  field.addEventListener('input', () => {
    button.disabled = field.value.trim() === '';
  });
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const instruction = field.value.trim();
    if (instruction) void submit(instruction);
  });
  for (const tab of app.querySelectorAll<HTMLButtonElement>('.tab')) {
    tab.addEventListener('click', () => void showTab(tab.dataset.tab!));
  }

  try {
    await state.reload();
  } catch (err) {
    banner('error', `could not restore session: ${err}`);
  }
  redrawEntries();
}

void start();
