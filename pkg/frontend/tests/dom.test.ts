// @vitest-environment jsdom
import { describe, expect, it, vi } from 'vitest';

import {
  renderClasses,
  renderEntryCard,
  renderFailureCard,
  renderReports,
} from '../src/render.js';
import type { EntryView } from '../src/state.js';
import type { Entry } from '../src/types.js';

function entry(overrides: Partial<Entry> = {}): Entry {
  return {
    entry_id: 'e1',
    session_id: 's1',
    created_at: 0,
    instruction: 'Could you please give me the list of active users since 2 March.',
    class: 'list',
    command: 'list users --active 20240301 now',
    valid: true,
    decision: 'pending',
    decided_at: null,
    dry_run: null,
    retrieved: [
      {
        id: 'c001',
        score: 0.82,
        input: 'Could you kindly offer me a the list of active users since 2024/08/10 ?',
        command: 'list users --active 20240810 now',
        class: 'list',
      },
    ],
    classification: { class_name: 'list', used_fallback: false, raw_response: '', retrieved: [] },
    generation: { raw_response: '', retries_used: 0, retrieved: [] },
    ...overrides,
  };
}

function view(overrides: Partial<Entry> = {}, inFlight = false): EntryView {
  return { entry: entry(overrides), decisionInFlight: inFlight };
}

describe('entry card', () => {
  it('shows class badge, evidence with scores, and the command in monospace', () => {
    const card = renderEntryCard(view(), { onDecide: vi.fn() });
    expect(card.querySelector('.class-badge')?.textContent).toBe('list');
    expect(card.querySelector('code.command')?.textContent).toBe(
      'list users --active 20240301 now',
    );
    expect(card.querySelector('.validity')?.textContent).toBe('valid');
    const evidence = card.querySelectorAll('.evidence-item');
    expect(evidence).toHaveLength(1);
    expect(evidence[0].textContent).toContain('0.820');
    expect(evidence[0].textContent).toContain('list users --active 20240810 now');
  });

  it('pending entries have live approve and reject buttons', () => {
    const onDecide = vi.fn();
    const card = renderEntryCard(view(), { onDecide });
    const approve = card.querySelector<HTMLButtonElement>('button.approve')!;
    expect(approve.disabled).toBe(false);
    approve.click();
    expect(onDecide).toHaveBeenCalledWith('e1', 'approved');
  });

  it('approved entries show the dry-run confirmation and disable buttons', () => {
    const card = renderEntryCard(
      view({
        decision: 'approved',
        dry_run: { validated: true, violations: [], executed: false },
      }),
      { onDecide: vi.fn() },
    );
    expect(card.querySelector('.dry-run-confirmation')?.textContent).toContain(
      'dry run recorded',
    );
    expect(card.querySelector<HTMLButtonElement>('button.approve')?.disabled).toBe(true);
    expect(card.querySelector<HTMLButtonElement>('button.reject')?.disabled).toBe(true);
  });

  it('rejected entries grey out without a dry run', () => {
    const card = renderEntryCard(view({ decision: 'rejected' }), { onDecide: vi.fn() });
    expect(card.className).toContain('decision-rejected');
    expect(card.querySelector('.dry-run-confirmation')).toBeNull();
  });

  it('in-flight decisions disable buttons (double-click guard)', () => {
    const card = renderEntryCard(view({}, true), { onDecide: vi.fn() });
    expect(card.querySelector<HTMLButtonElement>('button.approve')?.disabled).toBe(true);
  });

  it('fallback classification is flagged for the operator', () => {
    const card = renderEntryCard(
      view({
        classification: {
          class_name: 'list', used_fallback: true, raw_response: 'banana', retrieved: [],
        },
      }),
      { onDecide: vi.fn() },
    );
    expect(card.querySelector('.fallback-badge')).not.toBeNull();
  });
});

describe('failure card (422 path)', () => {
  it('renders raw output and violations with no approve button', () => {
    const card = renderFailureCard(
      'do something odd',
      {
        step: 'generate',
        raw_responses: ['Answer:\nlist userz', 'Answer:\nlist userz'],
        extracted: 'list userz',
        class: 'list',
        violations: [{ position: 5, message: "unknown object 'userz' after verb 'list'" }],
      },
      'generate: no valid command after 2 attempt(s)',
    );
    expect(card.querySelectorAll('.violation')).toHaveLength(1);
    expect(card.textContent).toContain("unknown object 'userz'");
    expect(card.textContent).toContain('list userz');
    expect(card.querySelector('button.approve')).toBeNull();
    expect(card.querySelector('button.reject')).toBeNull();
  });
});

describe('browse views', () => {
  it('classes table renders one row per class', () => {
    const classes = Array.from({ length: 11 }, (_, i) => ({
      name: `class${i}`,
      description: `does thing ${i}`,
      system_prompt: 'p',
      base_commands: [`class${i} run`],
      flags: [],
    }));
    const table = renderClasses(classes);
    expect(table.querySelectorAll('tr.class-row')).toHaveLength(11);
  });

  it('reports table has the RAG / accuracy / precision columns', () => {
    const table = renderReports([
      {
        report_id: 'r1',
        schema_version: 1,
        accuracy: 0.461,
        mean_unigram_precision: 0.681,
        n: 100,
        per_class: {},
        confusion: [],
        config_snapshot: { rag_enabled: true },
      },
    ]);
    const headers = [...table.querySelectorAll('th')].map((th) => th.textContent);
    expect(headers).toEqual(['RAG', 'Accuracy', 'uni-gram precision', 'n']);
    const cells = [...table.querySelectorAll('tr.report-row td')].map(
      (td) => td.textContent,
    );
    expect(cells).toEqual(['yes', '46.1%', '68.1%', '100']);
  });

  it('empty report list renders the empty state', () => {
    expect(renderReports([]).textContent).toContain('No eval reports yet');
  });
});
