/** Console state: the entry list for the current session.
 *
 * Decision state is never finalized optimistically: a card's rendered
 * decision always comes from the last server response. A 409 on decide
 * means someone else decided first; the entry is refetched and the
 * server's version wins. The session id persists in storage so a page
 * reload reconstructs identical state from GET endpoints.
 */

import { ApiClient, ApiError } from './api.js';
import type { Decision, Entry, InterpretResponse } from './types.js';

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const SESSION_KEY = 'netword.session_id';

export interface EntryView {
  entry: Entry;
  decisionInFlight: boolean;
  /** Set when a 409 forced reconciliation with a decision made elsewhere. */
  conflict?: boolean;
}

function entryFromInterpret(response: InterpretResponse, instruction: string): Entry {
  return {
    entry_id: response.entry_id,
    session_id: response.session_id,
    created_at: Date.now() / 1000,
    instruction,
    class: response.class,
    command: response.command,
    valid: response.valid,
    decision: 'pending',
    decided_at: null,
    dry_run: null,
    retrieved: response.retrieved,
    classification: {
      class_name: response.class,
      used_fallback: response.used_fallback,
      raw_response: response.trace.raw_responses[0] ?? '',
      retrieved: response.trace.classifier_retrieved,
    },
    generation: {
      raw_response: response.trace.raw_responses[1] ?? '',
      retries_used: response.trace.retries_used,
      retrieved: [],
    },
  };
}

export class ConsoleState {
  readonly views = new Map<string, EntryView>();
  order: string[] = [];
  sessionId: string | null = null;

  constructor(
    private api: ApiClient,
    private storage: KeyValueStorage | null = null,
  ) {
    this.sessionId = storage?.getItem(SESSION_KEY) ?? null;
  }

  list(): EntryView[] {
    return this.order.map((id) => this.views.get(id)!);
  }

  get(entryId: string): EntryView | undefined {
    return this.views.get(entryId);
  }

  private put(entry: Entry): EntryView {
    const existing = this.views.get(entry.entry_id);
    const view: EntryView = { entry, decisionInFlight: existing?.decisionInFlight ?? false };
    this.views.set(entry.entry_id, view);
    if (!existing) this.order.push(entry.entry_id);
    return view;
  }

  async submit(instruction: string): Promise<EntryView> {
    const response = await this.api.interpret(instruction, this.sessionId);
    this.sessionId = response.session_id;
    this.storage?.setItem(SESSION_KEY, response.session_id);
    return this.put(entryFromInterpret(response, instruction));
  }

  /** Decide an entry; concurrent clicks collapse into one request. */
  async decide(entryId: string, decision: Exclude<Decision, 'pending'>): Promise<EntryView> {
    const view = this.views.get(entryId);
    if (!view) throw new Error(`unknown entry ${entryId}`);
    if (view.decisionInFlight || view.entry.decision !== 'pending') {
      return view;
    }
    view.decisionInFlight = true;
    try {
      const entry = await this.api.decide(entryId, decision);
      return this.put(entry);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // decided elsewhere: reconcile with the server's state
        const entry = await this.api.getEntry(entryId);
        const reconciled = this.put(entry);
        reconciled.conflict = true;
        return reconciled;
      }
      throw err;
    } finally {
      const after = this.views.get(entryId);
      if (after) after.decisionInFlight = false;
    }
  }

  /** Rebuild the entry list for the stored session (page reload path). */
  async reload(): Promise<EntryView[]> {
    this.views.clear();
    this.order = [];
    if (!this.sessionId) return [];
    const body = await this.api.getSessionEntries(this.sessionId);
    for (const entry of body.entries) {
      this.put(entry);
    }
    return this.list();
  }
}
