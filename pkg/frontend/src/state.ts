import type { AclResponse, AuditResponse, EffectiveRowsResponse, TraverseResponse } from './types';

export interface SavedSearch {
  principal: string;
  principalLabel: string;
  root: string;
}

export type PaneContents =
  | { kind: 'empty' }
  | { kind: 'error'; message: string }
  | { kind: 'acl'; data: AclResponse }
  | { kind: 'traverse'; data: TraverseResponse; filtered: string[] }
  | { kind: 'effective'; data: EffectiveRowsResponse; search: SavedSearch }
  | { kind: 'audit'; data: AuditResponse };

/**
 * Explorer view state. Every results-pane request is tagged with a
 * sequence token; only the newest-issued request may publish its
 * response, so rapid selection changes never render out of order.
 */
export class ExplorerState {
  selectedPath = '/';
  activeFilter = new Set<string>();
  savedSearches: SavedSearch[] = [];
  paneContents: PaneContents = { kind: 'empty' };
  expanded = new Set<string>(['/']);
  nodeErrors = new Map<string, string>();

  private seq = 0;

  beginRequest(): number {
    return ++this.seq;
  }

  /** Publish a response; stale tokens are discarded. */
  acceptResponse(token: number, contents: PaneContents): boolean {
    if (token !== this.seq) {
      return false;
    }
    this.paneContents = contents;
    return true;
  }

  select(path: string): void {
    this.selectedPath = path;
  }

  toggleExpanded(path: string): boolean {
    if (this.expanded.has(path)) {
      this.expanded.delete(path);
      return false;
    }
    this.expanded.add(path);
    return true;
  }

  toggleFilter(sid: string): void {
    if (this.activeFilter.has(sid)) {
      this.activeFilter.delete(sid);
    } else {
      this.activeFilter.add(sid);
    }
  }

  /** Record a completed effective search; idempotent per (principal, root). */
  addSearch(search: SavedSearch): number {
    const existing = this.savedSearches.findIndex(
      (s) => s.principal === search.principal && s.root === search.root,
    );
    if (existing >= 0) {
      return existing;
    }
    this.savedSearches.push(search);
    return this.savedSearches.length - 1;
  }
}
