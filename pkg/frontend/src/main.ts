import { ServiceClient, ServiceError } from './api';
import { renderActionPane, renderResultsPane, renderTreePane } from './render';
import { ExplorerState } from './state';
import type { MetaDoc, TreeNode } from './types';

const params = new URLSearchParams(location.search);
const serviceBase = params.get('service') ?? `http://${location.hostname || 'localhost'}:8077`;

const client = new ServiceClient(serviceBase);
const state = new ExplorerState();
const childrenByPath = new Map<string, TreeNode[]>();
let meta: MetaDoc | null = null;
let rootName = '/';

const panes = {
  control: () => document.getElementById('control-pane')!,
  results: () => document.getElementById('results-pane')!,
  action: () => document.getElementById('action-pane')!,
};

function redraw(): void {
  panes.control().innerHTML = renderTreePane(childrenByPath, state, rootName);
  panes.results().innerHTML = renderResultsPane(state.paneContents, meta);
  panes.action().innerHTML = renderActionPane(state, meta);
}

function showBanner(message: string): void {
  state.paneContents = { kind: 'error', message };
  redraw();
}

async function loadChildren(path: string): Promise<void> {
  const node = await client.tree(path, 1);
  childrenByPath.set(path, node.children ?? []);
}

async function select(path: string): Promise<void> {
  state.select(path);
  history.replaceState(null, '', `?path=${encodeURIComponent(path)}`);
  const token = state.beginRequest();
  try {
    const acl = await client.acl(path);
    state.nodeErrors.delete(path);
    if (state.acceptResponse(token, { kind: 'acl', data: acl })) {
      redraw();
    }
  } catch (err) {
    state.nodeErrors.set(path, String(err));
    if (
      state.acceptResponse(token, {
        kind: 'error',
        message: err instanceof ServiceError ? err.message : `service unreachable: ${err}`,
      })
    ) {
      redraw();
    }
  }
}

async function toggle(path: string): Promise<void> {
  const nowExpanded = state.toggleExpanded(path);
  if (nowExpanded && !childrenByPath.has(path)) {
    try {
      await loadChildren(path);
    } catch (err) {
      state.nodeErrors.set(path, String(err));
    }
  }
  redraw();
}

async function runTraverse(): Promise<void> {
  const token = state.beginRequest();
  const filtered = [...state.activeFilter];
  try {
    const data = await client.traverse(state.selectedPath, filtered);
    if (state.acceptResponse(token, { kind: 'traverse', data, filtered })) {
      redraw();
    }
  } catch (err) {
    showBanner(String(err));
  }
}

async function runEffectiveSearch(principal: string, principalLabel: string): Promise<void> {
  const token = state.beginRequest();
  const search = { principal, principalLabel, root: state.selectedPath };
  try {
    const data = await client.effectiveSearch(search.root, principal);
    // Completed searches join the control pane's search list.
    state.addSearch(search);
    if (state.acceptResponse(token, { kind: 'effective', data, search })) {
      redraw();
    }
  } catch (err) {
    showBanner(String(err));
  }
}

async function runAudit(): Promise<void> {
  const token = state.beginRequest();
  try {
    const data = await client.audit(state.selectedPath);
    if (state.acceptResponse(token, { kind: 'audit', data })) {
      redraw();
    }
  } catch (err) {
    showBanner(String(err));
  }
}

function onClick(event: Event): void {
  const target = (event.target as HTMLElement).closest('[data-action]') as HTMLElement | null;
  if (!target) {
    return;
  }
  const action = target.dataset.action;
  const path = target.dataset.path ?? state.selectedPath;
  if (action === 'select' || action === 'goto') {
    void select(path);
    if (action === 'goto') {
      // Audit/search links also reveal the node in the tree.
      for (const prefix of ancestors(path)) {
        state.expanded.add(prefix);
        if (!childrenByPath.has(prefix)) {
          void loadChildren(prefix).then(redraw, () => undefined);
        }
      }
    }
  } else if (action === 'toggle') {
    void toggle(path);
  } else if (action === 'traverse') {
    void runTraverse();
  } else if (action === 'audit') {
    void runAudit();
  } else if (action === 'effective-search') {
    const selectEl = document.getElementById('search-principal') as HTMLSelectElement | null;
    const sid = selectEl?.value ?? '';
    if (!sid) {
      document.querySelector('.validation')?.removeAttribute('hidden');
      return;
    }
    const labelText = selectEl?.selectedOptions[0]?.textContent ?? sid;
    void runEffectiveSearch(sid, labelText);
  } else if (action === 'load-search') {
    const index = Number(target.dataset.index ?? '-1');
    const saved = state.savedSearches[index];
    if (saved) {
      void runEffectiveSearch(saved.principal, saved.principalLabel);
    }
  }
}

function onChange(event: Event): void {
  const target = event.target as HTMLElement;
  if (target.dataset.action === 'toggle-filter' && target.dataset.sid) {
    state.toggleFilter(target.dataset.sid);
    redraw();
  }
}

function ancestors(path: string): string[] {
  const segs = path.split('/').filter(Boolean);
  const out = ['/'];
  let cur = '';
  for (const seg of segs.slice(0, -1)) {
    cur += `/${seg}`;
    out.push(cur);
  }
  return out;
}

async function boot(): Promise<void> {
  document.body.addEventListener('click', onClick);
  document.body.addEventListener('change', onChange);
  try {
    meta = await client.meta();
    const root = await client.tree('/', 1);
    rootName = root.name || '/';
    childrenByPath.set('/', root.children ?? []);
  } catch (err) {
    showBanner(`cannot reach the aclens service at ${serviceBase}: ${err}`);
    return;
  }
  const initial = params.get('path') ?? '/';
  for (const prefix of ancestors(initial)) {
    state.expanded.add(prefix);
    if (!childrenByPath.has(prefix)) {
      try {
        await loadChildren(prefix);
      } catch {
        break;
      }
    }
  }
  await select(initial);
  redraw();
}

document.addEventListener('DOMContentLoaded', () => {
  void boot();
});
