/**
 * Pure HTML renderers for the three panes. Every value shown comes
 * verbatim from a service response; these functions only lay it out.
 * Interactive elements carry data-action attributes for the event
 * delegation in main.ts.
 */

import type { ExplorerState, PaneContents, SavedSearch } from './state';
import type { AclEntry, AclResponse, AuditResponse, MetaDoc, TreeNode } from './types';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#x27;');
}

function label(sid: string, displayName: string | null): string {
  return displayName ?? sid;
}

function provenanceText(entry: AclEntry): string {
  return entry.provenance === 'explicit' ? 'explicit' : `inherited(${entry.distance})`;
}

const FLAG_ABBREV: Record<string, string> = {
  container_inherit: 'ci',
  object_inherit: 'oi',
  no_propagate: 'np',
  inherit_only: 'io',
};

function flagsText(flags: string[]): string {
  if (flags.length === 0) {
    return '-';
  }
  return flags.map((f) => FLAG_ABBREV[f] ?? f).join(',');
}

// --- control pane -----------------------------------------------------------

/**
 * Folder tree plus the saved effective searches. `childrenByPath` holds
 * the lazily loaded listings; unexpanded or unloaded folders render a
 * closed caret.
 */
export function renderTreePane(
  childrenByPath: Map<string, TreeNode[]>,
  state: ExplorerState,
  rootName = '/',
): string {
  const renderNode = (path: string, name: string): string => {
    const selected = state.selectedPath === path ? ' selected' : '';
    const isExpanded = state.expanded.has(path);
    const children = childrenByPath.get(path);
    const folders = (children ?? []).filter((c) => c.kind === 'folder');
    const caret = `<span class="caret" data-action="toggle" data-path="${escapeHtml(path)}">${
      isExpanded ? '&#9662;' : '&#9656;'
    }</span>`;
    const badge = state.nodeErrors.has(path)
      ? `<span class="badge error" title="${escapeHtml(state.nodeErrors.get(path) ?? '')}">&#9888;</span>`
      : '';
    let sub = '';
    if (isExpanded && folders.length > 0) {
      sub = `<ul>${folders.map((c) => renderNode(c.path, c.name)).join('')}</ul>`;
    }
    return (
      `<li>${caret}<span class="node${selected}" data-action="select" ` +
      `data-path="${escapeHtml(path)}">${escapeHtml(name)}</span>${badge}${sub}</li>`
    );
  };

  const searches =
    state.savedSearches.length === 0
      ? '<p class="empty">no searches yet</p>'
      : `<ul class="searches">${state.savedSearches
          .map(
            (s, i) =>
              `<li data-action="load-search" data-index="${i}">` +
              `${escapeHtml(s.principalLabel)} &#8594; ${escapeHtml(s.root)}</li>`,
          )
          .join('')}</ul>`;

  return (
    `<h2>Folders</h2><ul class="tree">${renderNode('/', rootName)}</ul>` +
    `<h2>Effective searches</h2>${searches}`
  );
}

// --- results pane -----------------------------------------------------------

/** The code-to-attribute key rows for one compressed special string. */
function specialPopover(rendered: string, meta: MetaDoc | null): string {
  if (!meta) {
    return '';
  }
  const byCode = new Map(meta.attributes.map((a) => [a.code, a.name]));
  const rows = rendered
    .split('-')
    .map(
      (code) =>
        `<tr class="key-row"><td>${escapeHtml(code)}</td>` +
        `<td>${escapeHtml(byCode.get(code) ?? '?')}</td></tr>`,
    )
    .join('');
  return `<span class="popover"><table class="key">${rows}</table></span>`;
}

function permissionCell(entry: AclEntry, meta: MetaDoc | null): string {
  const rendered = escapeHtml(entry.rendered);
  if (entry.level !== 'Special') {
    return rendered;
  }
  return `<span class="special" tabindex="0">${rendered}${specialPopover(entry.rendered, meta)}</span>`;
}

function entriesTable(entries: AclEntry[], meta: MetaDoc | null): string {
  if (entries.length === 0) {
    return '<p class="empty">no entries</p>';
  }
  const rows = entries
    .map((entry) => {
      const via = entry.matched_via
        ? `<div class="via">via ${entry.matched_via.map(escapeHtml).join(' &gt; ')}</div>`
        : '';
      return (
        `<tr class="kind-${entry.kind}">` +
        `<td>${escapeHtml(label(entry.sid, entry.display_name))}${via}</td>` +
        `<td class="kind">${entry.kind}</td>` +
        `<td>${permissionCell(entry, meta)}</td>` +
        `<td>${escapeHtml(provenanceText(entry))}</td>` +
        `<td>${escapeHtml(flagsText(entry.flags))}</td></tr>`
      );
    })
    .join('');
  return (
    '<table class="acl"><thead><tr><th>Principal</th><th>Type</th>' +
    '<th>Permission</th><th>Provenance</th><th>Flags</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

function renderAcl(data: AclResponse, meta: MetaDoc | null): string {
  return `<h2>${escapeHtml(data.path)}</h2>${entriesTable(data.entries, meta)}`;
}

function renderTraverse(rows: AclResponse[], filtered: string[], meta: MetaDoc | null): string {
  const note =
    filtered.length > 0
      ? `<p class="note">filtered: ${filtered.map(escapeHtml).join(', ')}</p>`
      : '';
  const sections = rows
    .map((row) => `<section><h3>${escapeHtml(row.path)}</h3>${entriesTable(row.entries, meta)}</section>`)
    .join('');
  return `<h2>Traversal</h2>${note}${sections}`;
}

function renderEffective(contents: Extract<PaneContents, { kind: 'effective' }>): string {
  const { data, search } = contents;
  const rows = data.rows
    .map(
      (r) =>
        `<tr><td><span data-action="goto" data-path="${escapeHtml(r.path)}">${escapeHtml(r.path)}</span></td>` +
        `<td class="mask">${escapeHtml(r.granted)}</td><td>${escapeHtml(r.rendered)}</td></tr>`,
    )
    .join('');
  return (
    `<h2>Effective permissions: ${escapeHtml(search.principalLabel)} under ${escapeHtml(search.root)}</h2>` +
    '<table class="effective"><thead><tr><th>Path</th><th>Granted</th><th>Permission</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

function renderAudit(data: AuditResponse): string {
  if (data.findings.length === 0) {
    return '<h2>Audit</h2><p class="empty">no shadowed denies found</p>';
  }
  const items = data.findings
    .map(
      (f) =>
        '<li class="finding">' +
        `<span class="link" data-action="goto" data-path="${escapeHtml(f.path)}">${escapeHtml(f.path)}</span> ` +
        `&mdash; ${escapeHtml(label(f.principal, f.display_name))} keeps ` +
        `<span class="special">${escapeHtml(f.shadowed_rendered)}</span> despite the deny inherited from ` +
        `${escapeHtml(f.deny_source_path)}</li>`,
    )
    .join('');
  return `<h2>Audit</h2><ul class="findings">${items}</ul>`;
}

export function renderResultsPane(contents: PaneContents, meta: MetaDoc | null): string {
  switch (contents.kind) {
    case 'empty':
      return '<p class="empty">select a folder</p>';
    case 'error':
      return `<div class="banner error">${escapeHtml(contents.message)}</div>`;
    case 'acl':
      return renderAcl(contents.data, meta);
    case 'traverse':
      return renderTraverse(contents.data.rows, contents.filtered, meta);
    case 'effective':
      return renderEffective(contents);
    case 'audit':
      return renderAudit(contents.data);
  }
}

// --- action pane -------------------------------------------------------------

/** The full 14-entry character-to-attribute key from /meta. */
export function renderKey(meta: MetaDoc | null): string {
  if (!meta) {
    return '<p class="empty">key unavailable</p>';
  }
  const rows = meta.attributes
    .map(
      (a) =>
        `<tr class="key-row"><td>${escapeHtml(a.code)}</td>` +
        `<td>${escapeHtml(a.name)}</td><td class="mask">${escapeHtml(a.mask)}</td></tr>`,
    )
    .join('');
  return `<table class="key full-key"><thead><tr><th>Code</th><th>Attribute</th><th>Mask</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderActionPane(state: ExplorerState, meta: MetaDoc | null): string {
  const principals = meta?.principals ?? [];
  const filterBoxes = principals
    .map((p) => {
      const checked = state.activeFilter.has(p.sid) ? ' checked' : '';
      return (
        `<label><input type="checkbox" data-action="toggle-filter" ` +
        `data-sid="${escapeHtml(p.sid)}"${checked}> ${escapeHtml(label(p.sid, p.display_name))}</label>`
      );
    })
    .join('');
  const options = principals
    .map((p) => `<option value="${escapeHtml(p.sid)}">${escapeHtml(label(p.sid, p.display_name))}</option>`)
    .join('');
  return (
    `<h2>${escapeHtml(state.selectedPath)}</h2>` +
    '<div class="actions">' +
    '<button data-action="traverse">Traverse from here</button>' +
    '<button data-action="audit">Audit subtree</button>' +
    '</div>' +
    `<fieldset class="filter"><legend>Filter out principals</legend>${filterBoxes}</fieldset>` +
    '<fieldset class="search"><legend>Effective permission search</legend>' +
    `<select id="search-principal">${options}</select>` +
    '<button data-action="effective-search">Search from here</button>' +
    '<p class="hint validation" hidden>pick a principal first</p>' +
    '</fieldset>' +
    `<details class="key-box"><summary>Permission key</summary>${renderKey(meta)}</details>`
  );
}

export function searchLabel(search: SavedSearch): string {
  return `${search.principalLabel} → ${search.root}`;
}
