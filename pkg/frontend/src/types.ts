/** Service payload shapes. Everything rendered comes verbatim from
 * these bodies; the UI never recomputes permissions. */

export interface AclEntry {
  sid: string;
  display_name: string | null;
  kind: 'allow' | 'deny';
  level: string;
  rendered: string;
  provenance: 'explicit' | 'inherited';
  distance: number;
  flags: string[];
  matched_via?: string[];
}

export interface AclResponse {
  path: string;
  entries: AclEntry[];
}

export interface TraverseResponse {
  rows: AclResponse[];
}

export interface EffectiveRow {
  path: string;
  granted: string;
  rendered: string;
}

export interface EffectiveRowsResponse {
  rows: EffectiveRow[];
}

export interface AceRef {
  sid: string;
  display_name: string | null;
  kind: 'allow' | 'deny';
  mask: string;
  provenance: 'explicit' | 'inherited';
  distance: number;
  flags: string[];
}

export interface EffectiveResult {
  path: string;
  principal: string;
  granted: string;
  rendered: string;
  short_circuited: boolean;
  provenance: Record<string, AceRef | null>;
}

export interface Finding {
  path: string;
  principal: string;
  display_name: string | null;
  shadowed: string[];
  shadowed_rendered: string;
  deny_source_path: string;
  allow: AceRef;
}

export interface AuditResponse {
  findings: Finding[];
}

export interface AttributeRow {
  name: string;
  bit: number;
  mask: string;
  code: string;
}

export interface PrincipalRow {
  sid: string;
  display_name: string | null;
  kind: 'user' | 'group';
}

export interface MetaDoc {
  format_version: number;
  attributes: AttributeRow[];
  coarse_levels: { name: string; mask: string; attributes: string[] }[];
  generic: { name: string; bit: number; expands_to: string[] }[];
  snapshot?: Record<string, number>;
  principals?: PrincipalRow[];
}

export interface TreeNode {
  path: string;
  name: string;
  kind: 'folder' | 'file';
  has_children: boolean;
  children: TreeNode[] | null;
}

export interface MembershipResponse {
  sid: string;
  direction: 'member-of' | 'members';
  results: PrincipalRow[];
}
