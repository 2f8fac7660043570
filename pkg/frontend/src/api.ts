import type {
  AclResponse,
  AuditResponse,
  EffectiveResult,
  EffectiveRowsResponse,
  MembershipResponse,
  MetaDoc,
  TreeNode,
} from './types';

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detailPath?: string,
  ) {
    super(message);
  }
}

/** Build a service URL; exported separately so tests can pin the exact
 * query-string contract. */
export function buildUrl(base: string, path: string, params: Record<string, string>): string {
  const query = Object.entries(params)
    .filter(([, v]) => v !== '')
    .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(v)}`)
    .join('&');
  return query ? `${base}${path}?${query}` : `${base}${path}`;
}

export class ServiceClient {
  constructor(private readonly base: string) {}

  private async get<T>(path: string, params: Record<string, string> = {}): Promise<T> {
    const resp = await fetch(buildUrl(this.base, path, params));
    const body = await resp.json().catch(() => null);
    if (!resp.ok) {
      const code = body?.code ?? 'error';
      const message = body?.message ?? `${resp.status} on ${path}`;
      throw new ServiceError(resp.status, code, message, body?.detail_path);
    }
    return body as T;
  }

  meta(): Promise<MetaDoc> {
    return this.get('/meta');
  }

  tree(path: string, depth = 1): Promise<TreeNode> {
    return this.get('/tree', { path, depth: String(depth) });
  }

  acl(path: string): Promise<AclResponse> {
    return this.get('/acl', { path });
  }

  traverse(root: string, filter: string[], includeUnchanged = false): Promise<{ rows: AclResponse[] }> {
    return this.get('/traverse', {
      root,
      filter: filter.join(','),
      include_unchanged: includeUnchanged ? 'true' : 'false',
    });
  }

  effectiveSearch(path: string, principal: string): Promise<EffectiveRowsResponse> {
    return this.get('/effective', { path, principal, recursive: 'true' });
  }

  effective(path: string, principal: string): Promise<EffectiveResult> {
    return this.get('/effective', { path, principal, recursive: 'false' });
  }

  membership(sid: string, direction: 'member-of' | 'members'): Promise<MembershipResponse> {
    return this.get('/membership', { sid, direction });
  }

  audit(root: string): Promise<AuditResponse> {
    return this.get('/audit', { root });
  }
}
