import { afterEach, describe, expect, it, vi } from 'vitest';

import { ServiceClient, ServiceError, buildUrl } from '../src/api';

describe('buildUrl', () => {
  it('encodes query parameters', () => {
    expect(buildUrl('http://x:1', '/acl', { path: '/Accounting/Plan' })).toBe(
      'http://x:1/acl?path=%2FAccounting%2FPlan',
    );
  });

  it('drops empty parameters', () => {
    expect(buildUrl('http://x:1', '/traverse', { root: '/', filter: '' })).toBe(
      'http://x:1/traverse?root=%2F',
    );
  });
});

describe('ServiceClient', () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  function stubFetch(status: number, body: unknown) {
    const calls: string[] = [];
    vi.stubGlobal(
      'fetch',
      vi.fn(async (url: string) => {
        calls.push(String(url));
        return {
          ok: status < 400,
          status,
          json: async () => body,
        };
      }),
    );
    return calls;
  }

  it('requests traverse with the documented query contract', async () => {
    const calls = stubFetch(200, { rows: [] });
    const client = new ServiceClient('http://localhost:8077');
    await client.traverse('/Users', ['S-1-1-0', 'S-1-5-18'], true);
    expect(calls).toEqual([
      'http://localhost:8077/traverse?root=%2FUsers&filter=S-1-1-0%2CS-1-5-18&include_unchanged=true',
    ]);
  });

  it('requests recursive effective searches', async () => {
    const calls = stubFetch(200, { rows: [] });
    const client = new ServiceClient('http://x:1');
    await client.effectiveSearch('/', 'S-1-5-21-1001');
    expect(calls[0]).toContain('/effective?');
    expect(calls[0]).toContain('recursive=true');
    expect(calls[0]).toContain('principal=S-1-5-21-1001');
  });

  it('maps error bodies onto ServiceError', async () => {
    stubFetch(404, { code: 'path_not_found', message: 'path not found: /Nope', detail_path: '/Nope' });
    const client = new ServiceClient('http://x:1');
    const err = await client.acl('/Nope').catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).code).toBe('path_not_found');
    expect((err as ServiceError).status).toBe(404);
    expect((err as ServiceError).detailPath).toBe('/Nope');
  });
});
