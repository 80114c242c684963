// Page arithmetic for the card list.  The server paginates; these helpers
// exist for the pager widget and for checking a whole listing client-side.

export function pageCount(total: number, pageSize: number): number {
  if (pageSize < 1) throw new Error("pageSize must be at least 1");
  return Math.ceil(total / pageSize);
}

export function pageSlice<T>(items: T[], page: number, pageSize: number): T[] {
  if (page < 1) throw new Error("pages start at 1");
  return items.slice((page - 1) * pageSize, page * pageSize);
}

/** Lengths of every page, e.g. 7 items at size 3 -> [3, 3, 1]. */
export function pageSizes(total: number, pageSize: number): number[] {
  const sizes: number[] = [];
  let remaining = total;
  while (remaining > 0) {
    sizes.push(Math.min(pageSize, remaining));
    remaining -= pageSize;
  }
  return sizes;
}
