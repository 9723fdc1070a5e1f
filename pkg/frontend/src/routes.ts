/**
 * Hash-based routing.
 *
 * Every view the app can show has exactly one route shape, and routes
 * round-trip through the URL fragment so each view is deep-linkable.
 */

export type ViewRoute =
  | { view: "search"; query?: string }
  | { view: "entity"; iri: string }
  | { view: "wizard" }
  | { view: "query" }
  | { view: "schema" };

export function formatRoute(route: ViewRoute): string {
  switch (route.view) {
    case "search":
      return route.query !== undefined
        ? `#/search?q=${encodeURIComponent(route.query)}`
        : "#/search";
    case "entity":
      return `#/entity/${encodeURIComponent(route.iri)}`;
    case "wizard":
      return "#/wizard";
    case "query":
      return "#/query";
    case "schema":
      return "#/schema";
  }
}

export function parseRoute(hash: string): ViewRoute {
  const fragment = hash.startsWith("#") ? hash.slice(1) : hash;
  if (fragment === "" || fragment === "/" || fragment === "/search") {
    return { view: "search" };
  }
  if (fragment.startsWith("/search?")) {
    const params = new URLSearchParams(fragment.slice("/search?".length));
    const query = params.get("q");
    return query !== null ? { view: "search", query } : { view: "search" };
  }
  if (fragment.startsWith("/entity/")) {
    const encoded = fragment.slice("/entity/".length);
    return { view: "entity", iri: decodeURIComponent(encoded) };
  }
  if (fragment === "/wizard") return { view: "wizard" };
  if (fragment === "/query") return { view: "query" };
  if (fragment === "/schema") return { view: "schema" };
  return { view: "search" };
}
