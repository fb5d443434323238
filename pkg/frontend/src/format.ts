// IRIs are abbreviated to their final path segment for display; the full
// IRI goes on the hover title. Ontology labels are out of scope because the
// whole pipeline is structure-only.

export function tailSegment(iri: string): string {
  const trimmed = iri.replace(/[/#]+$/, "");
  const cut = Math.max(trimmed.lastIndexOf("/"), trimmed.lastIndexOf("#"));
  const tail = cut >= 0 ? trimmed.slice(cut + 1) : trimmed;
  return tail.length > 0 ? tail : iri;
}

export function formatScore(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 0.001 && ax < 1000) return x.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
  return x.toExponential(3);
}
