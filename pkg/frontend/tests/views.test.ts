import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import type { SchemaInfo, SearchResponse, TermJson } from "../src/api.js";
import type { ChainSpec } from "../src/chain.js";
import { edgeKey } from "../src/entity.js";
import type { EntityDetail } from "../src/entity.js";
import {
  renderEntity,
  renderNotFound,
  renderQueryConsole,
  renderSchema,
  renderSearch,
  renderWizard,
  sortRows,
} from "../src/views.js";
import type { QueryConsoleState } from "../src/views.js";
import type { WizardStage, WizardState } from "../src/wizard.js";

const MMO = "https://example.org/mardi/mso#";
const EX = "https://example.org/mardi/xrct#";

const SCHEMA: SchemaInfo = {
  prefixes: { mmo: MMO, ex: EX },
  classes: [
    { iri: `${MMO}Algorithm`, label: "algorithm", ontology: "AlgoData" },
    { iri: `${MMO}MathematicalModel`, label: "mathematical model", ontology: "MathModDB" },
  ],
  properties: [
    {
      iri: `${MMO}solvedBy`,
      label: "solved by",
      kind: "object",
      domain: `${MMO}AlgorithmicProblem`,
      range: `${MMO}Algorithm`,
      inverseOf: `${MMO}solves`,
      transitive: false,
    },
    {
      iri: `${MMO}generalizes`,
      label: "generalizes",
      kind: "object",
      domain: `${MMO}Formulation`,
      range: `${MMO}Formulation`,
      inverseOf: `${MMO}generalizedBy`,
      transitive: true,
    },
  ],
  annotationPredicates: [`${MMO}formulaLatex`, `${MMO}externalId`],
};

const NO_LABELS: ReadonlyMap<string, string> = new Map();

function iriTerm(value: string): TermJson {
  return { type: "iri", value };
}

function literalTerm(value: string): TermJson {
  return { type: "literal", value };
}

describe("renderEntity", () => {
  it("shows the external identifier of filtered back projection", () => {
    const detail: EntityDetail = {
      record: {
        iri: `${EX}FilteredBackProjection`,
        types: [`${MMO}Algorithm`],
        label: "filtered back projection",
        description: "Analytic reconstruction via filtering and backprojection.",
        literalAttributes: [
          { predicate: `${MMO}externalId`, value: literalTerm("wikidata:Q20665529") },
        ],
        outgoing: [],
        incoming: [{ predicate: `${MMO}solvedBy`, source: `${EX}XRayInversion` }],
      },
      edgeStatuses: new Map(),
    };
    const html = renderEntity(detail, SCHEMA, NO_LABELS, false);
    expect(html).toContain("filtered back projection");
    expect(html).toContain("External identifiers");
    expect(html).toContain("wikidata:Q20665529");
    expect(html).toContain("mmo:Algorithm");
    expect(html).toContain("Analytic reconstruction");
    expect(html).toContain(
      `href="#/entity/${encodeURIComponent(`${EX}XRayInversion`)}"`,
    );
  });

  it("badges inferred edges and leaves asserted edges plain", () => {
    const usedBy = `${MMO}usedByModelProblem`;
    const models = `${MMO}models`;
    const detail: EntityDetail = {
      record: {
        iri: `${EX}XRayInversion`,
        types: [`${MMO}AlgorithmicProblem`],
        label: "X-ray inversion",
        description: null,
        literalAttributes: [],
        outgoing: [
          { predicate: usedBy, target: `${EX}XRayTransform` },
          { predicate: models, target: `${EX}MicrofractureDetection` },
        ],
        incoming: [],
      },
      edgeStatuses: new Map([
        [
          edgeKey("outgoing", usedBy, `${EX}XRayTransform`),
          { status: "inferred" as const, rule: "InverseRule" },
        ],
        [
          edgeKey("outgoing", models, `${EX}MicrofractureDetection`),
          { status: "asserted" as const },
        ],
      ]),
    };
    const html = renderEntity(detail, SCHEMA, NO_LABELS, false);
    expect(html.match(/badge-inferred/g)).toHaveLength(1);
    expect(html).toContain('title="InverseRule"');
    const inferredIndex = html.indexOf("badge-inferred");
    expect(html.indexOf("XRayTransform")).toBeLessThan(inferredIndex);
  });

  it("shows formulas verbatim by default and typeset on demand", () => {
    const latex = "\\partial_t u + v \\cdot \\nabla u = f";
    const detail: EntityDetail = {
      record: {
        iri: `${EX}AdvectionFormulation`,
        types: [],
        label: null,
        description: null,
        literalAttributes: [{ predicate: `${MMO}formulaLatex`, value: literalTerm(latex) }],
        outgoing: [],
        incoming: [],
      },
      edgeStatuses: new Map(),
    };
    const verbatim = renderEntity(detail, SCHEMA, NO_LABELS, false);
    expect(verbatim).toContain("\\partial_t u + v \\cdot \\nabla u = f");
    expect(verbatim).toContain("Typeset");
    const typeset = renderEntity(detail, SCHEMA, NO_LABELS, true);
    expect(typeset).toContain("∂ₜ u + v · ∇ u = f");
    expect(typeset).toContain("Show LaTeX source");
  });

  it("escapes markup in labels and descriptions", () => {
    const detail: EntityDetail = {
      record: {
        iri: `${EX}Weird`,
        types: [],
        label: 'Tom & <Jerry> "quoted"',
        description: "uses <script>alert(1)</script>",
        literalAttributes: [],
        outgoing: [],
        incoming: [],
      },
      edgeStatuses: new Map(),
    };
    const html = renderEntity(detail, SCHEMA, NO_LABELS, false);
    expect(html).not.toContain("<script>");
    expect(html).not.toContain("<Jerry>");
    expect(html).toContain("Tom &amp; &lt;Jerry&gt;");
    expect(html).toContain("&lt;script&gt;alert(1)&lt;/script&gt;");
  });
});

describe("renderNotFound", () => {
  it("names the missing IRI and links back to search", () => {
    const html = renderNotFound(`${EX}Nothing`);
    expect(html).toContain("Not found");
    expect(html).toContain(`${EX}Nothing`);
    expect(html).toContain('href="#/search"');
  });
});

describe("renderSearch", () => {
  it("lists hits as entity links with match metadata", () => {
    const response: SearchResponse = {
      query: "back",
      hits: [
        {
          iri: `${EX}FilteredBackProjection`,
          label: "filtered back projection",
          matchField: "label",
          rank: "substring",
        },
      ],
    };
    const html = renderSearch("back", response);
    expect(html).toContain('value="back"');
    expect(html).toContain("filtered back projection");
    expect(html).toContain("label, substring");
  });

  it("reports when nothing matches", () => {
    const html = renderSearch("zzz", { query: "zzz", hits: [] });
    expect(html).toContain("No matches");
  });
});

describe("query console", () => {
  const twoRows: QueryConsoleState = {
    queryText: "SELECT ?a WHERE { ?a a mmo:Algorithm }",
    result: {
      variables: ["a"],
      rows: [[iriTerm(`${EX}AlgebraicReconstructionTechnique`)], [iriTerm(`${EX}FilteredBackProjection`)]],
    },
    error: null,
    sortColumn: null,
    sortAscending: true,
  };

  it("renders a row count and linked IRI cells", () => {
    const html = renderQueryConsole(twoRows, SCHEMA.prefixes);
    expect(html).toContain("2 rows");
    expect(html).toContain("?a");
    expect(html).toContain("ex:AlgebraicReconstructionTechnique");
    expect(html).toContain("ex:FilteredBackProjection");
    expect(html).toContain(
      `href="#/entity/${encodeURIComponent(`${EX}FilteredBackProjection`)}"`,
    );
  });

  it("renders zero-row results explicitly", () => {
    const state: QueryConsoleState = {
      ...twoRows,
      result: { variables: ["a"], rows: [] },
    };
    const html = renderQueryConsole(state, SCHEMA.prefixes);
    expect(html).toContain("0 rows");
  });

  it("shows parse errors with the server's line and column, keeping the input", () => {
    const state: QueryConsoleState = {
      queryText: "SELECT ?x WHERE {",
      result: null,
      error: new ApiError(400, "PARSE_ERROR", "unexpected end of input", {
        kind: "UnexpectedToken",
        line: 1,
        column: 18,
      }),
      sortColumn: null,
      sortAscending: true,
    };
    const html = renderQueryConsole(state, SCHEMA.prefixes);
    expect(html).toContain("line 1, column 18");
    expect(html).toContain("unexpected end of input");
    expect(html).toContain("SELECT ?x WHERE {");
  });

  it("marks the sorted column", () => {
    const state: QueryConsoleState = { ...twoRows, sortColumn: 0, sortAscending: false };
    const html = renderQueryConsole(state, SCHEMA.prefixes);
    expect(html).toContain("▼");
  });
});

describe("sortRows", () => {
  const rows: TermJson[][] = [
    [literalTerm("beta"), literalTerm("1")],
    [literalTerm("alpha"), literalTerm("2")],
    [literalTerm("gamma"), literalTerm("3")],
  ];

  it("orders by the chosen column in either direction", () => {
    const ascending = sortRows(rows, 0, true, {});
    expect(ascending.map((r) => r[0]?.value)).toEqual(["alpha", "beta", "gamma"]);
    const descending = sortRows(rows, 0, false, {});
    expect(descending.map((r) => r[0]?.value)).toEqual(["gamma", "beta", "alpha"]);
  });

  it("is stable for equal keys and does not mutate its input", () => {
    const tied: TermJson[][] = [
      [literalTerm("same"), literalTerm("first")],
      [literalTerm("same"), literalTerm("second")],
    ];
    expect(sortRows(tied, 0, true, {}).map((r) => r[1]?.value)).toEqual(["first", "second"]);
    expect(sortRows(tied, 0, false, {}).map((r) => r[1]?.value)).toEqual(["first", "second"]);
    expect(rows[0]?.[0]?.value).toBe("beta");
  });
});

describe("renderWizard", () => {
  const spec: ChainSpec = {
    classIris: [`${MMO}ApplicationDomain`, `${MMO}ApplicationProblem`],
    edgeIris: [`${MMO}containsProblem`],
    stageLabels: ["Application domain", "Application problem"],
  };

  function stage(stageIndex: number, candidates: string[]): WizardStage {
    return {
      stageIndex,
      query: `q${stageIndex}`,
      rawResponse: JSON.stringify({ variables: ["entity"], rows: candidates.map((c) => [iriTerm(c)]) }),
      candidates,
    };
  }

  it("offers each candidate as a button carrying its IRI", () => {
    const state: WizardState = {
      steps: [],
      current: stage(0, [`${EX}CivilEngineering`]),
      history: [],
    };
    const html = renderWizard(state, spec, NO_LABELS, null);
    expect(html).toContain('data-action="wizard-choose"');
    expect(html).toContain(`data-iri="${EX}CivilEngineering"`);
    expect(html).toContain("CivilEngineering");
    expect(html).not.toContain('data-action="wizard-back"');
  });

  it("labels candidates from the provided lookup", () => {
    const labels = new Map([[`${EX}CivilEngineering`, "civil engineering"]]);
    const state: WizardState = {
      steps: [],
      current: stage(0, [`${EX}CivilEngineering`]),
      history: [],
    };
    expect(renderWizard(state, spec, labels, null)).toContain(">civil engineering</button>");
  });

  it("announces a dead end when no candidates continue the chain", () => {
    const state: WizardState = {
      steps: [
        { stageIndex: 0, iri: `${EX}CivilEngineering`, classIri: spec.classIris[0] as string, label: "civil engineering" },
      ],
      current: stage(1, []),
      history: [stage(0, [`${EX}CivilEngineering`])],
    };
    const html = renderWizard(state, spec, NO_LABELS, null);
    expect(html).toContain("Dead end");
    expect(html).toContain('data-action="wizard-back"');
  });

  it("shows the completed chain as entity links", () => {
    const state: WizardState = {
      steps: [
        { stageIndex: 0, iri: `${EX}CivilEngineering`, classIri: spec.classIris[0] as string, label: "civil engineering" },
        { stageIndex: 1, iri: `${EX}MicrofractureDetection`, classIri: spec.classIris[1] as string, label: "microfracture detection" },
      ],
      current: null,
      history: [stage(0, [`${EX}CivilEngineering`]), stage(1, [`${EX}MicrofractureDetection`])],
    };
    const html = renderWizard(state, spec, NO_LABELS, null);
    expect(html).toContain("Chain complete");
    expect(html).toContain(
      `href="#/entity/${encodeURIComponent(`${EX}MicrofractureDetection`)}"`,
    );
  });

  it("offers a retry with the failed choice after an error", () => {
    const state: WizardState = {
      steps: [],
      current: stage(0, [`${EX}CivilEngineering`]),
      history: [],
    };
    const html = renderWizard(state, spec, NO_LABELS, {
      message: "INTERNAL: backend unavailable",
      choiceIri: `${EX}CivilEngineering`,
    });
    expect(html).toContain("backend unavailable");
    expect(html).toContain('data-action="wizard-retry"');
    expect(html).toContain(`data-iri="${EX}CivilEngineering"`);
    // The candidate list is still there: nothing was lost.
    expect(html).toContain('data-action="wizard-choose"');
  });
});

describe("renderSchema", () => {
  it("tabulates classes, properties, and annotations", () => {
    const html = renderSchema(SCHEMA);
    expect(html).toContain("mmo:Algorithm");
    expect(html).toContain("mmo:solvedBy");
    expect(html).toContain("mmo:solves");
    expect(html).toContain("yes");
    expect(html).toContain("mmo:externalId");
    expect(html).toContain("MathModDB");
  });
});
