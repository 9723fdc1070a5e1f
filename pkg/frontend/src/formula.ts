/**
 * Best-effort plain-text typesetting for LaTeX formulas.
 *
 * Entity pages show formulas verbatim by default; this converter backs
 * an optional toggle that maps common commands to Unicode. Anything it
 * does not recognise is left as written, so the result never hides
 * information.
 */

const COMMANDS: Record<string, string> = {
  alpha: "α",
  beta: "β",
  gamma: "γ",
  delta: "δ",
  epsilon: "ε",
  zeta: "ζ",
  eta: "η",
  theta: "θ",
  iota: "ι",
  kappa: "κ",
  lambda: "λ",
  mu: "μ",
  nu: "ν",
  xi: "ξ",
  pi: "π",
  rho: "ρ",
  sigma: "σ",
  tau: "τ",
  upsilon: "υ",
  phi: "φ",
  chi: "χ",
  psi: "ψ",
  omega: "ω",
  Gamma: "Γ",
  Delta: "Δ",
  Theta: "Θ",
  Lambda: "Λ",
  Xi: "Ξ",
  Pi: "Π",
  Sigma: "Σ",
  Phi: "Φ",
  Psi: "Ψ",
  Omega: "Ω",
  int: "∫",
  oint: "∮",
  sum: "∑",
  prod: "∏",
  partial: "∂",
  nabla: "∇",
  infty: "∞",
  cdot: "·",
  times: "×",
  pm: "±",
  mp: "∓",
  le: "≤",
  leq: "≤",
  ge: "≥",
  geq: "≥",
  ne: "≠",
  neq: "≠",
  approx: "≈",
  equiv: "≡",
  to: "→",
  rightarrow: "→",
  leftarrow: "←",
  mapsto: "↦",
  in: "∈",
  notin: "∉",
  subset: "⊂",
  subseteq: "⊆",
  cup: "∪",
  cap: "∩",
  forall: "∀",
  exists: "∃",
  emptyset: "∅",
  sqrt: "√",
  propto: "∝",
  sim: "∼",
  circ: "∘",
  ell: "ℓ",
  hbar: "ℏ",
  dots: "…",
  ldots: "…",
  cdots: "⋯",
};

const BLACKBOARD: Record<string, string> = {
  R: "ℝ",
  N: "ℕ",
  Z: "ℤ",
  Q: "ℚ",
  C: "ℂ",
  H: "ℍ",
  P: "ℙ",
};

const SUPERSCRIPTS: Record<string, string> = {
  "0": "⁰",
  "1": "¹",
  "2": "²",
  "3": "³",
  "4": "⁴",
  "5": "⁵",
  "6": "⁶",
  "7": "⁷",
  "8": "⁸",
  "9": "⁹",
  "+": "⁺",
  "-": "⁻",
  "=": "⁼",
  "(": "⁽",
  ")": "⁾",
  n: "ⁿ",
  i: "ⁱ",
};

const SUBSCRIPTS: Record<string, string> = {
  "0": "₀",
  "1": "₁",
  "2": "₂",
  "3": "₃",
  "4": "₄",
  "5": "₅",
  "6": "₆",
  "7": "₇",
  "8": "₈",
  "9": "₉",
  "+": "₊",
  "-": "₋",
  "=": "₌",
  "(": "₍",
  ")": "₎",
  a: "ₐ",
  e: "ₑ",
  h: "ₕ",
  i: "ᵢ",
  j: "ⱼ",
  k: "ₖ",
  l: "ₗ",
  m: "ₘ",
  n: "ₙ",
  o: "ₒ",
  p: "ₚ",
  r: "ᵣ",
  s: "ₛ",
  t: "ₜ",
  u: "ᵤ",
  v: "ᵥ",
  x: "ₓ",
};

const SPACING = new Set([",", ";", ":", "!", "quad", "qquad"]);

const PASSTHROUGH_GROUPS = new Set(["text", "mathrm", "mathit", "mathbf", "operatorname"]);

interface Scanner {
  source: string;
  pos: number;
}

function scanGroup(scanner: Scanner): string {
  // Called with scanner.pos at "{"; returns the raw content, brace-balanced.
  let depth = 0;
  let start = scanner.pos + 1;
  for (; scanner.pos < scanner.source.length; scanner.pos += 1) {
    const ch = scanner.source[scanner.pos];
    if (ch === "{") depth += 1;
    else if (ch === "}") {
      depth -= 1;
      if (depth === 0) {
        const content = scanner.source.slice(start, scanner.pos);
        scanner.pos += 1;
        return content;
      }
    }
  }
  return scanner.source.slice(start);
}

function scanArgument(scanner: Scanner): string {
  // A braced group or a single character.
  if (scanner.source[scanner.pos] === "{") {
    return scanGroup(scanner);
  }
  const ch = scanner.source[scanner.pos] ?? "";
  scanner.pos += ch.length;
  return ch;
}

function mapScript(content: string, table: Record<string, string>, marker: string): string {
  const rendered = typesetFormula(content);
  const mapped = [...rendered].map((ch) => table[ch]);
  if (rendered.length > 0 && mapped.every((ch) => ch !== undefined)) {
    return mapped.join("");
  }
  return [...rendered].length > 1 ? `${marker}(${rendered})` : `${marker}${rendered}`;
}

function wrapIfCompound(text: string): string {
  return [...text].length > 1 ? `(${text})` : text;
}

/** Convert a LaTeX fragment to readable Unicode text. */
export function typesetFormula(latex: string): string {
  const scanner: Scanner = { source: latex, pos: 0 };
  const out: string[] = [];
  while (scanner.pos < scanner.source.length) {
    const ch = scanner.source[scanner.pos] as string;
    if (ch === "\\") {
      scanner.pos += 1;
      let name = "";
      while (scanner.pos < scanner.source.length && /[a-zA-Z]/.test(scanner.source[scanner.pos] as string)) {
        name += scanner.source[scanner.pos];
        scanner.pos += 1;
      }
      if (name === "") {
        // Single-character command such as \, or \{.
        const symbol = scanner.source[scanner.pos] ?? "";
        scanner.pos += symbol.length;
        if (SPACING.has(symbol)) {
          out.push(" ");
        } else {
          out.push(symbol);
        }
        continue;
      }
      if (SPACING.has(name)) {
        out.push(" ");
      } else if (name === "frac") {
        const numerator = typesetFormula(scanArgument(scanner));
        const denominator = typesetFormula(scanArgument(scanner));
        out.push(`${wrapIfCompound(numerator)}/${wrapIfCompound(denominator)}`);
      } else if (name === "mathbb") {
        const content = scanArgument(scanner);
        out.push([...content].map((c) => BLACKBOARD[c] ?? c).join(""));
      } else if (PASSTHROUGH_GROUPS.has(name)) {
        out.push(typesetFormula(scanArgument(scanner)));
      } else if (name === "left" || name === "right") {
        // The delimiter that follows stands on its own.
        continue;
      } else if (name in COMMANDS) {
        out.push(COMMANDS[name] as string);
      } else {
        out.push(`\\${name}`);
      }
    } else if (ch === "^") {
      scanner.pos += 1;
      out.push(mapScript(scanArgument(scanner), SUPERSCRIPTS, "^"));
    } else if (ch === "_") {
      scanner.pos += 1;
      out.push(mapScript(scanArgument(scanner), SUBSCRIPTS, "_"));
    } else if (ch === "{" || ch === "}") {
      scanner.pos += 1;
    } else {
      out.push(ch);
      scanner.pos += 1;
    }
  }
  return out.join("").replace(/ {2,}/g, " ").trim();
}
