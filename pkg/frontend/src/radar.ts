import { metricLabel } from "./format.js";
import { RUBRIC_KEYS, type RubricKey } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const MIN_SCORE = 1;
const MAX_SCORE = 5;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    el.setAttribute(name, value);
  }
  return el;
}

// Radar chart of the 13 rubric scores on their 1–5 scale. Pure
// presentation: scores are only mapped to polygon coordinates, and
// each axis label carries the raw score so the displayed numbers are
// the service's, not derived ones.
export function renderRadar(
  scores: Record<RubricKey, number>,
  size = 360,
): SVGSVGElement {
  const center = size / 2;
  const radius = size * 0.3;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${size} ${size}`,
    width: String(size),
    height: String(size),
    class: "rubric-radar",
    role: "img",
  });

  const angle = (index: number) =>
    (Math.PI * 2 * index) / RUBRIC_KEYS.length - Math.PI / 2;
  const point = (index: number, score: number): [number, number] => {
    const r = (radius * (score - MIN_SCORE)) / (MAX_SCORE - MIN_SCORE);
    return [center + r * Math.cos(angle(index)), center + r * Math.sin(angle(index))];
  };

  // Concentric grid rings at each integer score.
  for (let ring = MIN_SCORE; ring <= MAX_SCORE; ring++) {
    const ringPoints = RUBRIC_KEYS.map((_, i) => point(i, ring).join(","));
    svg.appendChild(
      svgEl("polygon", {
        points: ringPoints.join(" "),
        class: "radar-grid",
        fill: "none",
        stroke: "#d8d8e0",
      }),
    );
  }

  // Axis spokes and labels.
  RUBRIC_KEYS.forEach((key, i) => {
    const [x, y] = point(i, MAX_SCORE);
    svg.appendChild(
      svgEl("line", {
        x1: String(center),
        y1: String(center),
        x2: String(x),
        y2: String(y),
        stroke: "#d8d8e0",
      }),
    );
    const [lx, ly] = point(i, MAX_SCORE + 0.75);
    const anchor = lx < center - 6 ? "end" : lx > center + 6 ? "start" : "middle";
    const label = svgEl("text", {
      x: String(lx),
      y: String(ly),
      "text-anchor": anchor,
      class: "radar-label",
      "data-aspect": key,
      "data-score": String(scores[key]),
    });
    label.textContent = `${metricLabel(key)} (${scores[key]})`;
    svg.appendChild(label);
  });

  // The score polygon itself.
  const valuePoints = RUBRIC_KEYS.map((key, i) => point(i, scores[key]).join(","));
  svg.appendChild(
    svgEl("polygon", {
      points: valuePoints.join(" "),
      class: "radar-values",
      fill: "rgba(74, 108, 212, 0.25)",
      stroke: "rgba(74, 108, 212, 0.9)",
      "stroke-width": "2",
    }),
  );
  return svg;
}
