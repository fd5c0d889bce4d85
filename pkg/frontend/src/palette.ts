// The single role -> color table. Every piece of UI that colors a node
// reads this map; nothing else may hardcode a role color, so a role can
// never render in two colors within one session.

import type { Role } from "./types.js";

export const ROLE_COLORS: Readonly<Record<Role, string>> = {
  source: "green",
  sink: "red",
  api: "orange",
  intermediate: "blue",
};

export const ROLE_DESCRIPTIONS: Readonly<Record<Role, string>> = {
  source: "source (tainted data origin)",
  sink: "sink (sensitive destination)",
  api: "third-party API call",
  intermediate: "intermediate step",
};

// Dash pattern for plausible (currently inactive) edges.
export const PLAUSIBLE_DASH = "7 5";

// Collapsed-chain super-nodes are not a role; they get a neutral gray.
export const SUPER_NODE_COLOR = "#7a7a7a";

export const NODE_RADIUS_BASE = 16;
export const NODE_RADIUS_SCORE_RANGE = 12;

/** Impact scores map to node radius, strictly monotone in the score. */
export function nodeRadius(score: number | undefined, maxScore: number): number {
  if (!score || maxScore <= 0) {
    return NODE_RADIUS_BASE;
  }
  return NODE_RADIUS_BASE + (NODE_RADIUS_SCORE_RANGE * score) / maxScore;
}
