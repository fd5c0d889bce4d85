import { describe, expect, it } from "vitest";

import { NODE_RADIUS_BASE, ROLE_COLORS, nodeRadius } from "../src/palette.js";

describe("palette", () => {
  it("is a single total table with one distinct color per role", () => {
    const roles = Object.keys(ROLE_COLORS).sort();
    expect(roles).toEqual(["api", "intermediate", "sink", "source"]);
    const colors = Object.values(ROLE_COLORS);
    expect(new Set(colors).size).toBe(colors.length);
  });

  it("scales node radius strictly monotonically in the score", () => {
    expect(nodeRadius(undefined, 3)).toBe(NODE_RADIUS_BASE);
    expect(nodeRadius(1, 3)).toBeGreaterThan(NODE_RADIUS_BASE);
    expect(nodeRadius(2, 3)).toBeGreaterThan(nodeRadius(1, 3));
    expect(nodeRadius(3, 3)).toBeGreaterThan(nodeRadius(2, 3));
  });
});
