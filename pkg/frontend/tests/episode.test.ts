import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { EpisodeFormatError, parseEpisode } from "../src/episode.js";

const fixture = readFileSync(
  join(__dirname, "fixtures", "sample.play"),
  "utf8",
);

describe("parseEpisode", () => {
  it("parses an episode written by the backend", async () => {
    const ep = await parseEpisode(fixture);
    expect(ep.hz).toBe(30);
    expect(ep.source).toBe("human");
    expect(ep.seed).toBe(42);
    expect(ep.truncated).toBe(true);
    expect(ep.obs).toHaveLength(12);
    expect(ep.act).toHaveLength(12);
    expect(ep.obs[0]).toHaveLength(19);
    expect(ep.act[0]).toHaveLength(8);
    // spot-check a value against the file text itself
    const firstFrame = fixture.split("\n").find((l) => l.startsWith("0 "))!;
    expect(ep.obs[0][0]).toBe(Number(firstFrame.split(" ")[1]));
  });

  it("rejects a bad magic line", async () => {
    await expect(parseEpisode("#nope v1\n")).rejects.toThrow(EpisodeFormatError);
  });

  it("rejects an unknown version", async () => {
    const text = fixture.replace("#play v1", "#play v9");
    await expect(parseEpisode(text)).rejects.toThrow(/version/);
  });

  it("rejects a truncated file", async () => {
    const lines = fixture.trimEnd().split("\n");
    const text = lines.slice(0, lines.length - 3).join("\n") + "\n";
    await expect(parseEpisode(text)).rejects.toThrow(EpisodeFormatError);
  });

  it("rejects a corrupted frame via the checksum", async () => {
    const lines = fixture.trimEnd().split("\n");
    const idx = lines.findIndex((l) => l.startsWith("3 "));
    const parts = lines[idx].split(" ");
    parts[1] = "0.999";
    lines[idx] = parts.join(" ");
    await expect(parseEpisode(lines.join("\n") + "\n")).rejects.toThrow(/checksum/);
  });
});
