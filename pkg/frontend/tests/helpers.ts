import { execFileSync } from "node:child_process";
import { existsSync, mkdirSync, renameSync, rmSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/**
 * Trajectory fixtures come from the simulator CLI itself: the CSV schema
 * is the only coupling between the two packages, so the tests exercise
 * the real interface instead of a hand-maintained copy. Simulator runs
 * are bit-reproducible, which makes caching by config name safe.
 */
export function fixtureCsv(config: string): string {
  const dir = join(here, ".fixtures", config);
  const csv = join(dir, "trajectory.csv");
  if (!existsSync(csv)) {
    // test files run in parallel workers; build in a private dir, then
    // rename (fails harmlessly if another worker got there first)
    const tmp = `${dir}.tmp-${process.pid}`;
    mkdirSync(tmp, { recursive: true });
    execFileSync("wmr-pendulum", ["run", "--config", config, "--out", tmp], {
      stdio: "pipe",
    });
    try {
      renameSync(tmp, dir);
    } catch {
      rmSync(tmp, { recursive: true, force: true });
    }
  }
  return csv;
}
