/** Landing page: what the game is, plus a liveness probe of the engine. */

import type { AppContext } from "../app.js";
import { el } from "../format.js";

export async function renderHome(ctx: AppContext, container: HTMLElement): Promise<void> {
  const doc = ctx.doc;
  // reachability probe; navigate() turns a failure into the offline banner
  const listings = await ctx.api.listings("active");

  const hero = el(doc, "section", "hero");
  hero.append(
    el(doc, "h1", undefined, "Trig function trading cards"),
    el(
      doc,
      "p",
      "hero-text",
      "Collect cards of sin and cos powers, multiply or divide two of them to mint " +
        "a brand-new card, trade on the marketplace, and answer trigonometry trivia " +
        "to earn XP you can spend on packs and upgrades.",
    ),
  );

  const steps = el(doc, "ol", "getting-started");
  for (const step of [
    "Register or connect with your account name and secret (top right).",
    "Open MyCards and buy a starter pack.",
    "Pick two cards on CombineCards and preview the rarity odds before you commit.",
    "List spare cards on the Marketplace, or pick up bargains from other players.",
    "Play the Game tab to earn XP — every question pays out only once.",
  ]) {
    steps.append(el(doc, "li", undefined, step));
  }
  hero.append(steps);

  const stats = el(doc, "p", "home-stats");
  stats.id = "home-stats";
  stats.textContent =
    listings.length === 0
      ? "The marketplace is empty right now — be the first to list a card."
      : `${listings.length} card${listings.length === 1 ? "" : "s"} on sale in the marketplace right now.`;
  hero.append(stats);
  container.append(hero);
}
