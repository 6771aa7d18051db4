/** Wallet view: every card the connected account owns, with actions. */

import type { AppContext } from "../app.js";
import { el } from "../format.js";
import { renderCardTile, type TileAction } from "../tiles.js";

export async function renderMyCards(ctx: AppContext, container: HTMLElement): Promise<void> {
  const doc = ctx.doc;
  if (!ctx.account) {
    container.append(
      el(doc, "div", "login-required", "Connect your account (top right) to see your cards."),
    );
    return;
  }
  const account = ctx.account;

  const toolbar = el(doc, "div", "toolbar");
  const buyButton = el(doc, "button", "primary", "Buy pack (100 ₥)");
  buyButton.id = "buy-pack-currency";
  buyButton.addEventListener("click", () => {
    void ctx.mutate(() => ctx.api.buyPack("currency")).then((result) => {
      if (result) {
        ctx.status(`pack opened: ${result.tokens.map((t) => t.display_name).join(", ")}`);
        void ctx.navigate("mycards");
      }
    });
  });
  const buyXpButton = el(doc, "button", "primary", "Buy pack (100 XP)");
  buyXpButton.id = "buy-pack-xp";
  buyXpButton.addEventListener("click", () => {
    void ctx.mutate(() => ctx.api.buyPack("xp")).then((result) => {
      if (result) {
        ctx.status(`pack opened with XP: ${result.tokens.map((t) => t.display_name).join(", ")}`);
        void ctx.navigate("mycards");
      }
    });
  });
  toolbar.append(buyButton, buyXpButton);
  container.append(toolbar);

  const cards = await ctx.api.cards(account);
  const grid = el(doc, "div", "card-grid");
  grid.id = "my-cards-grid";
  if (cards.length === 0) {
    container.append(
      el(doc, "div", "empty-state", "No cards yet — buy a pack to get started."),
    );
  }

  for (const card of cards) {
    const selected = ctx.combineSelection.includes(card.token_id);
    const actions: TileAction[] = [
      {
        label: selected ? "Selected ✓" : "Combine",
        disabled: selected,
        onClick: () => {
          if (!ctx.combineSelection.includes(card.token_id)) {
            ctx.combineSelection = [...ctx.combineSelection.slice(-1), card.token_id];
          }
          if (ctx.combineSelection.length >= 2) {
            void ctx.navigate("combine");
          } else {
            ctx.status(`${card.display_name} selected — pick a second card to combine`);
            void ctx.navigate("mycards");
          }
        },
      },
      {
        label: "Sell",
        onClick: () => {
          const bar = tile.querySelector(".card-actions");
          if (!bar || bar.querySelector(".sell-form")) return;
          const form = el(doc, "span", "sell-form");
          const priceInput = el(doc, "input", "price-input");
          priceInput.type = "number";
          priceInput.min = "1";
          priceInput.value = "100";
          priceInput.setAttribute("aria-label", "price");
          const confirm = el(doc, "button", "card-action", "List it");
          confirm.addEventListener("click", () => {
            const price = Number(priceInput.value);
            void ctx
              .mutate(() => ctx.api.createListing(card.token_id, price))
              .then((result) => {
                if (result) {
                  ctx.status(`listed ${card.display_name} at ${price} ₥`);
                  void ctx.navigate("mycards");
                }
              });
          });
          form.append(priceInput, confirm);
          bar.append(form);
        },
      },
      {
        label: "Upgrade",
        disabled: card.rarity === "legendary",
        title:
          card.rarity === "legendary"
            ? "already at max rarity"
            : `costs ${100 * (card.rarity_level + 1)} XP`,
        onClick: () => {
          void ctx.mutate(() => ctx.api.upgradeCard(card.token_id)).then((result) => {
            if (result) {
              ctx.status(`upgraded to ${result.new_token.rarity}`);
              void ctx.navigate("mycards");
            }
          });
        },
      },
    ];
    const tile = renderCardTile(doc, card, actions);
    grid.append(tile);
  }
  container.append(grid);
}
