/** Combine workbench: chosen cards on the left, possible results on the right. */

import type { CombinePreview } from "../api.js";
import type { AppContext } from "../app.js";
import { el, percent } from "../format.js";
import { renderCardTile } from "../tiles.js";

export async function renderCombine(ctx: AppContext, container: HTMLElement): Promise<void> {
  const doc = ctx.doc;
  if (!ctx.account) {
    container.append(
      el(doc, "div", "login-required", "Connect your account (top right) to combine cards."),
    );
    return;
  }

  const cards = await ctx.api.cards(ctx.account);
  if (cards.length < 2) {
    container.append(
      el(doc, "div", "empty-state", "You need at least two cards in your wallet to combine."),
    );
    return;
  }

  let op: "multiply" | "divide" = "divide";
  const valid = new Set(cards.map((c) => c.token_id));
  ctx.combineSelection = ctx.combineSelection.filter((id) => valid.has(id));
  let [slotA, slotB] = [
    ctx.combineSelection[0] ?? cards[0].token_id,
    ctx.combineSelection[1] ?? cards.find((c) => c.token_id !== (ctx.combineSelection[0] ?? cards[0].token_id))!.token_id,
  ];

  const layout = el(doc, "div", "combine-layout");
  const left = el(doc, "div", "combine-left");
  const right = el(doc, "div", "combine-right");
  right.id = "combine-preview";
  layout.append(left, right);
  container.append(layout);

  function slotSelect(id: string, value: number, onChange: (tokenId: number) => void) {
    const select = el(doc, "select", "slot-select");
    select.id = id;
    for (const card of cards) {
      const option = el(doc, "option", undefined, `#${card.token_id} ${card.display_name} (${card.rarity})`);
      option.value = String(card.token_id);
      select.append(option);
    }
    select.value = String(value);
    select.addEventListener("change", () => onChange(Number(select.value)));
    return select;
  }

  const opToggle = el(doc, "div", "op-toggle");
  const multiplyButton = el(doc, "button", "op-button", "×");
  multiplyButton.id = "op-multiply";
  const divideButton = el(doc, "button", "op-button", "÷");
  divideButton.id = "op-divide";
  opToggle.append(multiplyButton, divideButton);

  const slots = el(doc, "div", "combine-slots");
  const slotTiles = el(doc, "div", "combine-slot-tiles");
  slotTiles.id = "combine-slot-tiles";
  slots.append(
    slotSelect("slot-a", slotA, (v) => {
      slotA = v;
      void updatePreview();
    }),
    opToggle,
    slotSelect("slot-b", slotB, (v) => {
      slotB = v;
      void updatePreview();
    }),
  );
  const confirmButton = el(doc, "button", "primary", "Combine!");
  confirmButton.id = "combine-confirm";
  left.append(slots, slotTiles, confirmButton);

  function renderOpButtons() {
    multiplyButton.classList.toggle("active", op === "multiply");
    divideButton.classList.toggle("active", op === "divide");
  }
  multiplyButton.addEventListener("click", () => {
    op = "multiply";
    renderOpButtons();
    void updatePreview();
  });
  divideButton.addEventListener("click", () => {
    op = "divide";
    renderOpButtons();
    void updatePreview();
  });

  // updates race when the user flips slots quickly; only the newest wins
  let previewEpoch = 0;

  async function updatePreview(): Promise<void> {
    renderOpButtons();
    slotTiles.textContent = "";
    const cardA = cards.find((c) => c.token_id === slotA);
    const cardB = cards.find((c) => c.token_id === slotB);
    if (cardA) slotTiles.append(renderCardTile(doc, cardA));
    if (cardB) slotTiles.append(renderCardTile(doc, cardB));

    const epoch = ++previewEpoch;
    if (slotA === slotB) {
      right.textContent = "";
      right.append(el(doc, "div", "impossible", "Pick two different cards."));
      confirmButton.disabled = true;
      return;
    }
    let preview: CombinePreview;
    try {
      preview = await ctx.api.previewCombine(slotA, slotB, op);
    } catch {
      if (epoch !== previewEpoch) return;
      right.textContent = "";
      right.append(el(doc, "div", "impossible", "preview unavailable"));
      confirmButton.disabled = true;
      return;
    }
    if (epoch !== previewEpoch) return;
    right.textContent = "";
    if (!preview.possible) {
      right.append(
        el(
          doc,
          "div",
          "impossible",
          `Impossible combine: the result would leave the playable exponent range (${preview.reason}).`,
        ),
      );
      confirmButton.disabled = true;
      return;
    }
    confirmButton.disabled = false;
    right.append(el(doc, "h3", undefined, `Result: ${preview.result!.display_name}`));
    const table = el(doc, "table", "preview-table");
    const head = el(doc, "tr");
    head.append(el(doc, "th", undefined, "rarity"), el(doc, "th", undefined, "chance"));
    table.append(head);
    for (const outcome of preview.outcomes!) {
      const row = el(doc, "tr", `preview-row rarity-${outcome.color}`);
      const label = el(doc, "td", "preview-rarity", `${outcome.rarity} (${outcome.color})`);
      const chance = el(doc, "td", "preview-chance", percent(outcome.probability));
      row.append(label, chance);
      table.append(row);
    }
    right.append(table);
  }

  confirmButton.addEventListener("click", () => {
    void ctx
      .mutate(() => ctx.api.combine(slotA, slotB, op))
      .then((result) => {
        if (result) {
          ctx.combineSelection = [];
          ctx.status(
            `combined! burned #${result.burned[0]} and #${result.burned[1]}, ` +
              `minted ${result.new_token.display_name} (${result.new_token.rarity})`,
          );
          void ctx.navigate("mycards");
        }
      });
  });

  await updatePreview();
}
