/** Card and listing tiles: styled stand-ins for the image assets.
 *
 * Each tile shows the function name inside a frame colored by rarity, the
 * variant badge, and the 4-digit asset code (or the signed canonical key
 * when no code exists) so image lookup stays possible.
 */

import type { CardView, ListingView } from "./api.js";
import { cardCodeLabel, el, rarityColor } from "./format.js";

export type TileAction = {
  label: string;
  onClick: () => void;
  disabled?: boolean;
  title?: string;
};

export function renderCardTile(
  doc: Document,
  card: CardView,
  actions: TileAction[] = [],
): HTMLElement {
  const color = rarityColor(card.rarity);
  const tile = el(doc, "div", `card-tile rarity-${color}`);
  tile.dataset.tokenId = String(card.token_id);
  tile.dataset.rarity = card.rarity;

  const name = el(doc, "div", "card-name", card.display_name);
  const meta = el(doc, "div", "card-meta");
  meta.append(
    el(doc, "span", "card-rarity", `${card.rarity} · ${color}`),
    el(doc, "span", "card-variant", `v${card.variant}`),
    el(doc, "span", "card-code", cardCodeLabel(card)),
    el(doc, "span", "card-id", `#${card.token_id}`),
  );
  const owner = el(doc, "div", "card-owner", `owned by ${card.owner}`);
  tile.append(name, meta, owner);

  if (actions.length > 0) {
    const bar = el(doc, "div", "card-actions");
    for (const action of actions) {
      const button = el(doc, "button", "card-action", action.label);
      button.disabled = Boolean(action.disabled);
      if (action.title) button.title = action.title;
      button.addEventListener("click", action.onClick);
      bar.append(button);
    }
    tile.append(bar);
  }
  return tile;
}

export function renderListingTile(
  doc: Document,
  listing: ListingView,
  actions: TileAction[] = [],
): HTMLElement {
  const tile = el(doc, "div", "listing-tile");
  tile.dataset.listingId = String(listing.listing_id);
  if (listing.card) {
    tile.append(renderCardTile(doc, listing.card));
  } else {
    tile.append(el(doc, "div", "card-name", `token #${listing.token_id}`));
  }
  const info = el(doc, "div", "listing-info");
  info.append(
    el(doc, "span", "listing-price", `${listing.price} ₥`),
    el(doc, "span", "listing-seller", `seller: ${listing.seller}`),
  );
  tile.append(info);
  if (actions.length > 0) {
    const bar = el(doc, "div", "card-actions");
    for (const action of actions) {
      const button = el(doc, "button", "card-action", action.label);
      button.disabled = Boolean(action.disabled);
      button.addEventListener("click", action.onClick);
      bar.append(button);
    }
    tile.append(bar);
  }
  return tile;
}
