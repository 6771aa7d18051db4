/** Marketplace: every active listing, buying, cancelling, per-card history. */

import type { AppContext } from "../app.js";
import { el } from "../format.js";
import { renderListingTile, type TileAction } from "../tiles.js";

export async function renderMarketplace(ctx: AppContext, container: HTMLElement): Promise<void> {
  const doc = ctx.doc;
  const listings = await ctx.api.listings("active");

  container.append(el(doc, "h2", undefined, "Marketplace"));
  if (listings.length === 0) {
    container.append(el(doc, "div", "empty-state", "Nothing for sale right now."));
    return;
  }
  const grid = el(doc, "div", "card-grid");
  grid.id = "marketplace-grid";

  for (const listing of listings) {
    const mine = ctx.account !== null && listing.seller === ctx.account;
    const actions: TileAction[] = [];
    if (mine) {
      actions.push({
        label: "Cancel listing",
        onClick: () => {
          void ctx.mutate(() => ctx.api.cancelListing(listing.listing_id)).then((result) => {
            if (result) {
              ctx.status(`listing #${listing.listing_id} cancelled, card returned`);
              void ctx.navigate("marketplace");
            }
          });
        },
      });
    } else {
      actions.push({
        label: `Buy for ${listing.price} ₥`,
        disabled: ctx.account === null,
        title: ctx.account === null ? "connect to buy" : undefined,
        onClick: () => {
          void ctx.mutate(() => ctx.api.purchaseListing(listing.listing_id)).then((result) => {
            if (result) {
              const sale = result.sale_record;
              ctx.status(
                `bought token #${sale.token_id} for ${sale.price} ₥ (fee ${sale.fee_paid})`,
              );
              void ctx.navigate("marketplace");
            }
          });
        },
      });
    }
    actions.push({
      label: "History",
      onClick: () => {
        void (async () => {
          const records = await ctx.api.saleHistory({ token_id: listing.token_id });
          const existing = tile.querySelector(".history-drawer");
          if (existing) {
            existing.remove();
            return;
          }
          const drawer = el(doc, "div", "history-drawer");
          if (records.length === 0) {
            drawer.append(el(doc, "div", "history-row", "no past sales for this card"));
          }
          for (const record of records) {
            drawer.append(
              el(
                doc,
                "div",
                "history-row",
                `${record.seller} → ${record.buyer} for ${record.price} ₥ (fee ${record.fee_paid})`,
              ),
            );
          }
          tile.append(drawer);
        })();
      },
    });
    const tile = renderListingTile(doc, listing, actions);
    grid.append(tile);
  }
  container.append(grid);
}
