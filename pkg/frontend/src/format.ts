/** Small pure helpers shared by the pages. */

export const RARITY_COLORS: Record<string, string> = {
  common: "green",
  uncommon: "blue",
  rare: "purple",
  legendary: "red",
};

export const RARITY_CSS: Record<string, string> = {
  green: "#2e8b57",
  blue: "#2f6fd6",
  purple: "#8a2be2",
  red: "#d6402f",
};

/** Probability as a percentage with one decimal, e.g. 0.24 -> "24.0%". */
export function percent(probability: number): string {
  return `${(probability * 100).toFixed(1)}%`;
}

export function rarityColor(rarity: string): string {
  return RARITY_COLORS[rarity] ?? "green";
}

/** The asset code when one exists, otherwise the signed canonical key. */
export function cardCodeLabel(card: { code: string | null; canonical_key: string }): string {
  return card.code ?? card.canonical_key;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
