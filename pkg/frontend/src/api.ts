/** Typed client for the trigcards HTTP API.
 *
 * Every figure the UI shows comes back from one of these calls; the client
 * never derives balances or ownership locally.
 */

export type CardView = {
  token_id: number;
  sin_pow: number;
  cos_pow: number;
  display_name: string;
  rarity: string;
  rarity_level: number;
  color: string;
  variant: number;
  code: string | null;
  canonical_key: string;
  owner: string;
  minted_at: number;
};

export type AccountBalances = { currency: number; xp: number };

export type PreviewOutcome = {
  rarity: string;
  rarity_level: number;
  color: string;
  probability: number;
  display_name: string;
  codes: string[] | null;
};

export type CombinePreview = {
  op: string;
  token_a: CardView;
  token_b: CardView;
  possible: boolean;
  reason?: string;
  message?: string;
  result?: { sin_pow: number; cos_pow: number; display_name: string };
  distribution?: number[];
  outcomes?: PreviewOutcome[];
};

export type ListingView = {
  listing_id: number;
  token_id: number;
  seller: string;
  price: number;
  status: string;
  card: CardView | null;
};

export type SaleRecord = {
  listing_id: number;
  token_id: number;
  seller: string;
  buyer: string;
  price: number;
  fee_paid: number;
  seq: number;
};

export type Question = {
  qid: string;
  prompt: string;
  choices: string[];
  difficulty: string;
  xp_reward: number;
};

export type AnswerResult = {
  seq: number;
  correct: boolean;
  xp_awarded: number;
  new_xp: number;
};

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  token: string | null = null;

  constructor(public baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown, auth = false): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (auth) {
      if (!this.token) throw new ApiError(401, "NotLoggedIn", "log in first");
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let data: any = null;
    if (text) {
      try {
        data = JSON.parse(text);
      } catch {
        throw new ApiError(response.status, "BadResponse", text.slice(0, 200));
      }
    }
    if (!response.ok) {
      throw new ApiError(
        response.status,
        data?.code ?? "HttpError",
        data?.message ?? response.statusText,
      );
    }
    return data as T;
  }

  register(account: string, secret: string) {
    return this.request<{ seq: number; account: string }>("POST", "/api/accounts", {
      account,
      secret,
    });
  }

  async login(account: string, secret: string): Promise<string> {
    const session = await this.request<{ token: string; expires_at: number }>(
      "POST",
      "/api/session/login",
      { account, secret },
    );
    this.token = session.token;
    return session.token;
  }

  balances(account: string) {
    return this.request<AccountBalances>("GET", `/api/accounts/${account}`);
  }

  cards(account: string) {
    return this.request<CardView[]>("GET", `/api/accounts/${account}/cards`);
  }

  previewCombine(a: number, b: number, op: string) {
    return this.request<CombinePreview>("GET", `/api/combine/preview?a=${a}&b=${b}&op=${op}`);
  }

  combine(tokenA: number, tokenB: number, op: string) {
    return this.request<{ seq: number; new_token: CardView; burned: number[] }>(
      "POST",
      "/api/combine",
      { token_a: tokenA, token_b: tokenB, op },
      true,
    );
  }

  buyPack(payWith: "currency" | "xp") {
    return this.request<{ seq: number; tokens: CardView[] }>(
      "POST",
      "/api/packs/purchase",
      { pay_with: payWith },
      true,
    );
  }

  upgradeCard(tokenId: number) {
    return this.request<{ seq: number; new_token: CardView }>(
      "POST",
      `/api/tokens/${tokenId}/upgrade`,
      {},
      true,
    );
  }

  listings(status = "active") {
    return this.request<ListingView[]>("GET", `/api/marketplace/listings?status=${status}`);
  }

  createListing(tokenId: number, price: number) {
    return this.request<{ seq: number; listing_id: number }>(
      "POST",
      "/api/marketplace/listings",
      { token_id: tokenId, price },
      true,
    );
  }

  purchaseListing(listingId: number) {
    return this.request<{ seq: number; sale_record: SaleRecord }>(
      "POST",
      `/api/marketplace/listings/${listingId}/purchase`,
      {},
      true,
    );
  }

  cancelListing(listingId: number) {
    return this.request<{ seq: number }>(
      "POST",
      `/api/marketplace/listings/${listingId}/cancel`,
      {},
      true,
    );
  }

  saleHistory(filter: { token_id?: number; account?: string } = {}) {
    const params = new URLSearchParams();
    if (filter.token_id !== undefined) params.set("token_id", String(filter.token_id));
    if (filter.account !== undefined) params.set("account", filter.account);
    const suffix = params.toString() ? `?${params}` : "";
    return this.request<SaleRecord[]>("GET", `/api/marketplace/history${suffix}`);
  }

  nextQuestion() {
    return this.request<Question>("GET", "/api/trivia/next", undefined, true);
  }

  answerQuestion(qid: string, choiceIndex: number) {
    return this.request<AnswerResult>(
      "POST",
      "/api/trivia/answer",
      { qid, choice_index: choiceIndex },
      true,
    );
  }
}
