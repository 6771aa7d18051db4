/** Application shell: nav bar with the five pages, login control, router.
 *
 * The shell owns no game state; it re-fetches balances for the header after
 * every mutation and hands each page a context to render from.  At most one
 * mutating request is in flight at a time: `mutate` ignores clicks while a
 * previous mutation is pending.
 */

import { ApiClient, ApiError } from "./api.js";
import { el } from "./format.js";
import { renderHome } from "./pages/home.js";
import { renderMyCards } from "./pages/mycards.js";
import { renderCombine } from "./pages/combine.js";
import { renderMarketplace } from "./pages/marketplace.js";
import { renderGame } from "./pages/game.js";

export const PAGES = ["home", "mycards", "combine", "marketplace", "game"] as const;
export type PageName = (typeof PAGES)[number];

export const PAGE_LABELS: Record<PageName, string> = {
  home: "NFTrigHome",
  mycards: "MyCards",
  combine: "CombineCards",
  marketplace: "Marketplace",
  game: "Game",
};

const SESSION_KEY = "trigcards.session";

export interface AppContext {
  doc: Document;
  api: ApiClient;
  account: string | null;
  page: PageName;
  combineSelection: number[];
  navigate(page: PageName): Promise<void>;
  refresh(): Promise<void>;
  mutate<T>(fn: () => Promise<T>): Promise<T | undefined>;
  status(message: string, kind?: "ok" | "error"): void;
}

export interface App {
  ctx: AppContext;
  login(account: string, secret: string): Promise<void>;
  register(account: string, secret: string): Promise<void>;
  logout(): void;
}

type Renderer = (ctx: AppContext, container: HTMLElement) => Promise<void>;

const RENDERERS: Record<PageName, Renderer> = {
  home: renderHome,
  mycards: renderMyCards,
  combine: renderCombine,
  marketplace: renderMarketplace,
  game: renderGame,
};

export function mount(root: HTMLElement, options: { baseUrl?: string } = {}): App {
  const doc = root.ownerDocument;
  const api = new ApiClient(options.baseUrl ?? "");
  let pending = false;

  root.textContent = "";
  const nav = el(doc, "nav", "topnav");
  const tabs = new Map<PageName, HTMLAnchorElement>();
  for (const page of PAGES) {
    const tab = el(doc, "a", "nav-tab", PAGE_LABELS[page]);
    tab.id = `nav-${page}`;
    tab.href = `#/${page}`;
    tab.addEventListener("click", (event) => {
      event.preventDefault();
      void ctx.navigate(page);
    });
    tabs.set(page, tab);
    nav.append(tab);
  }
  const headerInfo = el(doc, "div", "header-info");
  nav.append(headerInfo);
  const statusBar = el(doc, "div", "status-bar");
  statusBar.id = "status-bar";
  const container = el(doc, "main", "page");
  container.id = "page";
  root.append(nav, statusBar, container);

  function saveSession(account: string | null, token: string | null) {
    try {
      if (account && token) {
        root.ownerDocument.defaultView?.localStorage.setItem(
          SESSION_KEY,
          JSON.stringify({ account, token }),
        );
      } else {
        root.ownerDocument.defaultView?.localStorage.removeItem(SESSION_KEY);
      }
    } catch {
      // storage unavailable (private mode): sessions just don't survive reloads
    }
  }

  function loadSession(): { account: string; token: string } | null {
    try {
      const raw = root.ownerDocument.defaultView?.localStorage.getItem(SESSION_KEY);
      return raw ? JSON.parse(raw) : null;
    } catch {
      return null;
    }
  }

  const ctx: AppContext = {
    doc,
    api,
    account: null,
    page: "home",
    combineSelection: [],

    async navigate(page: PageName) {
      ctx.page = page;
      for (const [name, tab] of tabs) {
        tab.classList.toggle("active", name === page);
      }
      container.textContent = "";
      try {
        await RENDERERS[page](ctx, container);
      } catch (error) {
        container.textContent = "";
        const banner = el(doc, "div", "offline-banner");
        banner.textContent =
          error instanceof ApiError
            ? `${error.code}: ${error.message}`
            : "engine unreachable — is the server running?";
        container.append(banner);
      }
    },

    async refresh() {
      headerInfo.textContent = "";
      if (!ctx.account) {
        const form = el(doc, "span", "login-form");
        const accountInput = el(doc, "input");
        accountInput.id = "login-account";
        accountInput.placeholder = "account";
        const secretInput = el(doc, "input");
        secretInput.id = "login-secret";
        secretInput.placeholder = "secret";
        secretInput.type = "password";
        const loginButton = el(doc, "button", "login-button", "Connect");
        loginButton.id = "login-button";
        loginButton.addEventListener("click", () => {
          void app.login(accountInput.value.trim(), secretInput.value);
        });
        const registerButton = el(doc, "button", "login-button", "Register");
        registerButton.id = "register-button";
        registerButton.addEventListener("click", () => {
          void app.register(accountInput.value.trim(), secretInput.value);
        });
        form.append(accountInput, secretInput, loginButton, registerButton);
        headerInfo.append(form);
        return;
      }
      const balances = await api.balances(ctx.account);
      const badge = el(
        doc,
        "span",
        "account-badge",
        `${ctx.account} · ${balances.currency} ₥ · ${balances.xp} XP`,
      );
      badge.id = "account-badge";
      const logoutButton = el(doc, "button", "login-button", "Logout");
      logoutButton.id = "logout-button";
      logoutButton.addEventListener("click", () => app.logout());
      headerInfo.append(badge, logoutButton);
    },

    async mutate<T>(fn: () => Promise<T>): Promise<T | undefined> {
      if (pending) return undefined;
      pending = true;
      root.classList.add("busy");
      try {
        const result = await fn();
        await ctx.refresh();
        return result;
      } catch (error) {
        if (error instanceof ApiError) {
          ctx.status(`${error.code}: ${error.message}`, "error");
          return undefined;
        }
        throw error;
      } finally {
        pending = false;
        root.classList.remove("busy");
      }
    },

    status(message: string, kind: "ok" | "error" = "ok") {
      statusBar.textContent = message;
      statusBar.className = `status-bar ${kind}`;
    },
  };

  const app: App = {
    ctx,

    async login(account: string, secret: string) {
      try {
        await api.login(account, secret);
        ctx.account = account;
        saveSession(account, api.token);
        ctx.status(`connected as ${account}`);
        await ctx.refresh();
        await ctx.navigate(ctx.page);
      } catch (error) {
        if (error instanceof ApiError) {
          ctx.status(`${error.code}: ${error.message}`, "error");
          return;
        }
        throw error;
      }
    },

    async register(account: string, secret: string) {
      try {
        await api.register(account, secret);
        ctx.status(`account ${account} created — connecting`);
      } catch (error) {
        if (error instanceof ApiError) {
          ctx.status(`${error.code}: ${error.message}`, "error");
          return;
        }
        throw error;
      }
      await app.login(account, secret);
    },

    logout() {
      ctx.account = null;
      api.token = null;
      ctx.combineSelection = [];
      saveSession(null, null);
      void ctx.refresh();
      void ctx.navigate("home");
    },
  };

  const saved = loadSession();
  if (saved) {
    ctx.account = saved.account;
    api.token = saved.token;
  }
  void ctx.refresh();
  void ctx.navigate("home");
  return app;
}
