/** Browser entry point: mount the app on #app against the same-origin API. */

import { mount } from "./app.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
mount(root, { baseUrl: "" });
