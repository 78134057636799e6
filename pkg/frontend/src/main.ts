import { ReviewApi } from "./api.js";
import { Store } from "./store.js";
import { mountApp } from "./ui.js";

const store = new Store(new ReviewApi(""));
mountApp(document.getElementById("app") as HTMLElement, store);
void store.refresh();
store.startPolling();
