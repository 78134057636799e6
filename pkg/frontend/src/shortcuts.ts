// Keyboard shortcut map. a/r/e decide the selected row; j/k and arrows move;
// [ ] flip pages. Shortcuts are inert while a form field has focus.

export type ShortcutAction =
  | { kind: "decide"; action: "accept" | "reject" }
  | { kind: "edit" }
  | { kind: "move"; delta: 1 | -1 }
  | { kind: "page"; delta: 1 | -1 }
  | { kind: "cancel" };

export function shortcutFor(key: string): ShortcutAction | null {
  switch (key) {
    case "a":
      return { kind: "decide", action: "accept" };
    case "r":
      return { kind: "decide", action: "reject" };
    case "e":
      return { kind: "edit" };
    case "j":
    case "ArrowDown":
      return { kind: "move", delta: 1 };
    case "k":
    case "ArrowUp":
      return { kind: "move", delta: -1 };
    case "]":
      return { kind: "page", delta: 1 };
    case "[":
      return { kind: "page", delta: -1 };
    case "Escape":
      return { kind: "cancel" };
    default:
      return null;
  }
}

export function isEditableTarget(target: EventTarget | null): boolean {
  if (!target || !(target as HTMLElement).tagName) return false;
  const tag = (target as HTMLElement).tagName.toLowerCase();
  return tag === "input" || tag === "textarea" || tag === "select";
}
