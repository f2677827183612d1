import { ApiClient, ApiError } from "./api";
import { initialState, popHistory, pushHistory, ViewState } from "./state";
import type { ClassSummary, ClusterInfo, FileAnnotation, FragmentInfo } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * The viewer: a class list, a source pane that shows tag chips next to clone
 * fragments, and a cluster panel listing the fragments behind a clicked tag.
 */
export class App {
  readonly state: ViewState = initialState();

  private sidebar!: HTMLElement;
  private source!: HTMLElement;
  private panel!: HTMLElement;
  private banner!: HTMLElement;
  private backButton!: HTMLButtonElement;

  constructor(private root: HTMLElement, private api: ApiClient) {
    this.buildShell();
  }

  private buildShell(): void {
    this.root.innerHTML = "";
    const header = el("header", "topbar");
    header.append(el("h1", "title", "clonetag viewer"));
    this.backButton = el("button", "back-button", "back");
    this.backButton.disabled = true;
    this.backButton.addEventListener("click", () => void this.back());
    header.append(this.backButton);
    this.banner = el("div", "banner hidden");
    const main = el("main", "layout");
    this.sidebar = el("nav", "sidebar");
    this.source = el("section", "source-pane");
    this.panel = el("aside", "cluster-panel");
    main.append(this.sidebar, this.source, this.panel);
    this.root.append(header, this.banner, main);
  }

  async init(): Promise<void> {
    const page = await this.api.listClasses();
    this.renderSidebar(page.classes);
  }

  private showError(message: string): void {
    this.state.error = message;
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
  }

  private clearError(): void {
    this.state.error = null;
    this.banner.textContent = "";
    this.banner.classList.add("hidden");
  }

  private renderSidebar(classes: ClassSummary[]): void {
    this.sidebar.innerHTML = "";
    this.sidebar.append(el("h2", "pane-title", "clone classes"));
    for (const summary of classes) {
      const item = el("button", "class-item");
      item.dataset.classId = String(summary.class_id);
      item.append(
        el("span", "class-name", `class ${summary.class_id}`),
        el("span", "class-meta", `${summary.fragment_count} fragments / k=${summary.k}`),
        el("span", "class-tags", summary.tags.join("  ")),
      );
      item.addEventListener("click", () => void this.openClass(summary.class_id));
      this.sidebar.append(item);
    }
  }

  /** Open a clone class: show its first fragment in the source pane. */
  async openClass(classId: number): Promise<void> {
    try {
      const detail = await this.api.classDetail(classId);
      this.state.selectedClass = detail;
      this.state.selectedCluster = null;
      const first = detail.fragments[0];
      if (first) {
        await this.openFile(first.file_id, { line: first.begin_line });
      }
    } catch (error) {
      this.showError(this.describe(error));
    }
  }

  /** Load a file into the source pane; on failure the pane is left as-is. */
  async openFile(fileId: number, options: { line?: number; remember?: boolean } = {}): Promise<void> {
    let detail;
    try {
      detail = await this.api.fileDetail(fileId);
    } catch (error) {
      this.showError(this.describe(error));
      return;
    }
    this.clearError();
    if (this.state.file && options.remember !== false) {
      pushHistory(this.state, {
        fileId: this.state.file.file_id,
        scrollTop: this.source.scrollTop,
      });
    }
    this.state.file = detail;
    this.renderSource();
    this.backButton.disabled = this.state.history.length === 0;
    if (options.line !== undefined) {
      this.scrollToLine(options.line);
    }
  }

  private renderSource(): void {
    const file = this.state.file;
    this.source.innerHTML = "";
    if (!file) return;
    const heading = el("h2", "pane-title", `${file.product_id}/${file.relative_path}`);
    this.source.append(heading);
    const byStartLine = new Map<number, FileAnnotation[]>();
    for (const annotation of file.fragments) {
      const list = byStartLine.get(annotation.begin_line) ?? [];
      list.push(annotation);
      byStartLine.set(annotation.begin_line, list);
    }
    const code = el("div", "code");
    const lines = file.text.split("\n");
    lines.forEach((text, i) => {
      const lineNo = i + 1;
      const annotations = byStartLine.get(lineNo);
      if (annotations) {
        // Overlapping fragments stack their chip rows in class_id order.
        for (const annotation of [...annotations].sort((a, b) => a.class_id - b.class_id)) {
          code.append(this.chipRow(annotation));
        }
      }
      const row = el("div", "line");
      row.dataset.line = String(lineNo);
      row.append(el("span", "gutter", String(lineNo)), el("span", "text", text));
      code.append(row);
    });
    this.source.append(code);
  }

  /** One chip per cluster of the fragment's clone class (k chips total). */
  private chipRow(annotation: FileAnnotation): HTMLElement {
    const row = el("div", "chip-row");
    row.dataset.classId = String(annotation.class_id);
    row.dataset.line = String(annotation.begin_line);
    row.append(el("span", "chip-label", `class ${annotation.class_id}`));
    for (const cluster of annotation.tags) {
      row.append(this.chip(cluster, cluster.index === annotation.cluster));
    }
    return row;
  }

  private chip(cluster: ClusterInfo, current: boolean): HTMLElement {
    const chip = el("button", current ? "chip current" : "chip", cluster.tag);
    chip.dataset.classId = String(cluster.class_id);
    chip.dataset.cluster = String(cluster.index);
    chip.title = `${cluster.fragment_count} fragments`;
    chip.addEventListener("click", () => void this.selectTag(cluster.class_id, cluster.index));
    return chip;
  }

  /** A tag acts as a link: list the cluster's fragments in the side panel. */
  async selectTag(classId: number, clusterIndex: number): Promise<void> {
    try {
      const [detail, cluster] = await Promise.all([
        this.api.classDetail(classId),
        this.api.clusterDetail(classId, clusterIndex),
      ]);
      this.state.selectedClass = detail;
      this.state.selectedCluster = cluster;
      this.renderClusterPanel();
    } catch (error) {
      this.showError(this.describe(error));
    }
  }

  private renderClusterPanel(): void {
    const cluster = this.state.selectedCluster;
    this.panel.innerHTML = "";
    if (!cluster) return;
    this.panel.append(
      el("h2", "pane-title", `cluster ${cluster.tag}`),
      el("p", "pane-meta", `class ${cluster.class_id} / ${cluster.fragments.length} fragments`),
    );
    const list = el("ul", "fragment-list");
    for (const fragment of cluster.fragments) {
      const item = el("li");
      const link = el("button", "fragment-link");
      link.dataset.fileId = String(fragment.file_id);
      link.dataset.line = String(fragment.begin_line);
      link.textContent = `${fragment.product_id}/${fragment.relative_path}:${fragment.begin_line}-${fragment.end_line}`;
      link.addEventListener("click", () => void this.selectFragment(fragment));
      item.append(link);
      list.append(item);
    }
    this.panel.append(list);
  }

  async selectFragment(fragment: FragmentInfo): Promise<void> {
    await this.openFile(fragment.file_id, { line: fragment.begin_line });
  }

  async back(): Promise<void> {
    const previous = popHistory(this.state);
    if (!previous) return;
    await this.openFile(previous.fileId, { remember: false });
    this.source.scrollTop = previous.scrollTop;
    this.backButton.disabled = this.state.history.length === 0;
  }

  private scrollToLine(line: number): void {
    const row = this.source.querySelector<HTMLElement>(`.line[data-line="${line}"]`);
    if (row) {
      row.classList.add("focus");
      row.scrollIntoView?.({ block: "center" });
    }
  }

  private describe(error: unknown): string {
    if (error instanceof ApiError) return `request failed: ${error.message}`;
    return error instanceof Error ? error.message : String(error);
  }
}

export function mount(root: HTMLElement, base = ""): App {
  const app = new App(root, new ApiClient(base));
  void app.init();
  return app;
}
