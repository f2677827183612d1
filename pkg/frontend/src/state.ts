import type { ClassDetail, ClusterDetail, FileDetail } from "./types";

export interface HistoryEntry {
  fileId: number;
  scrollTop: number;
}

/**
 * What the viewer currently shows.  Invariants kept by the app:
 * selectedCluster always belongs to selectedClass, and every rendered chip
 * corresponds to a cluster of its clone class in the API payload.
 */
export interface ViewState {
  file: FileDetail | null;
  selectedClass: ClassDetail | null;
  selectedCluster: ClusterDetail | null;
  history: HistoryEntry[];
  error: string | null;
}

export function initialState(): ViewState {
  return {
    file: null,
    selectedClass: null,
    selectedCluster: null,
    history: [],
    error: null,
  };
}

export function pushHistory(state: ViewState, entry: HistoryEntry, limit = 100): void {
  state.history.push(entry);
  if (state.history.length > limit) {
    state.history.shift();
  }
}

export function popHistory(state: ViewState): HistoryEntry | null {
  return state.history.pop() ?? null;
}
