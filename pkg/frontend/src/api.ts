import type { ClassDetail, ClassPage, ClusterDetail, FileDetail, Stats } from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed client for the read-only report service. */
export class ApiClient {
  constructor(private base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.error === "string") detail = body.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listClasses(page = 1, pageSize = 100): Promise<ClassPage> {
    return this.get(`/api/classes?page=${page}&page_size=${pageSize}`);
  }

  classDetail(classId: number): Promise<ClassDetail> {
    return this.get(`/api/classes/${classId}`);
  }

  clusterDetail(classId: number, index: number): Promise<ClusterDetail> {
    return this.get(`/api/clusters/${classId}/${index}`);
  }

  fileDetail(fileId: number): Promise<FileDetail> {
    return this.get(`/api/files/${fileId}`);
  }

  stats(): Promise<Stats> {
    return this.get(`/api/stats`);
  }
}
