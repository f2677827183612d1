// Payload shapes of the report service API (mirrors the service's pydantic
// response models).

export interface ClusterInfo {
  index: number;
  tag: string;
  kind: string | null;
  text: string | null;
  channel: string | null;
  fragment_count: number;
  class_id: number;
}

export interface FragmentInfo {
  file_id: number;
  begin_line: number;
  end_line: number;
  role: string;
  cluster: number;
  class_id: number;
  product_id: string;
  relative_path: string;
  basename: string;
}

export interface ClassSummary {
  class_id: number;
  k: number;
  silhouette: number | null;
  fragment_count: number;
  tags: string[];
}

export interface ClassPage {
  total: number;
  page: number;
  page_size: number;
  classes: ClassSummary[];
}

export interface ClassDetail {
  class_id: number;
  k: number;
  silhouette: number | null;
  fragments: FragmentInfo[];
  clusters: ClusterInfo[];
}

export interface FileAnnotation {
  begin_line: number;
  end_line: number;
  class_id: number;
  cluster: number;
  tags: ClusterInfo[];
}

export interface FileDetail {
  file_id: number;
  product_id: string;
  relative_path: string;
  basename: string;
  line_count: number;
  text: string;
  fragments: FileAnnotation[];
}

export interface ClusterDetail {
  class_id: number;
  index: number;
  tag: string;
  fragments: FragmentInfo[];
}

export interface StatBlock {
  max: number | null;
  min: number | null;
  mean: number | null;
}

export interface Stats {
  class_count: number;
  file_count: number;
  product_count: number;
  fragments_per_class: StatBlock;
  clusters_per_class: StatBlock;
  timeouts: string[];
}
