//! Text formats: labeling JSON, grid and CSV renderings, edge lists and DOT.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::AdmissibilityCertificate;
use crate::graph::{BundleSpec, Graph, GraphError, ProductKind};
use crate::labeling::{Labeling, LabelingError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed labeling JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("labeling has {labels} labels but the bundle has {vertices} vertices")]
    LengthMismatch { labels: usize, vertices: usize },
}

/// Self-describing labeling file: the bundle, the separation and the labels in
/// flat vertex order (`index = i * n + j`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingFile {
    pub kind: ProductKind,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub d: u32,
    pub labels: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<AdmissibilityCertificate>,
}

impl LabelingFile {
    pub fn new(spec: &BundleSpec, labeling: &Labeling) -> Self {
        LabelingFile {
            kind: spec.kind,
            m: spec.m,
            n: spec.n,
            ell: spec.ell,
            d: labeling.d,
            labels: labeling.labels.clone(),
            certificate: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("labeling file serializes")
    }

    /// Validates the embedded bundle and label count.
    pub fn into_parts(self) -> Result<(BundleSpec, Labeling), FormatError> {
        let spec = BundleSpec::new(self.kind, self.m, self.n, self.ell)?;
        if self.labels.len() != spec.vertex_count() {
            return Err(FormatError::LengthMismatch {
                labels: self.labels.len(),
                vertices: spec.vertex_count(),
            });
        }
        Ok((spec, Labeling::new(self.d, self.labels)?))
    }
}

/// One row per base index `i`, one right-aligned column per fibre index `j`.
pub fn to_grid(spec: &BundleSpec, labeling: &Labeling) -> String {
    let width = labeling
        .labels
        .iter()
        .map(|x| x.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for row in labeling.labels.chunks(spec.n) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// `m` lines of `n` comma-separated labels.
pub fn to_csv(spec: &BundleSpec, labeling: &Labeling) -> String {
    let mut out = String::new();
    for row in labeling.labels.chunks(spec.n) {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One `u v` line per edge with `u < v`, lexicographically sorted.
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Undirected DOT; node ids are flat indices labeled with their `i,j` coordinates.
pub fn to_dot(graph: &Graph, spec: &BundleSpec) -> String {
    let mut out = String::from("graph bundle {\n");
    for v in 0..graph.vertex_count() {
        let c = spec.coord(v);
        writeln!(out, "  {v} [label=\"{},{}\"];", c.i, c.j).unwrap();
    }
    for (u, v) in graph.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_bundle, cycle};

    fn spec() -> BundleSpec {
        BundleSpec::new(ProductKind::Direct, 3, 5, 1).unwrap()
    }

    #[test]
    fn json_round_trip_and_schema() {
        let lab = Labeling::new(1, (0..15).map(|x| x % 5).collect()).unwrap();
        let file = LabelingFile::new(&spec(), &lab);
        let text = file.to_json();
        assert!(text.starts_with(r#"{"kind":"direct","m":3,"n":5,"ell":1,"d":1,"labels":[0,1,2"#));
        let (s, l) = LabelingFile::from_json(&text).unwrap().into_parts().unwrap();
        assert_eq!((s, l), (spec(), lab));
    }

    #[test]
    fn json_rejects_bad_content() {
        assert!(LabelingFile::from_json("{").is_err());
        let short = r#"{"kind":"direct","m":3,"n":5,"ell":1,"d":1,"labels":[0,1]}"#;
        assert!(matches!(
            LabelingFile::from_json(short).unwrap().into_parts(),
            Err(FormatError::LengthMismatch { labels: 2, vertices: 15 })
        ));
        let bad_ell = r#"{"kind":"direct","m":3,"n":5,"ell":5,"d":1,"labels":[]}"#;
        assert!(matches!(
            LabelingFile::from_json(bad_ell).unwrap().into_parts(),
            Err(FormatError::Graph(_))
        ));
        let bad_kind = r#"{"kind":"strong","m":3,"n":5,"ell":0,"d":1,"labels":[]}"#;
        assert!(LabelingFile::from_json(bad_kind).is_err());
    }

    #[test]
    fn grid_and_csv() {
        let s = BundleSpec::new(ProductKind::Direct, 3, 3, 0).unwrap();
        let lab = Labeling::new(1, vec![0, 1, 2, 3, 4, 5, 6, 7, 10]).unwrap();
        assert_eq!(to_grid(&s, &lab), " 0  1  2\n 3  4  5\n 6  7 10\n");
        assert_eq!(to_csv(&s, &lab), "0,1,2\n3,4,5\n6,7,10\n");
    }

    #[test]
    fn edge_list_and_dot() {
        assert_eq!(to_edge_list(&cycle(3).unwrap()), "0 1\n0 2\n1 2\n");
        let g = build_bundle(&spec()).unwrap();
        let dot = to_dot(&g, &spec());
        assert!(dot.starts_with("graph bundle {\n  0 [label=\"0,0\"];\n"));
        assert!(dot.contains("  14 [label=\"2,4\"];\n"));
        assert_eq!(dot.matches(" -- ").count(), 30);
        let text = to_edge_list(&g);
        let lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort_by_key(|l| {
            let mut it = l.split(' ').map(|x| x.parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        });
        assert_eq!(lines, sorted);
    }
}
