//! Complete symmetric instances with exact costs, plus their file formats.
//!
//! The canonical format is JSON:
//!
//! ```json
//! {"n": 3, "costs": [[1,1], [1,1], [3,2]]}
//! ```
//!
//! `costs` lists `[numerator, denominator]` pairs for the upper triangle in
//! row-major order: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`. Components are
//! JSON integers, or decimal strings when they exceed 64 bits.
//!
//! A TSPLIB subset is also accepted: `EDGE_WEIGHT_TYPE: EXPLICIT` with
//! `FULL_MATRIX`, `UPPER_ROW`, `UPPER_DIAG_ROW`, `LOWER_ROW` or
//! `LOWER_DIAG_ROW`, and `EDGE_WEIGHT_TYPE: EUC_2D` (distances rounded to the
//! nearest integer as TSPLIB prescribes, then treated as exact).

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::MultiGraph;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Index of edge `{i, j}` in the row-major upper triangle of `n` vertices.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i != j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All `(i, j)` with `i < j` in edge-index order.
pub fn edge_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricInstance {
    n: usize,
    costs: Vec<Rat>,
    endpoints: Vec<(usize, usize)>,
    metric: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    n: usize,
    #[serde(with = "rat::pair::vec")]
    costs: Vec<Rat>,
}

impl MetricInstance {
    /// Builds an instance from upper-triangle costs. Costs must be positive;
    /// the metric flag is computed by a full triple scan.
    pub fn new(n: usize, costs: Vec<Rat>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!("need at least 2 vertices, got {n}")));
        }
        let expected = n * (n - 1) / 2;
        if costs.len() != expected {
            return Err(Error::Validation(format!(
                "expected {expected} upper-triangle costs for n={n}, got {}",
                costs.len()
            )));
        }
        let endpoints = edge_list(n);
        if let Some(k) = costs.iter().position(|c| !c.is_positive()) {
            let (i, j) = endpoints[k];
            return Err(Error::Validation(format!(
                "cost({i},{j}) = {} is not positive",
                rat::fmt_rat(&costs[k])
            )));
        }
        let mut inst = MetricInstance { n, costs, endpoints, metric: false };
        inst.metric = inst.triangle_violations().is_empty();
        Ok(inst)
    }

    pub fn from_fn(n: usize, mut cost: impl FnMut(usize, usize) -> Rat) -> Result<Self> {
        let costs = edge_list(n).into_iter().map(|(i, j)| cost(i, j)).collect();
        Self::new(n, costs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.costs.len()
    }

    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn cost(&self, i: usize, j: usize) -> &Rat {
        &self.costs[edge_index(self.n, i, j)]
    }

    pub fn edge_cost(&self, e: usize) -> &Rat {
        &self.costs[e]
    }

    pub fn costs(&self) -> &[Rat] {
        &self.costs
    }

    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        edge_index(self.n, i, j)
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    /// The complete graph as a [`MultiGraph`]; edge ids equal edge indices.
    pub fn to_graph(&self) -> MultiGraph {
        let mut g = MultiGraph::new(self.n);
        for (k, &(i, j)) in self.endpoints.iter().enumerate() {
            g.add_edge(i, j, self.costs[k].clone());
        }
        g
    }

    /// Every `(i, k, j)` with `i < j`, `k ∉ {i, j}` and
    /// `cost(i,j) > cost(i,k) + cost(k,j)`, in lexicographic order.
    pub fn triangle_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(i, j) in &self.endpoints {
            let direct = self.cost(i, j);
            for k in 0..self.n {
                if k == i || k == j {
                    continue;
                }
                if *direct > self.cost(i, k) + self.cost(k, j) {
                    out.push((i, k, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonInstance { n: self.n, costs: self.costs.clone() };
        serde_json::to_string(&doc).expect("instance serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Returns every violating triple; empty iff the instance is metric.
pub fn check_triangle_inequality(inst: &MetricInstance) -> Vec<(usize, usize, usize)> {
    inst.triangle_violations()
}

/// Parses either the JSON format or the TSPLIB subset, sniffing by the first
/// non-blank character.
pub fn parse_instance(text: &str) -> Result<MetricInstance> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_tsplib(text)
    }
}

fn parse_json(text: &str) -> Result<MetricInstance> {
    let doc: JsonInstance = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    MetricInstance::new(doc.n, doc.costs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum WeightFormat {
    Full,
    UpperRow,
    UpperDiagRow,
    LowerRow,
    LowerDiagRow,
}

fn parse_tsplib(text: &str) -> Result<MetricInstance> {
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut format: Option<WeightFormat> = None;
    let mut lines = text.lines().enumerate().peekable();
    let mut section: Option<(usize, String)> = None;

    for (ln, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if line.ends_with("_SECTION") {
            section = Some((ln + 1, line.to_string()));
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(Error::Parse { line: ln + 1, message: format!("expected `KEY : VALUE`, got `{line}`") });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "DIMENSION" => {
                dimension = Some(value.parse().map_err(|_| Error::Parse {
                    line: ln + 1,
                    message: format!("DIMENSION `{value}` is not an integer"),
                })?)
            }
            "EDGE_WEIGHT_TYPE" => weight_type = Some(value.to_string()),
            "EDGE_WEIGHT_FORMAT" => {
                format = Some(match value {
                    "FULL_MATRIX" => WeightFormat::Full,
                    "UPPER_ROW" => WeightFormat::UpperRow,
                    "UPPER_DIAG_ROW" => WeightFormat::UpperDiagRow,
                    "LOWER_ROW" => WeightFormat::LowerRow,
                    "LOWER_DIAG_ROW" => WeightFormat::LowerDiagRow,
                    other => {
                        return Err(Error::Parse {
                            line: ln + 1,
                            message: format!("unsupported EDGE_WEIGHT_FORMAT `{other}`"),
                        })
                    }
                })
            }
            "TYPE"
                if value != "TSP" => {
                    return Err(Error::Parse { line: ln + 1, message: format!("unsupported TYPE `{value}`") });
                }
            _ => {}
        }
    }

    let n = dimension.ok_or(Error::Parse { line: 0, message: "missing DIMENSION".into() })?;
    let (start_line, section) =
        section.ok_or(Error::Parse { line: 0, message: "missing data section".into() })?;
    let body: Vec<(usize, &str)> = lines
        .take_while(|(_, l)| l.trim() != "EOF" && !l.trim().ends_with("_SECTION"))
        .flat_map(|(ln, l)| l.split_whitespace().map(move |tok| (ln + 1, tok)))
        .collect();

    match (weight_type.as_deref(), section.as_str()) {
        (Some("EXPLICIT"), "EDGE_WEIGHT_SECTION") => {
            let format = format.ok_or(Error::Parse { line: start_line, message: "missing EDGE_WEIGHT_FORMAT".into() })?;
            let mut values = Vec::with_capacity(body.len());
            for (ln, tok) in body {
                values.push(rat::parse_rat(tok).ok_or(Error::Parse {
                    line: ln,
                    message: format!("bad edge weight `{tok}`"),
                })?);
            }
            explicit_to_instance(n, format, values, start_line)
        }
        (Some("EUC_2D"), "NODE_COORD_SECTION") => {
            if body.len() < 3 * n {
                return Err(Error::Parse { line: start_line, message: format!("expected {n} coordinate lines") });
            }
            let mut pts = Vec::with_capacity(n);
            for chunk in body.chunks(3).take(n) {
                let coord = |k: usize| -> Result<f64> {
                    let (ln, tok) = chunk[k];
                    tok.parse::<f64>().map_err(|_| Error::Parse { line: ln, message: format!("bad coordinate `{tok}`") })
                };
                pts.push((coord(1)?, coord(2)?));
            }
            MetricInstance::from_fn(n, |i, j| {
                let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
                // TSPLIB nint
                rat::int((dx * dx + dy * dy).sqrt().round() as i64)
            })
        }
        (Some(t), s) => Err(Error::Parse { line: start_line, message: format!("unsupported combination {t} / {s}") }),
        (None, _) => Err(Error::Parse { line: 0, message: "missing EDGE_WEIGHT_TYPE".into() }),
    }
}

fn explicit_to_instance(n: usize, format: WeightFormat, values: Vec<Rat>, line: usize) -> Result<MetricInstance> {
    let mut m: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    let mut it = values.into_iter();
    let mut next = || it.next().ok_or(Error::Parse { line, message: "edge weight section too short".into() });
    match format {
        WeightFormat::Full => {
            for row in m.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = Some(next()?);
                }
            }
        }
        WeightFormat::UpperRow | WeightFormat::UpperDiagRow => {
            let diag = format == WeightFormat::UpperDiagRow;
            for i in 0..n {
                for j in (if diag { i } else { i + 1 })..n {
                    let v = next()?;
                    m[i][j] = Some(v.clone());
                    m[j][i] = Some(v);
                }
            }
        }
        WeightFormat::LowerRow | WeightFormat::LowerDiagRow => {
            let diag = format == WeightFormat::LowerDiagRow;
            for i in 0..n {
                for j in 0..(if diag { i + 1 } else { i }) {
                    let v = next()?;
                    m[i][j] = Some(v.clone());
                    m[j][i] = Some(v);
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] != m[j][i] {
                return Err(Error::Validation(format!(
                    "asymmetric matrix: c({},{}) = {} but c({},{}) = {}",
                    i + 1,
                    j + 1,
                    m[i][j].as_ref().map(rat::fmt_rat).unwrap_or_default(),
                    j + 1,
                    i + 1,
                    m[j][i].as_ref().map(rat::fmt_rat).unwrap_or_default()
                )));
            }
        }
    }
    MetricInstance::from_fn(n, |i, j| m[i][j].clone().expect("filled"))
}
